#pragma once

// Extreme-point candidate decisions for one period between two stock levels.
//
// Case 1 (sales below the opening stock): at most one flow is strictly inside
// its capacity range; every other flow sits on an anchor value. Case 2 (sales
// exhaust the opening stock): at most one sale and at most one purchase are
// free, solved from sum y = s_prev and sum x = s_next.
//
// Anchor values of a flow are {0, L, U} plus any explicit constants that
// constraints compare this flow against.

#include <cstdint>
#include <span>
#include <vector>

#include "wp/model.hpp"

namespace wp {

struct FlowMenu {
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    std::vector<std::int64_t> anchors;  // sorted, unique, inside {0} U [lower, upper]
};

/// Per-period flow menus, indexed [x_0..x_{V-1}, y_0..y_{V-1}].
struct PeriodMenu {
    int vendors = 0;
    std::vector<FlowMenu> flows;
};

PeriodMenu make_period_menu(const Instance& inst, int t);

/// Appends the candidate flow vectors (2V values each, canonical order,
/// duplicate-free) to `out`; returns how many were appended.
std::size_t enumerate_flows(const PeriodMenu& menu, Quantity s_prev, Quantity s_next, std::vector<std::int64_t>& out);

std::vector<Decision> enumerate_decisions(const Instance& inst, int t, Quantity s_prev, Quantity s_next);

/// Decision with derived w/z from a flat [x.., y..] vector.
Decision decision_from_flows(std::span<const std::int64_t> flows, int vendors);

/// 2V 3^(2V-1) + V^2 3^(2V-2): the candidate count bound without explicit anchors.
std::int64_t candidate_bound(int vendors);

}  // namespace wp
