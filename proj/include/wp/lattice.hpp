#pragma once

// Candidate stock levels per period.
//
// Lattice mode enumerates K + sum_i beta_i d_i with |beta_i| <= V T gamma and
// K in {0, s0, L^s_t, U^s_t}. Exact mode computes the signed subset sums of
// all flow bounds (and explicit anchor constants) around each K. Both clip
// every period to its stock bounds; layer 0 is {s0}.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wp/model.hpp"

namespace wp {

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StockSetMode { lattice, exact };

struct StockCandidateSet {
    std::vector<std::vector<Quantity>> per_period;  // [t] for t in 0..T, sorted and unique
    StockSetMode mode = StockSetMode::lattice;
    std::size_t pre_clip_size = 0;  // size of the unclipped union, 0 if past the cap

    /// Number of distinct values over periods 1..T.
    std::size_t union_size() const;
    bool contains(int t, Quantity q) const;
};

inline constexpr std::size_t kDefaultStockCap = 200'000;

/// K values {0, s0, U^s_1..U^s_T, L^s_1..L^s_T}, sorted and unique.
std::vector<Quantity> stock_anchor_values(const Instance& inst);

/// The unclipped lattice superset, sorted and unique. Throws CapExceeded past `cap` values.
std::vector<Quantity> lattice_candidates_unclipped(const Instance& inst, std::size_t cap = kDefaultStockCap);

/// Throws std::invalid_argument without a lattice, CapExceeded past `cap` values.
StockCandidateSet lattice_stock_set(const Instance& inst, std::size_t cap = kDefaultStockCap);

/// Throws CapExceeded when an intermediate sum set grows past `cap` values.
StockCandidateSet exact_stock_set(const Instance& inst, std::size_t cap = kDefaultStockCap);

}  // namespace wp
