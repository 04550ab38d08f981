#pragma once

// Constructors for common market patterns expressed as vendors plus
// complementarity constraints, and the time-dependent to time-independent
// bound reduction.
//
// Blocks use block-local 0-based vendor indices; append_block shifts them
// into an instance.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wp/model.hpp"

namespace wp {

struct VendorBlock {
    std::vector<std::vector<VendorPeriod>> vendors;       // [v][t-1]
    std::vector<ComplementarityConstraint> constraints;   // block-local vendor indices
};

/// Instance with no vendors, stock bounds [0, capacity] in every period.
Instance empty_instance(int horizon, Quantity initial_stock, Quantity capacity);

/// Adds the block's vendors after the existing ones; constraint ids continue
/// after the largest existing id.
void append_block(Instance& inst, VendorBlock block);

struct SpotPeriod {
    Quantity buy_cap;
    Rational buy_price;
    Quantity sell_cap;
    Rational sell_price;
};

/// One unconstrained vendor with per-period caps and prices (lower bounds 0).
VendorBlock build_spot_vendor(std::span<const SpotPeriod> periods);

struct Tier {
    Quantity cumulative_capacity;  // U_j
    Rational unit_cost;            // c_j
};

/// One vendor per tier with capacity U_j - U_{j-1} and unit cost c_j, chained
/// by (x_{j,t} - cap_j) x_{j+1,t} = 0. Requires strictly increasing capacities
/// and strictly increasing costs.
VendorBlock build_tiered_purchase(std::span<const Tier> tiers, int horizon);

struct PowerLevel {
    std::string name;
    Quantity lower;
    Quantity upper;
    Rational unit_cost;
    Rational fixed_cost;
};

/// One vendor per power level. Levels exclude each other within a period, and
/// each forbidden pair (a, b) yields x_{a,t} x_{b,t+1} = 0 and x_{b,t} x_{a,t+1} = 0.
VendorBlock build_ramp(std::span<const PowerLevel> levels, std::span<const std::pair<int, int>> forbidden,
                       int horizon);

/// ceil(log2(M+1)) vendors; vendor i buys exactly 2^i batches (Lx = Ux = 2^i U)
/// at fixed cost 2^i c_t. Inclusion-minimal vendor subsets exceeding M batches
/// are excluded by zero-anchored constraints.
VendorBlock build_batch_pricing(Quantity batch_size, int max_batches, std::span<const Rational> cost_per_batch);

/// Vendor subsets (as bit masks over vendor indices) excluded by build_batch_pricing.
std::vector<unsigned> batch_exclusion_masks(int max_batches);

/// Single-vendor instance with time-dependent bounds -> V = T vendors with
/// time-independent bounds. Vendor i trades at period i's prices; using it in
/// any other period costs a fixed charge larger than any attainable payoff swing.
Instance reduce_time_dependent(const Instance& single);

/// The big fixed charge used by reduce_time_dependent.
Rational reduction_penalty(const Instance& single);

/// 1-dimensional lattice {g} with gamma = max bound / g, where g is the gcd of
/// all nonzero flow bounds and explicit anchors (g = one unit when all are zero).
Lattice unit_lattice(const Instance& inst);

}  // namespace wp
