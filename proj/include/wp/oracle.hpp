#pragma once

// Brute-force verification.
//
// brute_force_solve enumerates every trajectory over the candidate stock sets
// and candidate decisions, checking all complementarity constraints globally
// on the whole schedule. It does not use pending sets or the network.
// grid_search_solve drops the candidate restriction: every flow ranges over
// {0} and the lattice multiples inside its bounds.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "wp/lattice.hpp"
#include "wp/model.hpp"

namespace wp {

inline constexpr std::size_t kDefaultOracleCap = 10'000'000;

struct OracleResult {
    bool feasible = false;
    std::optional<Solution> solution;
    std::size_t leaves = 0;  // complete trajectories examined
};

/// Exact optimum over candidate trajectories. Throws CapExceeded past `cap` leaves.
OracleResult brute_force_solve(const Instance& inst, const StockCandidateSet& stocks,
                               std::size_t cap = kDefaultOracleCap, int threads = 0);

/// Exact optimum over all flows on the grid {0} U (g Z inside [L, U]), where g
/// is the gcd of the lattice basis (one unit without a lattice).
OracleResult grid_search_solve(const Instance& inst, std::size_t cap = kDefaultOracleCap);

/// Seeded random walk mixing candidate decisions with arbitrary grid flows.
/// Returns an audited feasible solution, or nullopt after `attempts` failures.
std::optional<Solution> random_feasible_sample(const Instance& inst, const StockCandidateSet& stocks,
                                               std::uint64_t seed, int attempts = 64);

}  // namespace wp
