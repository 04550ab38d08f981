#pragma once

// Layered state network and longest-path solve.
//
// Layer t holds nodes (stock s_t, pending constraint set). An arc from layer
// t-1 to layer t carries one candidate decision between the two stock levels
// whose pending-set transition succeeds; its weight is the period-t payoff.
// Only states reachable from the source (s0, C^r_0) are built.
//
// The layer expansion and relaxation kernels run under OpenMP. A serial
// reference DP built directly on Decision/PendingSet/Rational is kept for
// cross-checking and benchmarking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "wp/constraints.hpp"
#include "wp/lattice.hpp"
#include "wp/model.hpp"

namespace wp {

struct NetworkOptions {
    std::size_t max_nodes = 5'000'000;
    std::size_t max_arcs = 100'000'000;
    int threads = 0;  // 0: OpenMP default
};

struct NetworkNode {
    Quantity stock;
    std::uint32_t stock_index = 0;  // into stocks.per_period[t]
    std::uint64_t pending = 0;      // ConstraintSchedule mask for this layer
};

struct NetworkArc {
    std::uint32_t from = 0;      // node index in layer t-1
    std::uint32_t to = 0;        // node index in layer t
    std::uint32_t decision = 0;  // row in Layer::flows
};

struct NetworkLayer {
    std::vector<NetworkNode> nodes;     // sorted by (stock, pending)
    std::vector<NetworkArc> arcs;       // arcs into this layer, sorted by (to, from, decision)
    std::vector<std::uint32_t> in_begin;  // CSR offsets into arcs, size nodes + 1
    std::vector<std::int64_t> flows;    // decision rows, 2V values each
};

class Network {
public:
    Network(const Instance& inst, StockCandidateSet stocks);

    const Instance& instance() const { return *inst_; }
    const StockCandidateSet& stocks() const { return stocks_; }
    const ConstraintSchedule& schedule() const { return schedule_; }
    const ScaledPayoff& payoff() const { return payoff_; }

    std::vector<NetworkLayer> layers;  // [0..T]

    std::size_t node_count() const;
    std::size_t arc_count() const;
    std::span<const std::int64_t> flows(int t, std::uint32_t decision) const;

private:
    const Instance* inst_;
    StockCandidateSet stocks_;
    ConstraintSchedule schedule_;
    ScaledPayoff payoff_;
};

/// Forward-reachable construction. Throws CapExceeded past the node/arc caps.
Network build_network(const Instance& inst, const StockCandidateSet& stocks, const NetworkOptions& opts = {});

struct LongestPath {
    bool feasible = false;
    std::int64_t value = 0;             // in units of 1 / payoff().denominator()
    std::vector<std::uint32_t> nodes;   // node index per layer 0..T
    std::vector<std::uint32_t> arcs;    // arc index into layers[t].arcs for t = 1..T (arcs[t-1])
};

/// Single forward sweep. Ties go to the lexicographically smallest decision trace.
LongestPath longest_path(const Network& net, int threads = 0);

/// Nodes in layers 0..T-1 without outgoing arcs.
std::size_t count_dead_ends(const Network& net);

// ---------------------------------------------------------------------------

enum class StockSetChoice { automatic, lattice, exact };

struct SolveOptions {
    StockSetChoice stock_set = StockSetChoice::automatic;  // automatic: lattice when present, else exact
    std::size_t stock_cap = kDefaultStockCap;
    NetworkOptions network;
};

enum class SolveStatus { optimal, infeasible };

struct NetworkStats {
    std::vector<std::size_t> nodes_per_layer;
    std::vector<std::size_t> arcs_per_layer;
    std::size_t nodes = 0;
    std::size_t arcs = 0;
    std::size_t dead_ends = 0;
    std::size_t stock_union = 0;  // |S| as the union of the per-period candidate sets
    int thickness = 0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    std::optional<Solution> solution;
    NetworkStats stats;
};

StockCandidateSet make_stock_set(const Instance& inst, StockSetChoice choice, std::size_t cap);

NetworkStats network_stats(const Network& net);

/// Builds the network, runs the longest path and extracts an audited solution.
SolveResult solve(const Instance& inst, const SolveOptions& opts = {});

/// Serial dynamic program over (stock, PendingSet) states with Rational
/// weights and whole-trace tie-breaking. Same contract as solve().
SolveResult solve_reference(const Instance& inst, const StockCandidateSet& stocks);

/// Worst-case network size bounds T |S|^2 2^(2C) and T V^2 3^(2V) |S|^2 2^(2C), as doubles.
double node_size_bound(int horizon, std::size_t stock_union, int thickness);
double arc_size_bound(int horizon, int vendors, std::size_t stock_union, int thickness);

}  // namespace wp
