#pragma once

// Bookkeeping for generalized complementarity constraints along the horizon.
//
// A constraint with condition times in [t_min, t_max] is *relevant* at layer t
// when t_min <= t+1 <= t_max, and is a *deadline* constraint at layer t when
// t_max = t+1. A solver state at layer t carries the relevant constraints that
// are not yet satisfied (the pending set).

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "wp/model.hpp"

namespace wp {

/// Ids of constraints relevant at layer t (0..T), ascending.
std::vector<int> relevant_set(std::span<const ComplementarityConstraint> constraints, int t);

/// Ids of constraints with t_max = t+1, ascending.
std::vector<int> deadline_set(std::span<const ComplementarityConstraint> constraints, int t);

/// max over t in 0..T of |relevant_set(t)|.
int thickness(std::span<const ComplementarityConstraint> constraints, int horizon);

/// True iff some condition of c at period t holds with exact equality under d.
bool satisfied_at(const Instance& inst, const ComplementarityConstraint& c, int t, const Decision& d);

class PendingSet {
public:
    PendingSet() = default;
    explicit PendingSet(std::vector<int> ids);

    const std::vector<int>& ids() const { return ids_; }
    bool contains(int id) const;
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    friend auto operator<=>(const PendingSet&, const PendingSet&) = default;

private:
    std::vector<int> ids_;  // sorted, unique
};

struct DeadlineViolation {
    int constraint_id;
    friend bool operator==(const DeadlineViolation&, const DeadlineViolation&) = default;
};

/// Pending set of the source node: all of C^r_0.
PendingSet initial_pending(const Instance& inst);

/// Transition of the pending set along an arc into period t with decision d.
/// `pending` must be a subset of relevant_set(t-1).
std::variant<PendingSet, DeadlineViolation> advance(const Instance& inst, const PendingSet& pending, int t,
                                                    const Decision& d);

/// Precomputed bitmask form of relevant_set / advance used by the network.
/// Bit i of a layer-t mask stands for relevant(t)[i].
class ConstraintSchedule {
public:
    static constexpr int kMaxThickness = 63;

    /// Throws std::length_error if the thickness exceeds kMaxThickness.
    explicit ConstraintSchedule(const Instance& inst);

    int thickness() const { return thickness_; }
    std::uint64_t initial_mask() const { return full_mask(0); }
    /// Indices into inst.constraints, ordered by constraint id.
    const std::vector<int>& relevant(int t) const { return relevant_[t]; }
    std::uint64_t full_mask(int t) const;

    /// Bits (layer t-1 indexing) of relevant(t-1) satisfied by the period-t flows
    /// laid out as [x_0..x_{V-1}, y_0..y_{V-1}].
    std::uint64_t satisfied_mask(int t, std::span<const std::int64_t> flows) const;

    /// Pending mask at layer t, or nullopt on a deadline violation.
    std::optional<std::uint64_t> advance(int t, std::uint64_t pending, std::uint64_t satisfied) const;

    PendingSet to_set(int t, std::uint64_t mask) const;
    std::uint64_t to_mask(int t, const PendingSet& set) const;

private:
    struct Check {
        int flow_index;
        std::int64_t value;
    };
    const Instance* inst_;
    int thickness_ = 0;
    std::vector<std::vector<int>> relevant_;                  // [t] for t in 0..T
    std::vector<std::vector<std::vector<Check>>> checks_;     // [t][i]: time-t conditions of relevant(t-1)[i]
    std::vector<std::uint64_t> deadline_;                     // [t]: deadline bits in layer t-1 indexing
    std::vector<std::vector<int>> carry_;                     // [t][i]: bit in layer t for relevant(t-1)[i], or -1
    std::vector<std::uint64_t> entering_;                     // [t]: bits of C^r_t \ C^r_{t-1}
};

}  // namespace wp
