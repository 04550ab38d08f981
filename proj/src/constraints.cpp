#include "wp/constraints.hpp"

#include <algorithm>
#include <stdexcept>

namespace wp {

namespace {

bool is_relevant(const ComplementarityConstraint& c, int t) { return c.t_min() <= t + 1 && t + 1 <= c.t_max(); }

}  // namespace

std::vector<int> relevant_set(std::span<const ComplementarityConstraint> constraints, int t) {
    std::vector<int> ids;
    for (const auto& c : constraints)
        if (is_relevant(c, t)) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<int> deadline_set(std::span<const ComplementarityConstraint> constraints, int t) {
    std::vector<int> ids;
    for (const auto& c : constraints)
        if (c.t_max() == t + 1) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

int thickness(std::span<const ComplementarityConstraint> constraints, int horizon) {
    std::size_t best = 0;
    for (int t = 0; t <= horizon; ++t) best = std::max(best, relevant_set(constraints, t).size());
    return static_cast<int>(best);
}

bool satisfied_at(const Instance& inst, const ComplementarityConstraint& c, int t, const Decision& d) {
    for (const auto& cond : c.conditions)
        if (cond.var.time == t && d.flow(cond.var) == inst.resolve(cond)) return true;
    return false;
}

PendingSet::PendingSet(std::vector<int> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool PendingSet::contains(int id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

PendingSet initial_pending(const Instance& inst) { return PendingSet(relevant_set(inst.constraints, 0)); }

std::variant<PendingSet, DeadlineViolation> advance(const Instance& inst, const PendingSet& pending, int t,
                                                    const Decision& d) {
    std::vector<int> next;
    const auto prev_relevant = relevant_set(inst.constraints, t - 1);
    for (const auto& c : inst.constraints) {
        const bool sat = satisfied_at(inst, c, t, d);
        if (pending.contains(c.id)) {
            if (sat) continue;
            if (c.t_max() == t) return DeadlineViolation{c.id};
            next.push_back(c.id);
        } else if (is_relevant(c, t) && !std::binary_search(prev_relevant.begin(), prev_relevant.end(), c.id) &&
                   !sat) {
            next.push_back(c.id);
        }
    }
    return PendingSet(std::move(next));
}

// ---------------------------------------------------------------------------

ConstraintSchedule::ConstraintSchedule(const Instance& inst) : inst_(&inst) {
    const int T = inst.horizon;
    const int V = inst.vendors;
    relevant_.resize(T + 1);
    for (int t = 0; t <= T; ++t) {
        for (int i = 0; i < static_cast<int>(inst.constraints.size()); ++i)
            if (is_relevant(inst.constraints[i], t)) relevant_[t].push_back(i);
        std::sort(relevant_[t].begin(), relevant_[t].end(),
                  [&](int a, int b) { return inst.constraints[a].id < inst.constraints[b].id; });
        thickness_ = std::max(thickness_, static_cast<int>(relevant_[t].size()));
    }
    if (thickness_ > kMaxThickness)
        throw std::length_error("constraint thickness " + std::to_string(thickness_) + " exceeds " +
                                std::to_string(kMaxThickness));

    checks_.resize(T + 1);
    deadline_.assign(T + 1, 0);
    carry_.resize(T + 1);
    entering_.assign(T + 1, 0);
    for (int t = 1; t <= T; ++t) {
        const auto& prev = relevant_[t - 1];
        const auto& cur = relevant_[t];
        checks_[t].resize(prev.size());
        carry_[t].assign(prev.size(), -1);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const auto& c = inst.constraints[prev[i]];
            for (const auto& cond : c.conditions) {
                if (cond.var.time != t) continue;
                const int idx = cond.var.kind == FlowKind::purchase ? cond.var.vendor : V + cond.var.vendor;
                checks_[t][i].push_back({idx, inst.resolve(cond).raw()});
            }
            if (c.t_max() == t) deadline_[t] |= std::uint64_t{1} << i;
            auto it = std::find(cur.begin(), cur.end(), prev[i]);
            if (it != cur.end()) carry_[t][i] = static_cast<int>(it - cur.begin());
        }
        for (std::size_t j = 0; j < cur.size(); ++j)
            if (std::find(prev.begin(), prev.end(), cur[j]) == prev.end()) entering_[t] |= std::uint64_t{1} << j;
    }
}

std::uint64_t ConstraintSchedule::full_mask(int t) const {
    const auto n = relevant_[t].size();
    return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

std::uint64_t ConstraintSchedule::satisfied_mask(int t, std::span<const std::int64_t> flows) const {
    std::uint64_t mask = 0;
    const auto& cs = checks_[t];
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (const auto& ch : cs[i]) {
            if (flows[ch.flow_index] == ch.value) {
                mask |= std::uint64_t{1} << i;
                break;
            }
        }
    }
    return mask;
}

std::optional<std::uint64_t> ConstraintSchedule::advance(int t, std::uint64_t pending, std::uint64_t satisfied) const {
    if (pending & deadline_[t] & ~satisfied) return std::nullopt;
    std::uint64_t rest = pending & ~satisfied;
    // Entering constraints have t_min = t+1, so no period-t decision can satisfy them.
    std::uint64_t next = entering_[t];
    while (rest) {
        const int i = __builtin_ctzll(rest);
        rest &= rest - 1;
        next |= std::uint64_t{1} << carry_[t][i];
    }
    return next;
}

PendingSet ConstraintSchedule::to_set(int t, std::uint64_t mask) const {
    std::vector<int> ids;
    for (std::size_t i = 0; i < relevant_[t].size(); ++i)
        if (mask >> i & 1) ids.push_back(inst_->constraints[relevant_[t][i]].id);
    return PendingSet(std::move(ids));
}

std::uint64_t ConstraintSchedule::to_mask(int t, const PendingSet& set) const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < relevant_[t].size(); ++i)
        if (set.contains(inst_->constraints[relevant_[t][i]].id)) mask |= std::uint64_t{1} << i;
    return mask;
}

}  // namespace wp
