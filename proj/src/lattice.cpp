#include "wp/lattice.hpp"

#include <algorithm>

namespace wp {

namespace {

void sort_unique(std::vector<Quantity>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Minimum stock lower bound and maximum stock upper bound over periods 1..T.
std::pair<Quantity, Quantity> stock_span(const Instance& inst) {
    Quantity lo = inst.stock_at(1).lower;
    Quantity hi = inst.stock_at(1).upper;
    for (int t = 2; t <= inst.horizon; ++t) {
        lo = std::min(lo, inst.stock_at(t).lower);
        hi = std::max(hi, inst.stock_at(t).upper);
    }
    return {lo, hi};
}

// Clip K + offsets to each period's bounds. `offsets` must be sorted.
StockCandidateSet clip(const Instance& inst, const std::vector<Quantity>& anchors,
                       const std::vector<Quantity>& offsets, std::size_t cap) {
    StockCandidateSet out;
    out.per_period.resize(inst.horizon + 1);
    out.per_period[0] = {inst.initial_stock};
    for (int t = 1; t <= inst.horizon; ++t) {
        const auto& sb = inst.stock_at(t);
        auto& vals = out.per_period[t];
        for (const Quantity k : anchors) {
            auto first = std::lower_bound(offsets.begin(), offsets.end(), sb.lower - k);
            auto last = std::upper_bound(offsets.begin(), offsets.end(), sb.upper - k);
            for (auto it = first; it != last; ++it) vals.push_back(k + *it);
        }
        sort_unique(vals);
        if (vals.size() > cap)
            throw CapExceeded("stock candidate set at t=" + std::to_string(t) + " has " + std::to_string(vals.size()) +
                              " values (cap " + std::to_string(cap) + ")");
    }
    return out;
}

std::vector<Quantity> lattice_offsets(const Instance& inst, std::size_t cap) {
    const auto& lat = *inst.lattice;
    const std::int64_t range = checked::mul(checked::mul(inst.vendors, inst.horizon), lat.gamma);
    std::vector<Quantity> offsets{Quantity(0)};
    for (const Quantity d : lat.basis) {
        std::vector<Quantity> next;
        next.reserve(offsets.size() * static_cast<std::size_t>(2 * range + 1));
        for (const Quantity o : offsets)
            for (std::int64_t beta = -range; beta <= range; ++beta) next.push_back(o + beta * d);
        sort_unique(next);
        if (next.size() > cap)
            throw CapExceeded("lattice offset set exceeds cap " + std::to_string(cap));
        offsets = std::move(next);
    }
    return offsets;
}

}  // namespace

std::size_t StockCandidateSet::union_size() const {
    std::vector<Quantity> all;
    for (std::size_t t = 1; t < per_period.size(); ++t) all.insert(all.end(), per_period[t].begin(), per_period[t].end());
    sort_unique(all);
    return all.size();
}

bool StockCandidateSet::contains(int t, Quantity q) const {
    const auto& v = per_period[t];
    return std::binary_search(v.begin(), v.end(), q);
}

std::vector<Quantity> stock_anchor_values(const Instance& inst) {
    std::vector<Quantity> k{Quantity(0), inst.initial_stock};
    for (int t = 1; t <= inst.horizon; ++t) {
        k.push_back(inst.stock_at(t).upper);
        k.push_back(inst.stock_at(t).lower);
    }
    sort_unique(k);
    return k;
}

std::vector<Quantity> lattice_candidates_unclipped(const Instance& inst, std::size_t cap) {
    if (!inst.lattice) throw std::invalid_argument("instance has no lattice basis");
    const auto offsets = lattice_offsets(inst, cap);
    std::vector<Quantity> all;
    for (const Quantity k : stock_anchor_values(inst)) {
        for (const Quantity o : offsets) all.push_back(k + o);
        if (all.size() > cap) {
            sort_unique(all);
            if (all.size() > cap) throw CapExceeded("unclipped lattice set exceeds cap " + std::to_string(cap));
        }
    }
    sort_unique(all);
    return all;
}

StockCandidateSet lattice_stock_set(const Instance& inst, std::size_t cap) {
    if (!inst.lattice) throw std::invalid_argument("instance has no lattice basis");
    const auto offsets = lattice_offsets(inst, cap);
    const auto anchors = stock_anchor_values(inst);
    auto out = clip(inst, anchors, offsets, cap);
    out.mode = StockSetMode::lattice;
    try {
        out.pre_clip_size = lattice_candidates_unclipped(inst, cap).size();
    } catch (const CapExceeded&) {
        out.pre_clip_size = 0;  // too many to count; the clipped sets are still valid
    }
    return out;
}

StockCandidateSet exact_stock_set(const Instance& inst, std::size_t cap) {
    std::vector<Quantity> alphabet;
    for (int v = 0; v < inst.vendors; ++v) {
        for (int t = 1; t <= inst.horizon; ++t) {
            const auto& b = inst.at(v, t);
            for (const Quantity q : {b.ly, b.uy, b.lx, b.ux})
                if (q != Quantity(0)) alphabet.push_back(q);
        }
    }
    for (const auto& c : inst.constraints)
        for (const auto& cond : c.conditions)
            if (cond.anchor.tag == AnchorKind::explicit_value && cond.anchor.value != Quantity(0))
                alphabet.push_back(cond.anchor.value);

    const auto anchors = stock_anchor_values(inst);
    const auto [lo, hi] = stock_span(inst);
    // Any useful offset o satisfies lo <= K + o <= hi for some K.
    const Quantity want_lo = lo - anchors.back();
    const Quantity want_hi = hi - anchors.front();

    // Process the largest values first so that pruning bites early.
    std::sort(alphabet.begin(), alphabet.end(), std::greater<>());
    Quantity remaining;
    for (const Quantity b : alphabet) remaining += b;

    std::vector<Quantity> sums{Quantity(0)};
    std::vector<Quantity> next;
    for (const Quantity b : alphabet) {
        remaining -= b;
        const Quantity keep_lo = want_lo - remaining;
        const Quantity keep_hi = want_hi + remaining;
        next.clear();
        next.reserve(sums.size() * 3);
        for (const Quantity s : sums) {
            for (const Quantity cand : {s - b, s, s + b})
                if (keep_lo <= cand && cand <= keep_hi) next.push_back(cand);
        }
        sort_unique(next);
        if (next.size() > cap)
            throw CapExceeded("exact stock closure exceeds cap " + std::to_string(cap) +
                              "; use the lattice stock set instead");
        sums.swap(next);
    }

    auto out = clip(inst, anchors, sums, cap);
    out.mode = StockSetMode::exact;
    std::vector<Quantity> all;
    for (const Quantity k : anchors)
        for (const Quantity o : sums) all.push_back(k + o);
    sort_unique(all);
    out.pre_clip_size = all.size();
    return out;
}

}  // namespace wp
