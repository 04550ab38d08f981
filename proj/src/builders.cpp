#include "wp/builders.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wp {

namespace {

Condition cond(FlowKind kind, int vendor, int t, AnchorKind anchor) { return {{kind, vendor, t}, {anchor, {}}}; }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

}  // namespace

Instance empty_instance(int horizon, Quantity initial_stock, Quantity capacity) {
    Instance inst;
    inst.horizon = horizon;
    inst.vendors = 0;
    inst.initial_stock = initial_stock;
    inst.stock.assign(horizon, {Quantity(0), capacity});
    return inst;
}

void append_block(Instance& inst, VendorBlock block) {
    const int offset = inst.vendors;
    int next_id = 0;
    for (const auto& c : inst.constraints) next_id = std::max(next_id, c.id + 1);
    for (auto& v : block.vendors) {
        if (static_cast<int>(v.size()) != inst.horizon)
            throw std::invalid_argument("vendor block horizon does not match the instance");
        inst.market.push_back(std::move(v));
    }
    inst.vendors = static_cast<int>(inst.market.size());
    for (auto& c : block.constraints) {
        c.id = next_id++;
        for (auto& k : c.conditions) k.var.vendor += offset;
        inst.constraints.push_back(std::move(c));
    }
}

VendorBlock build_spot_vendor(std::span<const SpotPeriod> periods) {
    VendorBlock block;
    auto& v = block.vendors.emplace_back();
    for (const auto& p : periods) {
        VendorPeriod b;
        b.ux = p.buy_cap;
        b.cx = p.buy_price;
        b.uy = p.sell_cap;
        b.ry = p.sell_price;
        v.push_back(b);
    }
    return block;
}

VendorBlock build_tiered_purchase(std::span<const Tier> tiers, int horizon) {
    if (tiers.empty()) throw std::invalid_argument("at least one tier is required");
    for (std::size_t j = 0; j < tiers.size(); ++j) {
        const Quantity prev = j == 0 ? Quantity(0) : tiers[j - 1].cumulative_capacity;
        if (tiers[j].cumulative_capacity <= prev)
            throw std::invalid_argument("tier capacities must be positive and strictly increasing");
        if (j > 0 && tiers[j].unit_cost <= tiers[j - 1].unit_cost)
            throw std::invalid_argument("tier unit costs must be strictly increasing");
    }
    VendorBlock block;
    for (std::size_t j = 0; j < tiers.size(); ++j) {
        const Quantity prev = j == 0 ? Quantity(0) : tiers[j - 1].cumulative_capacity;
        VendorPeriod b;
        b.ux = tiers[j].cumulative_capacity - prev;
        b.cx = tiers[j].unit_cost;
        block.vendors.emplace_back(horizon, b);
    }
    for (int t = 1; t <= horizon; ++t) {
        for (int j = 0; j + 1 < static_cast<int>(tiers.size()); ++j) {
            block.constraints.push_back(
                {0, {cond(FlowKind::purchase, j, t, AnchorKind::upper), cond(FlowKind::purchase, j + 1, t, AnchorKind::zero)}});
        }
    }
    return block;
}

VendorBlock build_ramp(std::span<const PowerLevel> levels, std::span<const std::pair<int, int>> forbidden,
                       int horizon) {
    if (levels.empty()) throw std::invalid_argument("at least one power level is required");
    const int n = static_cast<int>(levels.size());
    for (auto [a, b] : forbidden)
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw std::invalid_argument("bad forbidden level pair");
    VendorBlock block;
    for (const auto& l : levels) {
        VendorPeriod b;
        b.lx = l.lower;
        b.ux = l.upper;
        b.cx = l.unit_cost;
        b.fx = l.fixed_cost;
        block.vendors.emplace_back(horizon, b);
    }
    const auto zero = AnchorKind::zero;
    const auto buy = FlowKind::purchase;
    for (int t = 1; t <= horizon; ++t)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) block.constraints.push_back({0, {cond(buy, a, t, zero), cond(buy, b, t, zero)}});
    for (int t = 1; t < horizon; ++t) {
        for (auto [a, b] : forbidden) {
            block.constraints.push_back({0, {cond(buy, a, t, zero), cond(buy, b, t + 1, zero)}});
            block.constraints.push_back({0, {cond(buy, b, t, zero), cond(buy, a, t + 1, zero)}});
        }
    }
    return block;
}

std::vector<unsigned> batch_exclusion_masks(int max_batches) {
    if (max_batches < 1) throw std::invalid_argument("max_batches must be at least 1");
    int k = 0;
    while ((1LL << k) <= max_batches) ++k;  // k = ceil(log2(M + 1))
    const auto m = static_cast<unsigned>(max_batches);
    std::vector<unsigned> masks;
    // A subset's batch total is its mask value.
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        if (mask <= m) continue;
        bool minimal = true;
        for (unsigned rest = mask; rest; rest &= rest - 1) {
            const unsigned bit = rest & (~rest + 1);
            if ((mask ^ bit) > m) {
                minimal = false;
                break;
            }
        }
        if (minimal) masks.push_back(mask);
    }
    return masks;
}

VendorBlock build_batch_pricing(Quantity batch_size, int max_batches, std::span<const Rational> cost_per_batch) {
    if (batch_size <= Quantity(0)) throw std::invalid_argument("batch size must be positive");
    const auto masks = batch_exclusion_masks(max_batches);
    int k = 0;
    while ((1LL << k) <= max_batches) ++k;
    const int horizon = static_cast<int>(cost_per_batch.size());
    VendorBlock block;
    for (int i = 0; i < k; ++i) {
        const std::int64_t batches = std::int64_t{1} << i;
        auto& v = block.vendors.emplace_back();
        for (int t = 1; t <= horizon; ++t) {
            VendorPeriod b;
            b.lx = b.ux = batches * batch_size;
            b.fx = Rational(batches) * cost_per_batch[t - 1];
            v.push_back(b);
        }
    }
    for (int t = 1; t <= horizon; ++t) {
        for (unsigned mask : masks) {
            ComplementarityConstraint c;
            for (int i = k - 1; i >= 0; --i)
                if (mask >> i & 1) c.conditions.push_back(cond(FlowKind::purchase, i, t, AnchorKind::zero));
            block.constraints.push_back(std::move(c));
        }
    }
    return block;
}

Rational reduction_penalty(const Instance& single) {
    const int T = single.horizon;
    Rational swing = 1;
    for (int t = 1; t <= T; ++t) {
        const auto& bt = single.at(0, t);
        for (int i = 1; i <= T; ++i) {
            const auto& bi = single.at(0, i);
            swing += abs(bt.ry) * single.to_rational(bi.uy) + abs(bt.cx) * single.to_rational(bi.ux);
        }
        swing += bt.fx + bt.fy;
        auto pieces = single.pieces(t);
        if (!pieces.empty()) {
            // Convex g: max at an endpoint; any single piece bounds it from below.
            const Rational lo = single.to_rational(single.stock_at(t).lower);
            const Rational hi = single.to_rational(single.stock_at(t).upper);
            auto g = [&](const Rational& s) {
                Rational best = pieces.front().slope * s + pieces.front().intercept;
                for (const auto& p : pieces) best = std::max(best, p.slope * s + p.intercept);
                return best;
            };
            const Rational gmax = std::max(g(lo), g(hi));
            const auto& p0 = pieces.front();
            const Rational gmin = std::min(p0.slope * lo + p0.intercept, p0.slope * hi + p0.intercept);
            swing += gmax - gmin;
        }
    }
    return swing;
}

Instance reduce_time_dependent(const Instance& single) {
    if (single.vendors != 1) throw std::invalid_argument("reduction expects a single-vendor instance");
    const int T = single.horizon;
    const Rational penalty = reduction_penalty(single);
    Instance out = single;
    out.vendors = T;
    out.market.assign(T, std::vector<VendorPeriod>(T));
    for (int i = 1; i <= T; ++i) {
        const auto& own = single.at(0, i);
        for (int t = 1; t <= T; ++t) {
            const auto& here = single.at(0, t);
            VendorPeriod b = own;
            if (t != i) {
                b.cx = here.cx;
                b.ry = here.ry;
                b.fx = penalty;
                b.fy = penalty;
            }
            out.market[i - 1][t - 1] = b;
        }
    }
    for (auto& c : out.constraints)
        for (auto& k : c.conditions) k.var.vendor = k.var.time - 1;
    return out;
}

Lattice unit_lattice(const Instance& inst) {
    std::int64_t g = 0;
    std::int64_t top = 0;
    auto take = [&](Quantity q) {
        g = std::gcd(g, q.raw());
        top = std::max(top, q.raw());
    };
    for (int v = 0; v < inst.vendors; ++v) {
        for (int t = 1; t <= inst.horizon; ++t) {
            const auto& b = inst.at(v, t);
            for (auto q : {b.lx, b.ux, b.ly, b.uy}) take(q);
        }
    }
    for (const auto& c : inst.constraints)
        for (const auto& k : c.conditions)
            if (k.anchor.tag == AnchorKind::explicit_value) take(k.anchor.value);
    if (g == 0) return Lattice{{Quantity(inst.scale)}, 0};
    return Lattice{{Quantity(g)}, top / g};
}

}  // namespace wp
