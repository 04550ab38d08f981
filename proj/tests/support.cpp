#include "support.hpp"

#include <algorithm>
#include <stdexcept>

namespace wp::gen {

Instance random_instance(Gen& g, const RandomSpec& spec) {
    Instance inst;
    inst.horizon = static_cast<int>(g.uniform(1, spec.max_horizon));
    inst.vendors = static_cast<int>(g.uniform(1, spec.max_vendors));
    const std::int64_t d = g.uniform(1, 2);
    const std::int64_t gamma = g.uniform(1, spec.max_gamma);
    inst.lattice = Lattice{{Quantity(d)}, gamma};
    auto units = [&](std::int64_t lo, std::int64_t hi) { return Quantity(d * g.uniform(lo, hi)); };

    const std::int64_t cap_units = g.uniform(1, spec.max_stock_units);
    for (int t = 1; t <= inst.horizon; ++t) {
        StockBounds b{Quantity(0), units(std::max<std::int64_t>(1, cap_units - 1), cap_units)};
        if (spec.nonzero_stock_lower && g.coin(1, 4)) b.lower = units(0, 1);
        inst.stock.push_back(b);
    }
    inst.initial_stock = units(0, cap_units / 2);

    inst.market.resize(inst.vendors);
    for (int v = 0; v < inst.vendors; ++v) {
        for (int t = 1; t <= inst.horizon; ++t) {
            VendorPeriod p;
            p.ux = units(0, gamma);
            p.lx = g.coin(1, 3) ? units(0, p.ux.raw() / d) : Quantity(0);
            p.uy = units(0, gamma);
            p.ly = g.coin(1, 3) ? units(0, p.uy.raw() / d) : Quantity(0);
            p.cx = g.price(0, 4);
            p.ry = g.price(0, 5);
            if (spec.fixed_costs && g.coin(1, 3)) p.fx = g.price(0, 3);
            if (spec.fixed_costs && g.coin(1, 3)) p.fy = g.price(0, 3);
            inst.market[v].push_back(p);
        }
    }

    if (spec.stock_payoff) {
        inst.stock_payoff.resize(inst.horizon);
        for (int t = 0; t < inst.horizon; ++t) {
            const int pieces = static_cast<int>(g.uniform(0, 2));
            for (int i = 0; i < pieces; ++i) inst.stock_payoff[t].push_back({g.price(-2, 2), g.price(-2, 2)});
        }
    }

    const int ncons = static_cast<int>(g.uniform(0, spec.max_constraints));
    for (int c = 0; c < ncons; ++c) {
        ComplementarityConstraint cc;
        cc.id = c;
        const int arity = static_cast<int>(g.uniform(2, spec.max_arity));
        const int t0 = static_cast<int>(g.uniform(1, inst.horizon));
        for (int k = 0; k < arity; ++k) {
            Condition cond;
            cond.var.kind = g.coin() ? FlowKind::purchase : FlowKind::sale;
            cond.var.vendor = static_cast<int>(g.uniform(0, inst.vendors - 1));
            cond.var.time = std::clamp(t0 + static_cast<int>(g.uniform(0, 1)), 1, inst.horizon);
            const auto r = g.uniform(0, spec.explicit_anchors ? 3 : 2);
            cond.anchor.tag = r == 0 ? AnchorKind::zero : r == 1 ? AnchorKind::lower
                            : r == 2 ? AnchorKind::upper : AnchorKind::explicit_value;
            if (cond.anchor.tag == AnchorKind::explicit_value) cond.anchor.value = units(0, gamma);
            cc.conditions.push_back(cond);
        }
        inst.constraints.push_back(std::move(cc));
    }

    const auto rep = validate_instance(inst);
    if (!rep.ok()) throw std::logic_error("generator produced an invalid instance: " + rep.errors.front().path);
    return inst;
}

std::vector<Decision> random_schedule(Gen& g, const Instance& inst) {
    std::vector<Decision> out;
    auto pick = [&](const VarRef& ref) {
        const Quantity lo = inst.lower(ref), hi = inst.upper(ref);
        std::vector<Quantity> anchors{Quantity(0), lo, hi};
        for (const auto& c : inst.constraints)
            for (const auto& k : c.conditions)
                if (k.var == ref) anchors.push_back(inst.resolve(k));
        if (g.coin(3, 4)) return anchors[g.uniform(0, static_cast<std::int64_t>(anchors.size()) - 1)];
        if (hi.raw() == 0) return Quantity(0);
        return Quantity(g.uniform(std::max<std::int64_t>(lo.raw(), 1), hi.raw()));
    };
    for (int t = 1; t <= inst.horizon; ++t) {
        std::vector<Quantity> x, y;
        for (int v = 0; v < inst.vendors; ++v) {
            x.push_back(pick({FlowKind::purchase, v, t}));
            y.push_back(pick({FlowKind::sale, v, t}));
        }
        out.push_back(Decision::from_flows(std::move(x), std::move(y)));
    }
    return out;
}

}  // namespace wp::gen
