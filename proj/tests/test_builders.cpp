#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "wp/builders.hpp"
#include "wp/lattice.hpp"
#include "wp/network.hpp"
#include "wp/oracle.hpp"

using namespace wp;

namespace {

Instance finish(Instance inst) {
    inst.lattice = unit_lattice(inst);
    const auto rep = validate_instance(inst);
    EXPECT_TRUE(rep.ok()) << (rep.errors.empty() ? "" : rep.errors.front().path);
    EXPECT_TRUE(rep.lattice_assumption_holds);
    return inst;
}

std::vector<SpotPeriod> sell_only(std::vector<Rational> prices, std::int64_t cap) {
    std::vector<SpotPeriod> out;
    for (auto& p : prices) out.push_back({Quantity(0), 0, Quantity(cap), p});
    return out;
}

// Cost of buying q units from tiers filled in order.
Rational tier_cost(const std::vector<Tier>& tiers, std::int64_t q) {
    Rational cost;
    std::int64_t prev = 0;
    for (const auto& t : tiers) {
        const std::int64_t take = std::min(q, t.cumulative_capacity.raw()) - prev;
        if (take <= 0) break;
        cost += t.unit_cost * Rational(take);
        prev = t.cumulative_capacity.raw();
    }
    return cost;
}

}  // namespace

TEST(Tiered, ThreeTierShape) {
    const std::vector<Tier> tiers{{Quantity(4), 1}, {Quantity(10), 2}, {Quantity(12), 5}};
    const auto b = build_tiered_purchase(tiers, 2);
    ASSERT_EQ(b.vendors.size(), 3u);
    EXPECT_EQ(b.vendors[0][0].ux, Quantity(4));
    EXPECT_EQ(b.vendors[1][0].ux, Quantity(6));
    EXPECT_EQ(b.vendors[2][1].ux, Quantity(2));
    EXPECT_EQ(b.vendors[2][1].cx, Rational(5));
    ASSERT_EQ(b.constraints.size(), 4u);  // 2 chain links per period
    const auto& c = b.constraints[0].conditions;
    EXPECT_EQ(c[0].var.vendor, 0);
    EXPECT_EQ(c[0].anchor.tag, AnchorKind::upper);
    EXPECT_EQ(c[1].var.vendor, 1);
    EXPECT_EQ(c[1].anchor.tag, AnchorKind::zero);
}

TEST(Tiered, SingleTierHasNoConstraints) {
    const std::vector<Tier> tiers{{Quantity(4), 1}};
    const auto b = build_tiered_purchase(tiers, 3);
    EXPECT_EQ(b.vendors.size(), 1u);
    EXPECT_TRUE(b.constraints.empty());
}

TEST(Tiered, RejectsNonConvexTiers) {
    const std::vector<Tier> cost_down{{Quantity(4), 2}, {Quantity(8), 1}};
    EXPECT_THROW(build_tiered_purchase(cost_down, 1), std::invalid_argument);
    const std::vector<Tier> cap_down{{Quantity(4), 1}, {Quantity(4), 2}};
    EXPECT_THROW(build_tiered_purchase(cap_down, 1), std::invalid_argument);
}

TEST(Tiered, TwoPeriodExample) {
    Instance inst = empty_instance(2, Quantity(0), Quantity(10));
    const std::vector<Tier> tiers{{Quantity(5), 1}, {Quantity(10), 2}};
    append_block(inst, build_tiered_purchase(tiers, 2));
    append_block(inst, build_spot_vendor(sell_only({0, 4}, 10)));
    inst = finish(inst);
    const auto r = solve(inst);
    ASSERT_EQ(r.status, SolveStatus::optimal);
    EXPECT_EQ(r.solution->objective, Rational(25));
    EXPECT_EQ(r.solution->stocks[1], Quantity(10));
    EXPECT_EQ(brute_force_solve(inst, lattice_stock_set(inst)).solution->objective, Rational(25));
}

TEST(Tiered, OptimaPayTheTieredPrice) {
    for (int seed = 0; seed < 30; ++seed) {
        gen::Gen g(seed);
        const std::int64_t u1 = g.uniform(1, 3), u2 = u1 + g.uniform(1, 3);
        const std::vector<Tier> tiers{{Quantity(u1), g.price(0, 2)}, {Quantity(u2), Rational(3)}};
        const int T = static_cast<int>(g.uniform(1, 3));
        Instance inst = empty_instance(T, Quantity(0), Quantity(2 * u2));
        append_block(inst, build_tiered_purchase(tiers, T));
        std::vector<Rational> prices;
        for (int t = 0; t < T; ++t) prices.push_back(g.price(0, 6));
        append_block(inst, build_spot_vendor(sell_only(prices, 2 * u2)));
        inst = finish(inst);
        const auto o = brute_force_solve(inst, lattice_stock_set(inst));
        ASSERT_TRUE(o.feasible);
        for (int t = 1; t <= T; ++t) {
            const auto& d = o.solution->periods[t - 1];
            const std::int64_t q = d.x[0].raw() + d.x[1].raw();
            const Rational paid = inst.at(0, t).cx * Rational(d.x[0].raw()) + inst.at(1, t).cx * Rational(d.x[1].raw());
            EXPECT_EQ(paid, tier_cost(tiers, q)) << "seed " << seed << " t " << t;
        }
    }
}

TEST(Ramp, Shape) {
    const std::vector<PowerLevel> levels{{"l", Quantity(1), Quantity(2), 1, 0},
                                         {"m", Quantity(2), Quantity(4), 1, 0},
                                         {"h", Quantity(4), Quantity(6), 1, 0}};
    const std::vector<std::pair<int, int>> forbid{{0, 2}};
    const auto b = build_ramp(levels, forbid, 3);
    ASSERT_EQ(b.constraints.size(), 3u * 3 + 2u * 2);
    const auto& cross = b.constraints[9].conditions;
    EXPECT_EQ(cross[0].var.vendor, 0);
    EXPECT_EQ(cross[0].var.time, 1);
    EXPECT_EQ(cross[1].var.vendor, 2);
    EXPECT_EQ(cross[1].var.time, 2);
    const auto& back = b.constraints[10].conditions;
    EXPECT_EQ(back[0].var.vendor, 2);
    EXPECT_EQ(back[1].var.vendor, 0);
    const std::vector<PowerLevel> one{{"only", Quantity(0), Quantity(3), 1, 0}};
    EXPECT_TRUE(build_ramp(one, {}, 4).constraints.empty());
    const std::vector<std::pair<int, int>> bad{{0, 0}};
    EXPECT_THROW(build_ramp(levels, bad, 2), std::invalid_argument);
}

TEST(Batch, ExclusionMasks) {
    EXPECT_EQ(batch_exclusion_masks(10), (std::vector<unsigned>{0b1011u, 0b1100u}));
    EXPECT_TRUE(batch_exclusion_masks(7).empty());
    EXPECT_TRUE(batch_exclusion_masks(1).empty());
    // Minimal: removing any member brings the total to at most M.
    for (int m = 1; m <= 40; ++m) {
        const auto masks = batch_exclusion_masks(m);
        unsigned width = 0;
        while ((1u << width) <= static_cast<unsigned>(m)) ++width;
        for (unsigned s = 0; s < (1u << width); ++s) {
            bool excluded = false;
            for (unsigned k : masks) excluded = excluded || (s & k) == k;
            EXPECT_EQ(excluded, s > static_cast<unsigned>(m)) << "M=" << m << " subset " << s;
        }
    }
}

TEST(Batch, VendorsAndMaxPurchase) {
    const std::vector<Rational> costs{Rational(0)};
    const auto b = build_batch_pricing(Quantity(2), 10, costs);
    ASSERT_EQ(b.vendors.size(), 4u);
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(b.vendors[i][0].lx, Quantity(2 << i));
        EXPECT_EQ(b.vendors[i][0].ux, Quantity(2 << i));
    }
    EXPECT_EQ(build_batch_pricing(Quantity(2), 7, costs).vendors.size(), 3u);

    Instance inst = empty_instance(1, Quantity(0), Quantity(100));
    append_block(inst, b);
    inst.stock_payoff = {{{Rational(1), Rational(0)}}};
    inst = finish(inst);
    const auto o = brute_force_solve(inst, lattice_stock_set(inst));
    ASSERT_TRUE(o.feasible);
    EXPECT_EQ(o.solution->stocks[1], Quantity(20));
}

TEST(Batch, FeasiblePurchasesAreBatchMultiples) {
    const std::vector<Rational> costs{Rational(1), Rational(2)};
    Instance inst = empty_instance(2, Quantity(0), Quantity(60));
    append_block(inst, build_batch_pricing(Quantity(3), 5, costs));
    append_block(inst, build_spot_vendor(sell_only({0, 3}, 60)));
    inst = finish(inst);
    const auto stocks = lattice_stock_set(inst);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto s = random_feasible_sample(inst, stocks, seed);
        if (!s) continue;
        for (const auto& d : s->periods) {
            std::int64_t q = 0;
            for (int v = 0; v < 3; ++v) q += d.x[v].raw();
            EXPECT_EQ(q % 3, 0);
            EXPECT_LE(q, 15);
        }
    }
}

TEST(Reduce, SingleVendorShapeAndOptimum) {
    Instance single = empty_instance(1, Quantity(0), Quantity(5));
    append_block(single, build_spot_vendor(sell_only({2}, 3)));
    single = finish(single);
    const Instance r1 = reduce_time_dependent(single);
    EXPECT_EQ(r1.vendors, 1);
    EXPECT_EQ(r1.market, single.market);

    Instance two = empty_instance(2, Quantity(1), Quantity(5));
    VendorBlock blk;
    VendorPeriod a, b;
    a.ux = Quantity(2);
    a.cx = 1;
    b.uy = Quantity(3);
    b.ry = 2;
    blk.vendors = {{a, b}};
    append_block(two, blk);
    two = finish(two);
    const Instance r2 = reduce_time_dependent(two);
    ASSERT_EQ(r2.vendors, 2);
    const Rational big = reduction_penalty(two);
    for (int v = 0; v < 2; ++v)
        for (int t = 1; t <= 2; ++t) {
            EXPECT_EQ(r2.at(v, t).ux, two.at(0, v + 1).ux);
            EXPECT_EQ(r2.at(v, t).uy, two.at(0, v + 1).uy);
            EXPECT_EQ(r2.at(v, t).fx, v + 1 == t ? Rational(0) : big);
        }
    const auto o1 = brute_force_solve(two, lattice_stock_set(two));
    const auto o2 = brute_force_solve(r2, lattice_stock_set(r2));
    EXPECT_EQ(o1.solution->objective, o2.solution->objective);
}

TEST(Reduce, RemapsConstraints) {
    Instance single = empty_instance(2, Quantity(0), Quantity(5));
    VendorBlock blk;
    VendorPeriod p;
    p.ux = p.uy = Quantity(2);
    blk.vendors = {{p, p}};
    blk.constraints = {{0, {{{FlowKind::purchase, 0, 1}, {AnchorKind::zero, {}}}, {{FlowKind::sale, 0, 2}, {AnchorKind::upper, {}}}}}};
    append_block(single, blk);
    const Instance r = reduce_time_dependent(finish(single));
    EXPECT_EQ(r.constraints[0].conditions[0].var.vendor, 0);
    EXPECT_EQ(r.constraints[0].conditions[1].var.vendor, 1);
    EXPECT_THROW(reduce_time_dependent(r), std::invalid_argument);
}

TEST(Builders, OutputsValidate) {
    Instance inst = empty_instance(3, Quantity(0), Quantity(30));
    const std::vector<Tier> tiers{{Quantity(2), 1}, {Quantity(5), 2}};
    append_block(inst, build_tiered_purchase(tiers, 3));
    const std::vector<PowerLevel> levels{{"a", Quantity(1), Quantity(2), 1, 1}, {"b", Quantity(3), Quantity(4), 1, 1}};
    const std::vector<std::pair<int, int>> forbid{{0, 1}};
    append_block(inst, build_ramp(levels, forbid, 3));
    const std::vector<Rational> costs{1, 1, 1};
    append_block(inst, build_batch_pricing(Quantity(2), 5, costs));
    inst = finish(inst);
    EXPECT_EQ(inst.vendors, 2 + 2 + 3);
    std::set<int> ids;
    for (const auto& c : inst.constraints) ids.insert(c.id);
    EXPECT_EQ(ids.size(), inst.constraints.size());
    EXPECT_EQ(solve(inst).status, SolveStatus::optimal);
}

TEST(Builders, UnitLatticeAllZero) {
    const Instance inst = empty_instance(2, Quantity(0), Quantity(3));
    const Lattice l = unit_lattice(inst);
    EXPECT_EQ(l.gamma, 0);
    EXPECT_EQ(l.basis, std::vector<Quantity>{Quantity(1)});
}
