// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "wp/builders.hpp"
#include "wp/constraints.hpp"
#include "wp/lattice.hpp"
#include "wp/network.hpp"
#include "wp/oracle.hpp"
#include "wp/transitions.hpp"

using namespace wp;
using wp::gen::Gen;
using wp::gen::RandomSpec;

namespace {

// Pinned limits. Objective comparisons are exact rational equality.
constexpr int kOracleInstances = 200;
constexpr double kOracleSeconds = 300.0;
constexpr int kBoundPairs = 100;
constexpr int kGridInstances = 50;
constexpr int kScheduleCount = 200;
constexpr int kReductionInstances = 20;
constexpr int kDominanceInstances = 20;
constexpr int kSamplesPerInstance = 1000;
constexpr double kDeskSeconds = 30.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::string verdict(const SolveResult& r) {
    return r.status == SolveStatus::optimal ? r.solution->objective.str() : "infeasible";
}
std::string verdict(const OracleResult& r) { return r.feasible ? r.solution->objective.str() : "infeasible"; }

// Network size bound check shared by criteria 1 and 9.
struct SizeLedger {
    int checked = 0;
    int violations = 0;
    void record(const Instance& inst, const NetworkStats& s) {
        ++checked;
        const double nb = node_size_bound(inst.horizon, s.stock_union, s.thickness);
        const double ab = arc_size_bound(inst.horizon, inst.vendors, s.stock_union, s.thickness);
        if (static_cast<double>(s.nodes) > nb || static_cast<double>(s.arcs) > ab) ++violations;
    }
};
SizeLedger sizes;

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    int agree = 0, infeasible = 0;
    std::size_t leaves = 0, max_leaves = 0;
    std::string first_bad;
    for (int i = 0; i < kOracleInstances; ++i) {
        Gen g(1000 + i);
        const Instance inst = wp::gen::random_instance(g);
        const SolveResult s = solve(inst);
        const OracleResult o = brute_force_solve(inst, lattice_stock_set(inst));
        sizes.record(inst, s.stats);
        leaves += o.leaves;
        max_leaves = std::max(max_leaves, o.leaves);
        if (verdict(s) == verdict(o)) {
            ++agree;
            infeasible += !o.feasible;
        } else if (first_bad.empty()) {
            first_bad = fmt(" first mismatch seed %d: solve %s oracle %s", 1000 + i, verdict(s).c_str(),
                            verdict(o).c_str());
        }
    }
    const double secs = seconds_since(t0);
    return {agree == kOracleInstances && secs < kOracleSeconds,
            fmt("%d/%d agree (%d infeasible), %zu oracle leaves (max %zu), %.1f s, limit %.0f s", agree,
                kOracleInstances, infeasible, leaves, max_leaves, secs, kOracleSeconds) + first_bad};
}

Outcome candidate_bound_check() {
    int pairs = 0, over = 0;
    std::size_t worst[3] = {0, 0, 0};
    for (int vendors = 1; vendors <= 2; ++vendors) {
        RandomSpec spec;
        spec.max_vendors = vendors;
        spec.explicit_anchors = false;
        spec.max_stock_units = 6;
        for (int i = 0; i < kBoundPairs; ++i) {
            Gen g(5000 + 1000 * vendors + i);
            Instance inst;
            do inst = wp::gen::random_instance(g, spec);
            while (inst.vendors != vendors);
            const int t = static_cast<int>(g.uniform(1, inst.horizon));
            const std::int64_t top = inst.stock_at(t).upper.raw();
            const Quantity a(g.uniform(0, top)), b(g.uniform(0, top));
            const auto n = enumerate_decisions(inst, t, a, b).size();
            worst[vendors] = std::max(worst[vendors], n);
            ++pairs;
            if (static_cast<std::int64_t>(n) > candidate_bound(vendors)) ++over;
        }
    }
    return {over == 0 && candidate_bound(2) == 144 && candidate_bound(1) == 7,
            fmt("%d pairs, %d over bound; max count V=1: %zu (bound 7), V=2: %zu (bound 144)", pairs, over, worst[1],
                worst[2])};
}

Outcome grid_completeness() {
    RandomSpec spec;
    spec.max_horizon = 3;
    spec.stock_payoff = false;
    spec.fixed_costs = false;
    int ok = 0, feasible = 0;
    std::string first_bad;
    for (int i = 0; i < kGridInstances; ++i) {
        Gen g(9000 + i);
        const Instance inst = wp::gen::random_instance(g, spec);
        const OracleResult grid = grid_search_solve(inst);
        const OracleResult cand = brute_force_solve(inst, lattice_stock_set(inst));
        const bool beaten = grid.feasible && (!cand.feasible || grid.solution->objective > cand.solution->objective);
        if (!beaten) ++ok;
        else if (first_bad.empty())
            first_bad = fmt(" seed %d: grid %s candidates %s", 9000 + i, verdict(grid).c_str(), verdict(cand).c_str());
        feasible += cand.feasible;
    }
    return {ok == kGridInstances, fmt("%d/%d instances, grid never better (%d feasible)", ok, kGridInstances, feasible) +
                                      first_bad};
}

Outcome size_bound() {
    return {sizes.checked > 0 && sizes.violations == 0,
            fmt("%d networks measured, %d above the node/arc bounds", sizes.checked, sizes.violations)};
}

// Product-equals-zero check on the whole schedule, written independently of the
// constraint module.
bool globally_satisfied(const Instance& inst, const std::vector<Decision>& sched) {
    for (const auto& c : inst.constraints) {
        bool any = false;
        for (const auto& k : c.conditions) any = any || sched[k.var.time - 1].flow(k.var) == inst.resolve(k);
        if (!any) return false;
    }
    return true;
}

Outcome state_machine() {
    RandomSpec spec;
    spec.max_constraints = 6;
    int mismatches = 0, satisfied = 0;
    for (int i = 0; i < kScheduleCount; ++i) {
        Gen g(20000 + i);
        const Instance inst = wp::gen::random_instance(g, spec);
        const auto sched = wp::gen::random_schedule(g, inst);

        bool incremental = true;
        PendingSet pending = initial_pending(inst);
        const ConstraintSchedule cs(inst);
        std::uint64_t mask = cs.initial_mask();
        bool masked = true;
        for (int t = 1; t <= inst.horizon; ++t) {
            const Decision& d = sched[t - 1];
            if (incremental) {
                auto next = advance(inst, pending, t, d);
                if (std::holds_alternative<DeadlineViolation>(next)) incremental = false;
                else pending = std::get<PendingSet>(next);
            }
            if (masked) {
                std::vector<std::int64_t> flows;
                for (auto q : d.x) flows.push_back(q.raw());
                for (auto q : d.y) flows.push_back(q.raw());
                auto next = cs.advance(t, mask, cs.satisfied_mask(t, flows));
                if (!next) masked = false;
                else mask = *next;
            }
        }
        incremental = incremental && pending.empty();
        masked = masked && mask == 0;
        const bool global = globally_satisfied(inst, sched);
        satisfied += global;
        if (incremental != global || masked != global) ++mismatches;
    }
    return {mismatches == 0, fmt("%d schedules (%d satisfy all constraints), %d mismatches", kScheduleCount, satisfied,
                                 mismatches)};
}

Outcome builders() {
    std::vector<std::string> notes;
    bool pass = true;

    // (a) tiers (5,1), (10,2) over 2 periods, sale price 4 at t=2.
    {
        Instance inst = empty_instance(2, Quantity(0), Quantity(10));
        const std::vector<Tier> tiers{{Quantity(5), Rational(1)}, {Quantity(10), Rational(2)}};
        append_block(inst, build_tiered_purchase(tiers, 2));
        const std::vector<SpotPeriod> spot{{Quantity(0), 0, Quantity(10), 0}, {Quantity(0), 0, Quantity(10), 4}};
        append_block(inst, build_spot_vendor(spot));
        inst.lattice = unit_lattice(inst);
        const auto o = brute_force_solve(inst, lattice_stock_set(inst));
        const auto s = solve(inst);
        const bool ok = validate_instance(inst).ok() && verdict(o) == "25/1" && verdict(s) == "25/1";
        pass = pass && ok;
        notes.push_back("(a) oracle " + verdict(o) + " solve " + verdict(s));
    }
    // (b) M = 10 batches.
    {
        const auto masks = batch_exclusion_masks(10);
        const bool masks_ok = masks == std::vector<unsigned>{0b1011u, 0b1100u};
        const Quantity U(3);
        const std::vector<Rational> cost{0};
        Instance inst = empty_instance(1, Quantity(0), Quantity(15 * 3));
        append_block(inst, build_batch_pricing(U, 10, cost));
        inst.stock_payoff = {{{Rational(1), Rational(0)}}};
        inst.lattice = unit_lattice(inst);
        const auto& cons = inst.constraints;
        bool shape_ok = cons.size() == 2 && cons[0].conditions.size() == 3 && cons[1].conditions.size() == 2 &&
                        cons[0].conditions[0].var.vendor == 3 && cons[0].conditions[1].var.vendor == 1 &&
                        cons[0].conditions[2].var.vendor == 0 && cons[1].conditions[0].var.vendor == 3 &&
                        cons[1].conditions[1].var.vendor == 2;
        const auto o = brute_force_solve(inst, lattice_stock_set(inst));
        const bool max_ok = o.feasible && o.solution->stocks[1] == Quantity(10 * 3);
        pass = pass && masks_ok && shape_ok && max_ok && validate_instance(inst).ok();
        notes.push_back(fmt("(b) constraints %s, max purchase %s", masks_ok && shape_ok ? "{x3x2, x3x1x0}" : "wrong",
                            o.feasible ? inst.to_rational(o.solution->stocks[1]).short_str().c_str() : "none"));
    }
    // (c) ramp l/m/h with l<->h forbidden; prices reward alternating low and high.
    {
        int schedules = 0, bad = 0;
        for (int seed = 0; seed < 10; ++seed) {
            Gen g(31000 + seed);
            const std::vector<PowerLevel> levels{{"l", Quantity(1), Quantity(2), g.price(0, 2), g.price(0, 1)},
                                                 {"m", Quantity(2), Quantity(4), g.price(1, 3), g.price(0, 2)},
                                                 {"h", Quantity(4), Quantity(6), g.price(0, 2), g.price(0, 3)}};
            const std::vector<std::pair<int, int>> forbid{{0, 2}};
            Instance inst = empty_instance(3, Quantity(0), Quantity(8));
            append_block(inst, build_ramp(levels, forbid, 3));
            std::vector<SpotPeriod> spot;
            for (int t = 0; t < 3; ++t) spot.push_back({Quantity(0), 0, Quantity(8), g.price(1, 5)});
            append_block(inst, build_spot_vendor(spot));
            inst.lattice = unit_lattice(inst);
            const auto o = brute_force_solve(inst, lattice_stock_set(inst));
            const auto s = solve(inst);
            for (const auto* sol : {o.feasible ? &*o.solution : nullptr, s.solution ? &*s.solution : nullptr}) {
                if (!sol) continue;
                ++schedules;
                for (int t = 1; t < 3; ++t) {
                    const auto& a = sol->periods[t - 1].x;
                    const auto& b = sol->periods[t].x;
                    const bool lh = a[0] > Quantity(0) && b[2] > Quantity(0);
                    const bool hl = a[2] > Quantity(0) && b[0] > Quantity(0);
                    if (lh || hl) ++bad;
                }
            }
            if (verdict(o) != verdict(s)) ++bad;
        }
        pass = pass && bad == 0 && schedules > 0;
        notes.push_back(fmt("(c) %d optimal schedules, %d forbidden transitions", schedules, bad));
    }
    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
    return {pass, detail};
}

Outcome reduction() {
    RandomSpec spec;
    spec.max_horizon = 3;
    spec.max_vendors = 1;
    spec.max_constraints = 2;
    int equal = 0, tried = 0, skipped = 0;
    std::string first_bad;
    for (int seed = 40000; tried < kReductionInstances && seed < 41000; ++seed) {
        Gen g(seed);
        Instance single = wp::gen::random_instance(g, spec);
        // Time-dependent bounds are the point of the reduction.
        const auto a = brute_force_solve(single, lattice_stock_set(single));
        if (!a.feasible) {
            ++skipped;
            continue;
        }
        ++tried;
        const Instance reduced = reduce_time_dependent(single);
        const auto b = brute_force_solve(reduced, lattice_stock_set(reduced));
        if (verdict(a) == verdict(b)) ++equal;
        else if (first_bad.empty())
            first_bad = fmt(" seed %d: original %s reduced %s", seed, verdict(a).c_str(), verdict(b).c_str());
    }
    return {tried == kReductionInstances && equal == tried,
            fmt("%d/%d optima preserved (%d infeasible originals skipped)", equal, tried, skipped) + first_bad};
}

Outcome dominance() {
    int instances = 0, samples = 0, violations = 0;
    for (int seed = 50000; instances < kDominanceInstances && seed < 51000; ++seed) {
        Gen g(seed);
        const Instance inst = wp::gen::random_instance(g);
        const auto stocks = lattice_stock_set(inst);
        const SolveResult s = solve(inst);
        if (s.status != SolveStatus::optimal) continue;
        ++instances;
        for (int k = 0; k < kSamplesPerInstance; ++k) {
            const auto smp = random_feasible_sample(inst, stocks, static_cast<std::uint64_t>(seed) * 7919 + k);
            if (!smp) continue;
            ++samples;
            if (smp->objective > s.solution->objective) ++violations;
        }
    }
    return {instances == kDominanceInstances && samples > 0 && violations == 0,
            fmt("%d instances x %d seeds, %d feasible samples, %d above the optimum", instances, kSamplesPerInstance,
                samples, violations)};
}

Instance desk_instance() {
    const int T = 10;
    const std::int64_t d = 3;
    Gen g(777);
    Instance inst;
    inst.horizon = T;
    inst.vendors = 2;
    inst.initial_stock = Quantity(0);
    inst.lattice = Lattice{{Quantity(d)}, 2};
    inst.stock.assign(T, {Quantity(0), Quantity(200)});
    inst.market.resize(2);
    for (int v = 0; v < 2; ++v) {
        for (int t = 1; t <= T; ++t) {
            VendorPeriod p;
            p.ux = Quantity(2 * d);
            p.lx = Quantity(v == 0 ? 0 : d);
            p.uy = Quantity(2 * d);
            p.cx = g.price(1, 4);
            p.ry = g.price(1, 5);
            p.fx = v == 1 ? Rational(1) : Rational(0);
            inst.market[v].push_back(p);
        }
    }
    inst.stock_payoff.assign(T, {{Rational(-1, 4), Rational(0)}, {Rational(0), Rational(-1)}});
    int id = 0;
    for (int t = 1; t <= T; ++t) {
        // No simultaneous purchase and sale at vendor 0.
        inst.constraints.push_back({id++,
                                    {{{FlowKind::purchase, 0, t}, {AnchorKind::zero, {}}},
                                     {{FlowKind::sale, 0, t}, {AnchorKind::zero, {}}}}});
        if (t < T) {
            // Vendor 1 cannot sell at capacity in two consecutive periods.
            inst.constraints.push_back({id++,
                                        {{{FlowKind::sale, 1, t}, {AnchorKind::zero, {}}},
                                         {{FlowKind::sale, 1, t + 1}, {AnchorKind::zero, {}}},
                                         {{FlowKind::purchase, 1, t + 1}, {AnchorKind::upper, {}}}}});
        }
    }
    return inst;
}

Outcome desk_scale() {
    const Instance inst = desk_instance();
    const ValidationReport rep = validate_instance(inst);
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult s = solve(inst);
    const double secs = seconds_since(t0);
    sizes.record(inst, s.stats);
    const bool ok = rep.ok() && rep.thickness <= 4 && s.status == SolveStatus::optimal &&
                    check_feasible(inst, *s.solution).feasible() && secs < kDeskSeconds;
    return {ok, fmt("T=10 V=2 thickness %d: %s in %.2f s (limit %.0f s), %zu nodes, %zu arcs", rep.thickness,
                    verdict(s).c_str(), secs, kDeskSeconds, s.stats.nodes, s.stats.arcs)};
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    // Criterion 4 reads the networks measured by 1 and 9, so it runs last.
    const std::vector<Criterion> order{
        {1, "oracle equivalence", oracle_equivalence}, {2, "candidate bound", candidate_bound_check},
        {3, "grid completeness", grid_completeness},   {5, "state machine", state_machine},
        {6, "builders", builders},                     {7, "reduction", reduction},
        {8, "dominance", dominance},                   {9, "desk scale", desk_scale},
        {4, "size bound", size_bound},
    };
    std::vector<std::string> lines(10);
    int failures = 0;
    for (const auto& c : order) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        lines[c.number] = fmt("criterion %d %-20s %s  %s", c.number, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    for (int i = 1; i <= 9; ++i) std::puts(lines[i].c_str());
    return failures == 0 ? 0 : 1;
}
