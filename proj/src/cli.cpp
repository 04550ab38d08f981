#include "wp/cli.hpp"

#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wp/builders.hpp"
#include "wp/constraints.hpp"
#include "wp/io.hpp"
#include "wp/lattice.hpp"
#include "wp/network.hpp"
#include "wp/oracle.hpp"

namespace wp::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string instance;
    std::string output;
    std::string stock_set = "automatic";
    std::size_t max_nodes = 0;
    std::size_t max_arcs = NetworkOptions{}.max_arcs;
    std::size_t stock_cap = kDefaultStockCap;
    int threads = 0;
    bool json = false;
};

StockSetChoice parse_choice(const std::string& s) {
    if (s == "lattice") return StockSetChoice::lattice;
    if (s == "exact") return StockSetChoice::exact;
    return StockSetChoice::automatic;
}

std::size_t default_max_nodes() {
    if (const char* env = std::getenv("WP_MAX_NODES")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
        }
    }
    return NetworkOptions{}.max_nodes;
}

SolveOptions solve_options(const Common& c) {
    SolveOptions o;
    o.stock_set = parse_choice(c.stock_set);
    o.stock_cap = c.stock_cap;
    o.network.max_nodes = c.max_nodes ? c.max_nodes : default_max_nodes();
    o.network.max_arcs = c.max_arcs;
    o.network.threads = c.threads;
    return o;
}

json stats_json(const NetworkStats& s) {
    return {{"nodes", s.nodes},
            {"arcs", s.arcs},
            {"nodes_per_layer", s.nodes_per_layer},
            {"arcs_per_layer", s.arcs_per_layer},
            {"dead_ends", s.dead_ends},
            {"stock_union", s.stock_union},
            {"thickness", s.thickness}};
}

void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        write_file(path, content);
}

int cmd_solve(const Common& c, std::ostream& out) {
    const Instance inst = load_instance(read_file(c.instance));
    const SolveResult r = solve(inst, solve_options(c));
    const bool optimal = r.status == SolveStatus::optimal;
    if (optimal && !c.output.empty()) write_file(c.output, serialize_solution(inst, *r.solution));
    if (c.json) {
        json j{{"status", optimal ? "optimal" : "infeasible"}, {"stats", stats_json(r.stats)}};
        if (optimal) {
            j["objective"] = r.solution->objective.str();
            j["solution"] = solution_to_json(inst, *r.solution);
        }
        out << j.dump(2) << "\n";
    } else {
        out << "status: " << (optimal ? "optimal" : "infeasible") << "\n";
        if (optimal) out << "objective: " << r.solution->objective.str() << "\n";
        out << "nodes: " << r.stats.nodes << "\narcs: " << r.stats.arcs << "\n";
    }
    return optimal ? ok : infeasible;
}

int cmd_check(const Common& c, const std::string& solution_path, std::ostream& out) {
    const Instance inst = load_instance(read_file(c.instance));
    const Solution sol = load_solution(inst, read_file(solution_path));
    const AuditReport rep = check_feasible(inst, sol);
    if (c.json) {
        json v = json::array();
        for (const auto& x : rep.violations) {
            json e{{"kind", to_string(x.kind)}, {"time", x.time}, {"message", x.message}};
            if (x.vendor >= 0) e["vendor"] = x.vendor + 1;
            if (x.constraint_id >= 0) e["constraint"] = x.constraint_id;
            v.push_back(std::move(e));
        }
        out << json{{"feasible", rep.feasible()}, {"violations", v}}.dump(2) << "\n";
    } else if (rep.feasible()) {
        out << "feasible\nobjective: " << sol.objective.str() << "\n";
    } else {
        for (const auto& x : rep.violations) {
            out << to_string(x.kind);
            if (x.constraint_id >= 0) out << " constraint " << x.constraint_id;
            if (x.time > 0) out << " t=" << x.time;
            if (x.vendor >= 0) out << " vendor=" << x.vendor + 1;
            out << ": " << x.message << "\n";
        }
    }
    return rep.feasible() ? ok : invalid;
}

int cmd_stats(const Common& c, std::ostream& out) {
    const Instance inst = load_instance(read_file(c.instance));
    const SolveOptions opts = solve_options(c);
    const int thick = thickness(inst.constraints, inst.horizon);
    std::vector<std::size_t> relevant;
    for (int t = 0; t <= inst.horizon; ++t) relevant.push_back(relevant_set(inst.constraints, t).size());

    const StockCandidateSet stocks = make_stock_set(inst, opts.stock_set, opts.stock_cap);
    std::vector<std::size_t> per_period;
    for (const auto& p : stocks.per_period) per_period.push_back(p.size());
    const std::size_t u = stocks.union_size();
    const double node_bound = node_size_bound(inst.horizon, u, thick);
    const double arc_bound = arc_size_bound(inst.horizon, inst.vendors, u, thick);

    json j{{"thickness", thick},
           {"relevant_per_layer", relevant},
           {"stock_set", stocks.mode == StockSetMode::lattice ? "lattice" : "exact"},
           {"stock_pre_clip", stocks.pre_clip_size},
           {"stock_per_period", per_period},
           {"stock_union", u},
           {"node_bound", node_bound},
           {"arc_bound", arc_bound}};
    bool capped = false;
    try {
        const Network net = build_network(inst, stocks, opts.network);
        j["observed"] = stats_json(network_stats(net));
    } catch (const CapExceeded& e) {
        capped = true;
        j["observed"] = nullptr;
        j["cap_exceeded"] = e.what();
    }
    if (c.json) {
        out << j.dump(2) << "\n";
    } else {
        out << "thickness: " << thick << "\nrelevant per layer:";
        for (auto r : relevant) out << " " << r;
        out << "\nstock set: " << j["stock_set"].get<std::string>() << "\nstock candidates before clipping: "
            << stocks.pre_clip_size << "\nstock candidates per period:";
        for (auto p : per_period) out << " " << p;
        out << "\nstock union: " << u << "\nnode bound: " << node_bound << "\narc bound: " << arc_bound << "\n";
        if (capped) {
            out << "network: " << j["cap_exceeded"].get<std::string>() << "\n";
        } else {
            const auto& o = j["observed"];
            out << "nodes: " << o["nodes"].get<std::size_t>() << "\narcs: " << o["arcs"].get<std::size_t>()
                << "\ndead ends: " << o["dead_ends"].get<std::size_t>() << "\n";
        }
    }
    return capped ? cap_exceeded : ok;
}

int cmd_oracle(const Common& c, std::size_t cap, bool grid, std::ostream& out) {
    const Instance inst = load_instance(read_file(c.instance));
    const OracleResult r = grid ? grid_search_solve(inst, cap)
                                : brute_force_solve(inst, make_stock_set(inst, parse_choice(c.stock_set), c.stock_cap),
                                                    cap, c.threads);
    if (r.feasible && !c.output.empty()) write_file(c.output, serialize_solution(inst, *r.solution));
    if (c.json) {
        json j{{"status", r.feasible ? "optimal" : "infeasible"}, {"leaves", r.leaves}};
        if (r.feasible) {
            j["objective"] = r.solution->objective.str();
            j["solution"] = solution_to_json(inst, *r.solution);
        }
        out << j.dump(2) << "\n";
    } else {
        out << "status: " << (r.feasible ? "optimal" : "infeasible") << "\n";
        if (r.feasible) out << "objective: " << r.solution->objective.str() << "\n";
        out << "leaves: " << r.leaves << "\n";
    }
    return r.feasible ? ok : infeasible;
}

int cmd_compare(const Common& c, std::size_t cap, std::ostream& out) {
    const Instance inst = load_instance(read_file(c.instance));
    const SolveOptions opts = solve_options(c);
    const SolveResult s = solve(inst, opts);
    const OracleResult o = brute_force_solve(inst, make_stock_set(inst, opts.stock_set, opts.stock_cap), cap, c.threads);
    auto describe = [](bool feasible, const std::optional<Solution>& sol) {
        return feasible ? sol->objective.str() : std::string("infeasible");
    };
    const std::string a = describe(s.status == SolveStatus::optimal, s.solution);
    const std::string b = describe(o.feasible, o.solution);
    const bool same = a == b;
    if (c.json)
        out << json{{"solve", a}, {"oracle", b}, {"match", same}}.dump(2) << "\n";
    else
        out << "solve: " << a << "\noracle: " << b << "\n" << (same ? "match" : "MISMATCH") << "\n";
    return same ? ok : mismatch;
}

// ---------------------------------------------------------------------------
// build

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    return parts;
}

// Quantity inputs are collected as rationals and rescaled to one integer scale.
class Quantities {
public:
    std::size_t add(const std::string& text) {
        values_.push_back(Rational::parse(text));
        scale_ = checked::lcm(scale_, values_.back().den());
        return values_.size() - 1;
    }
    std::int64_t scale() const { return scale_; }
    Quantity operator[](std::size_t i) const {
        const Rational& r = values_[i];
        return Quantity(checked::mul(r.num(), scale_ / r.den()));
    }

private:
    std::vector<Rational> values_;
    std::int64_t scale_ = 1;
};

struct BuildArgs {
    int horizon = 1;
    std::string s0 = "0";
    std::string capacity = "0";
    std::string sell_prices;  // comma list, one per period or a single value
    std::string sell_cap;
    bool no_lattice = false;
    std::string output;
};

std::vector<Rational> per_period_prices(const std::string& list, int horizon) {
    std::vector<Rational> out;
    for (const auto& p : split(list, ',')) out.push_back(Rational::parse(p));
    if (out.size() == 1) out.assign(horizon, out.front());
    if (static_cast<int>(out.size()) != horizon) throw std::invalid_argument("expected one price per period");
    return out;
}

// Finishes a built instance: optional spot sale vendor, lattice, normalized output.
int emit(Instance inst, Quantities& q, std::size_t sell_cap_idx, const BuildArgs& a, std::ostream& out) {
    if (!a.sell_prices.empty()) {
        const auto prices = per_period_prices(a.sell_prices, inst.horizon);
        std::vector<SpotPeriod> spot;
        for (const auto& p : prices) spot.push_back({Quantity(0), Rational(0), q[sell_cap_idx], p});
        append_block(inst, build_spot_vendor(spot));
    }
    if (!a.no_lattice) inst.lattice = unit_lattice(inst);
    const ValidationReport rep = validate_instance(inst);
    if (!rep.ok()) throw ValidationError(rep);
    write_or_print(a.output, serialize_instance(load_instance(serialize_instance(inst))), out);
    return ok;
}

Instance base_instance(const BuildArgs& a, Quantities& q, std::size_t s0, std::size_t cap) {
    Instance inst = empty_instance(a.horizon, q[s0], q[cap]);
    inst.scale = q.scale();
    return inst;
}

void add_build_common(CLI::App* sub, BuildArgs& a) {
    sub->add_option("--s0", a.s0, "initial stock");
    sub->add_option("--capacity", a.capacity, "stock capacity in every period");
    sub->add_option("--sell-price", a.sell_prices, "add a spot sale vendor with these prices (comma list)");
    sub->add_option("--sell-cap", a.sell_cap, "spot sale vendor capacity (default: stock capacity)");
    sub->add_flag("--no-lattice", a.no_lattice, "do not attach a unit lattice");
    sub->add_option("-o,--output", a.output, "output file (default stdout)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact solver for the multi-vendor warehouse problem"};
    app.require_subcommand(1);
    Common c;

    auto add_instance = [&](CLI::App* sub) { sub->add_option("instance", c.instance, "instance JSON")->required(); };
    auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--stock-set", c.stock_set, "candidate stock set")
            ->check(CLI::IsMember({"automatic", "lattice", "exact"}));
        sub->add_option("--max-nodes", c.max_nodes, "node cap (default WP_MAX_NODES or 5000000)");
        sub->add_option("--max-arcs", c.max_arcs, "arc cap");
        sub->add_option("--stock-cap", c.stock_cap, "cap on candidate stock values");
        sub->add_option("--threads", c.threads, "worker threads (0: OpenMP default)");
        sub->add_flag("--json", c.json, "machine-readable output");
    };

    auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
    add_instance(solve_cmd);
    add_solver(solve_cmd);
    solve_cmd->add_option("-o,--output", c.output, "write the solution JSON here");

    std::string solution_path;
    auto* check_cmd = app.add_subcommand("check", "audit a solution");
    add_instance(check_cmd);
    check_cmd->add_option("solution", solution_path, "solution JSON")->required();
    check_cmd->add_flag("--json", c.json, "machine-readable output");

    auto* stats_cmd = app.add_subcommand("stats", "constraint thickness, stock sets and network size");
    add_instance(stats_cmd);
    add_solver(stats_cmd);

    std::size_t cap = kDefaultOracleCap;
    bool grid = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force optimum");
    add_instance(oracle_cmd);
    add_solver(oracle_cmd);
    oracle_cmd->add_option("--cap", cap, "leaf cap");
    oracle_cmd->add_flag("--grid", grid, "search all lattice-grid flows instead of candidate decisions");
    oracle_cmd->add_option("-o,--output", c.output, "write the solution JSON here");

    auto* compare_cmd = app.add_subcommand("compare", "solve and oracle must agree");
    add_instance(compare_cmd);
    add_solver(compare_cmd);
    compare_cmd->add_option("--cap", cap, "oracle leaf cap");

    auto* build_cmd = app.add_subcommand("build", "emit a modeling pattern as instance JSON");
    build_cmd->require_subcommand(1);
    BuildArgs ba;

    std::string tiers;
    auto* tiered = build_cmd->add_subcommand("tiered", "tiered purchase cost");
    tiered->add_option("--tiers", tiers, "cumulative_capacity:unit_cost,...")->required();
    tiered->add_option("--horizon", ba.horizon)->required();
    add_build_common(tiered, ba);

    std::vector<std::string> levels, forbid;
    auto* ramp = build_cmd->add_subcommand("ramp", "power levels with ramp restrictions");
    ramp->add_option("--level", levels, "name:lower:upper:unit_cost:fixed_cost (repeatable)")->required();
    ramp->add_option("--forbid", forbid, "a:b forbidden consecutive level names (repeatable)");
    ramp->add_option("--horizon", ba.horizon)->required();
    add_build_common(ramp, ba);

    std::string batch_size, costs;
    int max_batches = 1;
    auto* batch = build_cmd->add_subcommand("batch", "batch pricing");
    batch->add_option("--batch-size", batch_size)->required();
    batch->add_option("--max-batches", max_batches)->required();
    batch->add_option("--cost", costs, "per-batch cost per period (comma list, sets the horizon)")->required();
    add_build_common(batch, ba);

    std::string reduce_input;
    auto* reduce = build_cmd->add_subcommand("reduce", "single vendor with time-dependent bounds to T vendors");
    reduce->add_option("instance", reduce_input)->required();
    reduce->add_option("-o,--output", ba.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        const int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? ok : usage;
    }

    try {
        if (*solve_cmd) return cmd_solve(c, out);
        if (*check_cmd) return cmd_check(c, solution_path, out);
        if (*stats_cmd) return cmd_stats(c, out);
        if (*oracle_cmd) return cmd_oracle(c, cap, grid, out);
        if (*compare_cmd) return cmd_compare(c, cap, out);
        if (*reduce) {
            Instance inst = reduce_time_dependent(load_instance(read_file(reduce_input)));
            write_or_print(ba.output, serialize_instance(load_instance(serialize_instance(inst))), out);
            return ok;
        }
        if (ba.sell_cap.empty()) ba.sell_cap = ba.capacity;
        Quantities q;
        const std::size_t s0 = q.add(ba.s0);
        const std::size_t capacity = q.add(ba.capacity);
        const std::size_t sell_cap = q.add(ba.sell_cap);
        if (*tiered) {
            std::vector<std::pair<std::size_t, Rational>> raw;
            for (const auto& t : split(tiers, ',')) {
                const auto f = split(t, ':');
                if (f.size() != 2) throw std::invalid_argument("tier must be capacity:cost, got '" + t + "'");
                raw.emplace_back(q.add(f[0]), Rational::parse(f[1]));
            }
            std::vector<Tier> ts;
            for (const auto& [i, cost] : raw) ts.push_back({q[i], cost});
            Instance inst = base_instance(ba, q, s0, capacity);
            append_block(inst, build_tiered_purchase(ts, ba.horizon));
            return emit(std::move(inst), q, sell_cap, ba, out);
        }
        if (*ramp) {
            std::vector<std::pair<std::size_t, std::size_t>> bounds;
            std::vector<PowerLevel> ls;
            for (const auto& l : levels) {
                const auto f = split(l, ':');
                if (f.size() != 5) throw std::invalid_argument("level must be name:lower:upper:unit:fixed, got '" + l + "'");
                bounds.emplace_back(q.add(f[1]), q.add(f[2]));
                ls.push_back({f[0], {}, {}, Rational::parse(f[3]), Rational::parse(f[4])});
            }
            for (std::size_t i = 0; i < ls.size(); ++i) {
                ls[i].lower = q[bounds[i].first];
                ls[i].upper = q[bounds[i].second];
            }
            std::map<std::string, int> index;
            for (std::size_t i = 0; i < ls.size(); ++i) index[ls[i].name] = static_cast<int>(i);
            std::vector<std::pair<int, int>> pairs;
            for (const auto& p : forbid) {
                const auto f = split(p, ':');
                if (f.size() != 2 || !index.count(f[0]) || !index.count(f[1]))
                    throw std::invalid_argument("unknown forbidden pair '" + p + "'");
                pairs.emplace_back(index[f[0]], index[f[1]]);
            }
            Instance inst = base_instance(ba, q, s0, capacity);
            append_block(inst, build_ramp(ls, pairs, ba.horizon));
            return emit(std::move(inst), q, sell_cap, ba, out);
        }
        if (*batch) {
            std::vector<Rational> cs;
            for (const auto& x : split(costs, ',')) cs.push_back(Rational::parse(x));
            ba.horizon = static_cast<int>(cs.size());
            const std::size_t u = q.add(batch_size);
            Instance inst = base_instance(ba, q, s0, capacity);
            append_block(inst, build_batch_pricing(q[u], max_batches, cs));
            return emit(std::move(inst), q, sell_cap, ba, out);
        }
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return invalid;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return invalid;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return cap_exceeded;
    } catch (const std::length_error& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return cap_exceeded;
    } catch (const OverflowError& e) {
        err << "overflow: " << e.what() << "\n";
        return invalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return invalid;
    }
    return usage;
}

}  // namespace wp::cli
