#include "wp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include <omp.h>

#include "wp/transitions.hpp"

namespace wp {

namespace {

struct Option {
    Quantity stock;
    std::vector<std::int64_t> flows;  // [x.., y..]
    Rational payoff;
};

int flow_index(const VarRef& r, int vendors) { return r.kind == FlowKind::purchase ? r.vendor : vendors + r.vendor; }

std::int64_t grid_step(const Instance& inst) {
    if (!inst.lattice) return 1;
    std::int64_t g = 0;
    for (auto d : inst.lattice->basis) g = std::gcd(g, d.raw());
    return g > 0 ? g : 1;
}

std::vector<std::int64_t> grid_values(Quantity lo, Quantity hi, std::int64_t g) {
    std::vector<std::int64_t> v{0};
    const std::int64_t first = std::max<std::int64_t>(1, (lo.raw() + g - 1) / g);
    for (std::int64_t k = first; k * g <= hi.raw(); ++k) v.push_back(k * g);
    return v;
}

// Shared, read-only description of the search space.
struct Space {
    const Instance* inst = nullptr;
    const StockCandidateSet* stocks = nullptr;  // candidate mode when set
    std::vector<PeriodMenu> menus;              // [t-1]
    std::vector<std::vector<std::int64_t>> grid;  // [t-1], flat rows of 2V values
    std::vector<std::vector<const ComplementarityConstraint*>> ending;  // [t]
    std::size_t cap = 0;
};

Space make_space(const Instance& inst, const StockCandidateSet* stocks, std::size_t cap) {
    Space sp;
    sp.inst = &inst;
    sp.stocks = stocks;
    sp.cap = cap;
    sp.ending.resize(inst.horizon + 1);
    for (const auto& c : inst.constraints) sp.ending[c.t_max()].push_back(&c);
    const int n = 2 * inst.vendors;
    for (int t = 1; t <= inst.horizon; ++t) {
        if (stocks) {
            sp.menus.push_back(make_period_menu(inst, t));
            continue;
        }
        const std::int64_t g = grid_step(inst);
        std::vector<std::vector<std::int64_t>> values(n);
        for (int v = 0; v < inst.vendors; ++v) {
            const auto& b = inst.at(v, t);
            values[v] = grid_values(b.lx, b.ux, g);
            values[inst.vendors + v] = grid_values(b.ly, b.uy, g);
        }
        std::vector<std::int64_t> rows;
        std::vector<std::size_t> pos(n, 0);
        std::size_t count = 0;
        while (true) {
            if (++count > cap) throw CapExceeded("grid rows per period exceed the oracle cap");
            for (int i = 0; i < n; ++i) rows.push_back(values[i][pos[i]]);
            int i = n - 1;
            while (i >= 0 && ++pos[i] == values[i].size()) pos[i--] = 0;
            if (i < 0) break;
        }
        sp.grid.push_back(std::move(rows));
    }
    return sp;
}

class Search {
public:
    Search(const Space& sp, std::atomic<std::size_t>& leaves, std::atomic<bool>& over)
        : sp_(sp), inst_(*sp.inst), leaves_(leaves), over_(over), path_(inst_.horizon + 1, nullptr) {}

    const std::vector<Option>& options(int t, Quantity s_prev) {
        auto [it, fresh] = memo_.try_emplace({t, s_prev.raw()});
        if (fresh) it->second = build(t, s_prev);
        return it->second;
    }

    // Explores every completion of a prefix ending with `first` at period 1.
    void run_from(const Option& first) {
        path_[1] = &first;
        if (!constraints_hold(1)) return;
        descend(2, first.stock, first.payoff);
    }

    bool found = false;
    Rational best;
    std::vector<Option> best_path;

private:
    std::vector<Option> build(int t, Quantity s_prev) const {
        std::vector<Option> out;
        const int V = inst_.vendors;
        const int n = 2 * V;
        auto add = [&](Quantity s, std::span<const std::int64_t> f) {
            Option o;
            o.stock = s;
            o.flows.assign(f.begin(), f.end());
            o.payoff = evaluate_payoff(inst_, t, decision_from_flows(f, V), s);
            out.push_back(std::move(o));
        };
        if (sp_.stocks) {
            std::vector<std::int64_t> rows;
            for (Quantity s : sp_.stocks->per_period[t]) {
                rows.clear();
                const std::size_t k = enumerate_flows(sp_.menus[t - 1], s_prev, s, rows);
                for (std::size_t r = 0; r < k; ++r) add(s, std::span(rows).subspan(r * n, n));
            }
            return out;
        }
        const auto& rows = sp_.grid[t - 1];
        const auto& bounds = inst_.stock_at(t);
        for (std::size_t r = 0; r * n < rows.size() || (n == 0 && r == 0); ++r) {
            auto f = std::span(rows).subspan(r * n, n);
            std::int64_t buy = 0, sell = 0;
            for (int v = 0; v < V; ++v) {
                buy += f[v];
                sell += f[V + v];
            }
            if (sell > s_prev.raw()) continue;
            const Quantity s(s_prev.raw() + buy - sell);
            if (s < bounds.lower || s > bounds.upper) continue;
            add(s, f);
            if (n == 0) break;
        }
        return out;
    }

    bool constraints_hold(int t) const {
        for (const auto* c : sp_.ending[t]) {
            bool ok = false;
            for (const auto& k : c->conditions) {
                if (path_[k.var.time]->flows[flow_index(k.var, inst_.vendors)] == inst_.resolve(k).raw()) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        return true;
    }

    void descend(int t, Quantity s_prev, const Rational& acc) {
        if (over_.load(std::memory_order_relaxed)) return;
        if (t > inst_.horizon) {
            if (leaves_.fetch_add(1, std::memory_order_relaxed) + 1 > sp_.cap) {
                over_.store(true);
                return;
            }
            if (!found || acc > best) {
                found = true;
                best = acc;
                best_path.clear();
                for (int i = 1; i <= inst_.horizon; ++i) best_path.push_back(*path_[i]);
            }
            return;
        }
        const auto& opts = options(t, s_prev);
        for (const auto& o : opts) {
            path_[t] = &o;
            if (!constraints_hold(t)) continue;
            descend(t + 1, o.stock, acc + o.payoff);
        }
    }

    const Space& sp_;
    const Instance& inst_;
    std::atomic<std::size_t>& leaves_;
    std::atomic<bool>& over_;
    std::vector<const Option*> path_;
    std::map<std::pair<int, std::int64_t>, std::vector<Option>> memo_;
};

Solution to_solution(const Instance& inst, const std::vector<Option>& path, const Rational& value) {
    Solution sol;
    sol.stocks.push_back(inst.initial_stock);
    for (const auto& o : path) {
        sol.periods.push_back(decision_from_flows(o.flows, inst.vendors));
        sol.stocks.push_back(o.stock);
    }
    sol.objective = value;
    return sol;
}

OracleResult run_search(const Instance& inst, const StockCandidateSet* stocks, std::size_t cap, int threads) {
    OracleResult res;
    if (inst.horizon == 0) {
        res.feasible = true;
        res.leaves = 1;
        res.solution = Solution{{}, {inst.initial_stock}, Rational(0)};
        return res;
    }
    const Space sp = make_space(inst, stocks, cap);
    std::atomic<std::size_t> leaves{0};
    std::atomic<bool> over{false};

    Search root(sp, leaves, over);
    const auto& first = root.options(1, inst.initial_stock);
    std::vector<Search> parts;
    parts.reserve(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) parts.emplace_back(sp, leaves, over);

    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (std::size_t i = 0; i < first.size(); ++i) parts[i].run_from(first[i]);

    res.leaves = leaves.load();
    if (over.load()) throw CapExceeded("oracle enumeration exceeded " + std::to_string(cap) + " leaves");

    // Merge in enumeration order: the first maximum wins.
    const Search* winner = nullptr;
    for (const auto& p : parts)
        if (p.found && (!winner || p.best > winner->best)) winner = &p;
    if (!winner) return res;
    res.feasible = true;
    res.solution = to_solution(inst, winner->best_path, winner->best);
    if (!check_feasible(inst, *res.solution).feasible())
        throw std::logic_error("oracle produced an infeasible trajectory");
    return res;
}

}  // namespace

OracleResult brute_force_solve(const Instance& inst, const StockCandidateSet& stocks, std::size_t cap, int threads) {
    return run_search(inst, &stocks, cap, threads);
}

OracleResult grid_search_solve(const Instance& inst, std::size_t cap) { return run_search(inst, nullptr, cap, 0); }

std::optional<Solution> random_feasible_sample(const Instance& inst, const StockCandidateSet& stocks,
                                               std::uint64_t seed, int attempts) {
    std::mt19937_64 rng(seed);
    const int V = inst.vendors;
    const int n = 2 * V;
    std::vector<PeriodMenu> menus;
    for (int t = 1; t <= inst.horizon; ++t) menus.push_back(make_period_menu(inst, t));

    auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    auto random_flow = [&](Quantity lo, Quantity hi) -> std::int64_t {
        if (hi.raw() <= 0 || lo > hi || uniform(0, 2) == 0) return 0;
        return uniform(std::max<std::int64_t>(lo.raw(), 1), hi.raw());
    };

    std::vector<std::int64_t> rows;
    for (int a = 0; a < attempts; ++a) {
        Solution sol;
        sol.stocks.push_back(inst.initial_stock);
        bool ok = true;
        for (int t = 1; t <= inst.horizon && ok; ++t) {
            const Quantity s_prev = sol.stocks.back();
            std::vector<std::int64_t> pick;
            for (int tries = 0; tries < 16 && pick.empty() && n > 0; ++tries) {
                if (uniform(0, 1) == 0) {
                    const auto& cand = stocks.per_period[t];
                    if (cand.empty()) break;
                    rows.clear();
                    const Quantity s = cand[uniform(0, static_cast<std::int64_t>(cand.size()) - 1)];
                    const std::size_t k = enumerate_flows(menus[t - 1], s_prev, s, rows);
                    if (k == 0) continue;
                    const auto r = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(k) - 1));
                    pick.assign(rows.begin() + r * n, rows.begin() + (r + 1) * n);
                } else {
                    std::vector<std::int64_t> f(n);
                    std::int64_t buy = 0, sell = 0;
                    for (int v = 0; v < V; ++v) {
                        const auto& b = inst.at(v, t);
                        f[v] = random_flow(b.lx, b.ux);
                        f[V + v] = random_flow(b.ly, b.uy);
                        buy += f[v];
                        sell += f[V + v];
                    }
                    const std::int64_t s = s_prev.raw() + buy - sell;
                    if (sell > s_prev.raw() || s < inst.stock_at(t).lower.raw() || s > inst.stock_at(t).upper.raw())
                        continue;
                    pick = std::move(f);
                }
            }
            if (n == 0) {
                const auto& b = inst.stock_at(t);
                if (s_prev < b.lower || s_prev > b.upper) ok = false;
            } else if (pick.empty()) {
                ok = false;
            }
            if (!ok) break;
            Decision d = decision_from_flows(pick, V);
            sol.stocks.push_back(s_prev + d.total_purchase() - d.total_sale());
            sol.periods.push_back(std::move(d));
        }
        if (!ok) continue;
        sol.objective = total_payoff(inst, sol);
        if (check_feasible(inst, sol).feasible()) return sol;
    }
    return std::nullopt;
}

}  // namespace wp
