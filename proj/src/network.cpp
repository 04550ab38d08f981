#include "wp/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <omp.h>

#include "wp/transitions.hpp"

namespace wp {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

struct Candidate {
    std::uint32_t from;
    std::uint32_t target_stock;
    std::uint64_t pending;
    std::uint32_t decision;
};

// Candidate decisions from one source stock to every target stock of the layer.
struct SourceGroup {
    std::uint32_t first_node = 0;  // range of layer t-1 nodes with this stock
    std::uint32_t last_node = 0;
    std::vector<std::int64_t> flows;
    std::vector<std::uint64_t> satisfied;
    std::vector<std::uint32_t> pair_begin;  // size targets + 1, in decision rows
    std::uint32_t base = 0;                 // first row in the layer pool
};

void expand_layer(const Network& net, int t, const NetworkLayer& prev, NetworkLayer& layer,
                  const NetworkOptions& opts) {
    const Instance& inst = net.instance();
    const int n = 2 * inst.vendors;
    const auto& targets = net.stocks().per_period[t];
    const auto menu = make_period_menu(inst, t);
    const auto& schedule = net.schedule();
    const int threads = thread_count(opts.threads);

    std::vector<SourceGroup> groups;
    for (std::uint32_t i = 0; i < prev.nodes.size();) {
        std::uint32_t j = i;
        while (j < prev.nodes.size() && prev.nodes[j].stock == prev.nodes[i].stock) ++j;
        SourceGroup g;
        g.first_node = i;
        g.last_node = j;
        groups.push_back(std::move(g));
        i = j;
    }

    // Candidate decisions per (source stock, target stock) pair.
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto& g = groups[gi];
        const Quantity s = prev.nodes[g.first_node].stock;
        g.pair_begin.assign(targets.size() + 1, 0);
        std::uint32_t rows = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            g.pair_begin[j] = rows;
            rows += static_cast<std::uint32_t>(enumerate_flows(menu, s, targets[j], g.flows));
        }
        g.pair_begin[targets.size()] = rows;
        g.satisfied.resize(rows);
        for (std::uint32_t r = 0; r < rows; ++r)
            g.satisfied[r] = schedule.satisfied_mask(t, std::span(g.flows).subspan(std::size_t{r} * n, n));
    }

    std::uint32_t pool_rows = 0;
    for (auto& g : groups) {
        g.base = pool_rows;
        pool_rows += g.pair_begin.back();
    }
    layer.flows.clear();
    layer.flows.reserve(std::size_t{pool_rows} * n);
    for (const auto& g : groups) layer.flows.insert(layer.flows.end(), g.flows.begin(), g.flows.end());

    // Arcs out of every source node.
    std::vector<std::vector<Candidate>> out(prev.nodes.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        for (std::uint32_t u = g.first_node; u < g.last_node; ++u) {
            auto& cands = out[u];
            const std::uint64_t pending = prev.nodes[u].pending;
            for (std::uint32_t j = 0; j < targets.size(); ++j) {
                for (std::uint32_t r = g.pair_begin[j]; r < g.pair_begin[j + 1]; ++r) {
                    if (auto next = schedule.advance(t, pending, g.satisfied[r]))
                        cands.push_back({u, j, *next, g.base + r});
                }
            }
        }
    }

    std::size_t arc_total = 0;
    for (const auto& c : out) arc_total += c.size();
    if (net.arc_count() + arc_total > opts.max_arcs)
        throw CapExceeded("network arc cap exceeded at layer " + std::to_string(t) + " (cap " +
                          std::to_string(opts.max_arcs) + ")");

    // Target nodes: distinct (stock, pending) keys in ascending order.
    std::vector<std::pair<std::uint32_t, std::uint64_t>> keys;
    keys.reserve(arc_total);
    for (const auto& cs : out)
        for (const auto& c : cs) keys.emplace_back(c.target_stock, c.pending);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (net.node_count() + keys.size() > opts.max_nodes)
        throw CapExceeded("network node cap exceeded at layer " + std::to_string(t) + " (cap " +
                          std::to_string(opts.max_nodes) + ")");

    layer.nodes.resize(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k)
        layer.nodes[k] = {targets[keys[k].first], keys[k].first, keys[k].second};

    // Stable counting sort by target keeps (from, decision) ascending within each target.
    std::vector<std::uint32_t> to_of;
    to_of.reserve(arc_total);
    layer.in_begin.assign(keys.size() + 1, 0);
    for (const auto& cs : out) {
        for (const auto& c : cs) {
            const auto it = std::lower_bound(keys.begin(), keys.end(), std::make_pair(c.target_stock, c.pending));
            const auto to = static_cast<std::uint32_t>(it - keys.begin());
            to_of.push_back(to);
            ++layer.in_begin[to + 1];
        }
    }
    std::partial_sum(layer.in_begin.begin(), layer.in_begin.end(), layer.in_begin.begin());
    layer.arcs.resize(arc_total);
    std::vector<std::uint32_t> fill(layer.in_begin.begin(), layer.in_begin.end() - 1);
    std::size_t idx = 0;
    for (const auto& cs : out) {
        for (const auto& c : cs) {
            const std::uint32_t to = to_of[idx++];
            layer.arcs[fill[to]++] = {c.from, to, c.decision};
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Network::Network(const Instance& inst, StockCandidateSet stocks)
    : inst_(&inst), stocks_(std::move(stocks)), schedule_(inst), payoff_(inst) {}

std::size_t Network::node_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.nodes.size();
    return n;
}

std::size_t Network::arc_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.arcs.size();
    return n;
}

std::span<const std::int64_t> Network::flows(int t, std::uint32_t decision) const {
    const std::size_t n = 2 * static_cast<std::size_t>(inst_->vendors);
    return std::span(layers[t].flows).subspan(decision * n, n);
}

Network build_network(const Instance& inst, const StockCandidateSet& stocks, const NetworkOptions& opts) {
    Network net(inst, stocks);
    net.layers.resize(inst.horizon + 1);
    net.layers[0].nodes.push_back({inst.initial_stock, 0, net.schedule().initial_mask()});
    net.layers[0].in_begin = {0, 0};
    for (int t = 1; t <= inst.horizon; ++t) {
        expand_layer(net, t, net.layers[t - 1], net.layers[t], opts);
        if (net.layers[t].nodes.empty()) break;  // nothing reachable beyond this layer
    }
    return net;
}

LongestPath longest_path(const Network& net, int threads_requested) {
    const int T = net.instance().horizon;
    const int threads = thread_count(threads_requested);
    const auto& payoff = net.payoff();

    std::vector<std::vector<std::int64_t>> value(T + 1);
    std::vector<std::vector<std::uint32_t>> best(T + 1);
    std::vector<std::vector<std::uint32_t>> rank(T + 1);
    value[0] = {0};
    rank[0] = {0};

    LongestPath result;
    for (int t = 1; t <= T; ++t) {
        const auto& layer = net.layers[t];
        const std::size_t count = layer.nodes.size();
        if (count == 0) return result;
        value[t].assign(count, 0);
        best[t].assign(count, 0);
        const auto& pv = value[t - 1];
        const auto& pr = rank[t - 1];

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
        for (std::size_t v = 0; v < count; ++v) {
            const Quantity stock = layer.nodes[v].stock;
            std::uint32_t chosen = layer.in_begin[v];
            std::int64_t chosen_value = 0;
            for (std::uint32_t a = layer.in_begin[v]; a < layer.in_begin[v + 1]; ++a) {
                const auto& arc = layer.arcs[a];
                const auto fl = net.flows(t, arc.decision);
                const std::int64_t val = checked::add(pv[arc.from], payoff.period(t, fl, stock));
                bool take = a == layer.in_begin[v] || val > chosen_value;
                if (!take && val == chosen_value) {
                    const auto& cur = layer.arcs[chosen];
                    if (pr[arc.from] != pr[cur.from]) {
                        take = pr[arc.from] < pr[cur.from];
                    } else {
                        const auto cf = net.flows(t, cur.decision);
                        take = std::lexicographical_compare(fl.begin(), fl.end(), cf.begin(), cf.end());
                    }
                }
                if (take) {
                    chosen = a;
                    chosen_value = val;
                }
            }
            value[t][v] = chosen_value;
            best[t][v] = chosen;
        }

        // Rank nodes of this layer by the lexicographic order of their best traces.
        std::vector<std::uint32_t> order(count);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& arc_a = layer.arcs[best[t][a]];
            const auto& arc_b = layer.arcs[best[t][b]];
            if (pr[arc_a.from] != pr[arc_b.from]) return pr[arc_a.from] < pr[arc_b.from];
            const auto fa = net.flows(t, arc_a.decision);
            const auto fb = net.flows(t, arc_b.decision);
            return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end());
        });
        rank[t].assign(count, 0);
        for (std::uint32_t r = 0; r < count; ++r) rank[t][order[r]] = r;
    }

    const auto& last = net.layers[T];
    if (last.nodes.empty()) return result;
    std::uint32_t terminal = 0;
    for (std::uint32_t v = 1; v < last.nodes.size(); ++v) {
        if (value[T][v] > value[T][terminal] || (value[T][v] == value[T][terminal] && rank[T][v] < rank[T][terminal]))
            terminal = v;
    }
    result.feasible = true;
    result.value = value[T][terminal];
    result.nodes.assign(T + 1, 0);
    result.arcs.assign(T, 0);
    std::uint32_t v = terminal;
    for (int t = T; t >= 1; --t) {
        result.nodes[t] = v;
        result.arcs[t - 1] = best[t][v];
        v = net.layers[t].arcs[best[t][v]].from;
    }
    result.nodes[0] = v;
    return result;
}

std::size_t count_dead_ends(const Network& net) {
    const int T = net.instance().horizon;
    std::size_t dead = 0;
    for (int t = 0; t < T; ++t) {
        std::vector<char> has_out(net.layers[t].nodes.size(), 0);
        for (const auto& a : net.layers[t + 1].arcs) has_out[a.from] = 1;
        dead += static_cast<std::size_t>(std::count(has_out.begin(), has_out.end(), 0));
    }
    return dead;
}

double node_size_bound(int horizon, std::size_t stock_union, int thickness) {
    const double s = static_cast<double>(stock_union);
    return horizon * s * s * std::pow(2.0, 2.0 * thickness);
}

double arc_size_bound(int horizon, int vendors, std::size_t stock_union, int thickness) {
    const double s = static_cast<double>(stock_union);
    return horizon * static_cast<double>(vendors) * vendors * std::pow(3.0, 2.0 * vendors) * s * s *
           std::pow(2.0, 2.0 * thickness);
}

NetworkStats network_stats(const Network& net) {
    NetworkStats st;
    for (const auto& l : net.layers) {
        st.nodes_per_layer.push_back(l.nodes.size());
        st.arcs_per_layer.push_back(l.arcs.size());
    }
    st.nodes = net.node_count();
    st.arcs = net.arc_count();
    st.dead_ends = count_dead_ends(net);
    st.stock_union = net.stocks().union_size();
    st.thickness = net.schedule().thickness();
    return st;
}

// ---------------------------------------------------------------------------

StockCandidateSet make_stock_set(const Instance& inst, StockSetChoice choice, std::size_t cap) {
    switch (choice) {
        case StockSetChoice::lattice: return lattice_stock_set(inst, cap);
        case StockSetChoice::exact: return exact_stock_set(inst, cap);
        case StockSetChoice::automatic:
            return inst.lattice ? lattice_stock_set(inst, cap) : exact_stock_set(inst, cap);
    }
    return lattice_stock_set(inst, cap);
}

namespace {

// Re-checks the extracted path against the independent per-arc definitions.
void verify_extraction(const Instance& inst, const Solution& sol) {
    PendingSet pending = initial_pending(inst);
    for (int t = 1; t <= inst.horizon; ++t) {
        auto next = advance(inst, pending, t, sol.periods[t - 1]);
        if (std::holds_alternative<DeadlineViolation>(next))
            throw std::logic_error("extracted path violates a deadline at t=" + std::to_string(t));
        pending = std::get<PendingSet>(next);
    }
    if (!pending.empty()) throw std::logic_error("extracted path ends with pending constraints");
    const auto audit = check_feasible(inst, sol);
    if (!audit.feasible())
        throw std::logic_error("extracted solution fails the audit: " + audit.violations.front().message);
}

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& opts) {
    auto stocks = make_stock_set(inst, opts.stock_set, opts.stock_cap);
    const Network net = build_network(inst, stocks, opts.network);
    SolveResult res;
    res.stats = network_stats(net);
    const auto path = longest_path(net, opts.network.threads);
    if (!path.feasible) {
        res.status = SolveStatus::infeasible;
        return res;
    }
    Solution sol;
    sol.stocks.push_back(inst.initial_stock);
    for (int t = 1; t <= inst.horizon; ++t) {
        const auto& arc = net.layers[t].arcs[path.arcs[t - 1]];
        sol.periods.push_back(decision_from_flows(net.flows(t, arc.decision), inst.vendors));
        sol.stocks.push_back(net.layers[t].nodes[arc.to].stock);
    }
    sol.objective = net.payoff().to_rational(path.value);
    verify_extraction(inst, sol);
    res.status = SolveStatus::optimal;
    res.solution = std::move(sol);
    return res;
}

SolveResult solve_reference(const Instance& inst, const StockCandidateSet& stocks) {
    struct State {
        Rational value;
        std::vector<Decision> trace;
    };
    using Key = std::pair<Quantity, PendingSet>;
    auto better = [](const Rational& v, const std::vector<Decision>& tr, const State& cur) {
        if (v != cur.value) return v > cur.value;
        return std::lexicographical_compare(tr.begin(), tr.end(), cur.trace.begin(), cur.trace.end());
    };

    SolveResult res;
    std::map<Key, State> layer;
    layer.emplace(Key{inst.initial_stock, initial_pending(inst)}, State{});
    res.stats.nodes_per_layer.push_back(1);
    res.stats.arcs_per_layer.push_back(0);
    for (int t = 1; t <= inst.horizon; ++t) {
        std::map<Key, State> next;
        std::size_t arcs = 0;
        for (const auto& [key, state] : layer) {
            for (const Quantity s_next : stocks.per_period[t]) {
                for (const auto& d : enumerate_decisions(inst, t, key.first, s_next)) {
                    auto adv = advance(inst, key.second, t, d);
                    if (std::holds_alternative<DeadlineViolation>(adv)) continue;
                    ++arcs;
                    const Rational v = state.value + evaluate_payoff(inst, t, d, s_next);
                    auto trace = state.trace;
                    trace.push_back(d);
                    Key k{s_next, std::get<PendingSet>(std::move(adv))};
                    auto it = next.find(k);
                    if (it == next.end()) {
                        next.emplace(std::move(k), State{v, std::move(trace)});
                    } else if (better(v, trace, it->second)) {
                        it->second = State{v, std::move(trace)};
                    }
                }
            }
        }
        res.stats.nodes_per_layer.push_back(next.size());
        res.stats.arcs_per_layer.push_back(arcs);
        layer = std::move(next);
    }
    for (auto n : res.stats.nodes_per_layer) res.stats.nodes += n;
    for (auto a : res.stats.arcs_per_layer) res.stats.arcs += a;
    res.stats.stock_union = stocks.union_size();
    res.stats.thickness = thickness(inst.constraints, inst.horizon);

    const State* winner = nullptr;
    Quantity final_stock;
    for (const auto& [key, state] : layer) {
        if (!winner || better(state.value, state.trace, *winner)) {
            winner = &state;
            final_stock = key.first;
        }
    }
    if (!winner) {
        res.status = SolveStatus::infeasible;
        return res;
    }
    Solution sol;
    sol.stocks.push_back(inst.initial_stock);
    for (const auto& d : winner->trace) sol.stocks.push_back(sol.stocks.back() - d.total_sale() + d.total_purchase());
    sol.periods = winner->trace;
    sol.objective = winner->value;
    res.status = SolveStatus::optimal;
    res.solution = std::move(sol);
    return res;
}

}  // namespace wp
