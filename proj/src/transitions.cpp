#include "wp/transitions.hpp"

#include <algorithm>

namespace wp {

namespace {

bool in_domain(const FlowMenu& f, std::int64_t v) { return v == 0 || (f.lower <= v && v <= f.upper); }

// Odometer over anchor choices of the flows in [begin, end) except `skip`.
// Calls visit(values) with the current full assignment; the skipped slot is 0.
template <class Visit>
void for_each_anchored(const PeriodMenu& menu, int begin, int end, int skip, std::vector<std::int64_t>& values,
                       Visit&& visit) {
    std::vector<int> slots;
    for (int i = begin; i < end; ++i) {
        if (i == skip) {
            values[i] = 0;
            continue;
        }
        slots.push_back(i);
        values[i] = menu.flows[i].anchors.front();
    }
    std::vector<std::size_t> pos(slots.size(), 0);
    while (true) {
        visit(values);
        std::size_t k = 0;
        for (; k < slots.size(); ++k) {
            const auto& a = menu.flows[slots[k]].anchors;
            if (++pos[k] < a.size()) {
                values[slots[k]] = a[pos[k]];
                break;
            }
            pos[k] = 0;
            values[slots[k]] = a.front();
        }
        if (k == slots.size()) return;
    }
}

}  // namespace

PeriodMenu make_period_menu(const Instance& inst, int t) {
    const int V = inst.vendors;
    PeriodMenu menu;
    menu.vendors = V;
    menu.flows.resize(2 * V);
    for (int v = 0; v < V; ++v) {
        const auto& b = inst.at(v, t);
        menu.flows[v] = {b.lx.raw(), b.ux.raw(), {0, b.lx.raw(), b.ux.raw()}};
        menu.flows[V + v] = {b.ly.raw(), b.uy.raw(), {0, b.ly.raw(), b.uy.raw()}};
    }
    for (const auto& c : inst.constraints) {
        for (const auto& cond : c.conditions) {
            if (cond.var.time != t || cond.anchor.tag != AnchorKind::explicit_value) continue;
            auto& f = menu.flows[cond.var.kind == FlowKind::purchase ? cond.var.vendor : V + cond.var.vendor];
            if (in_domain(f, cond.anchor.value.raw())) f.anchors.push_back(cond.anchor.value.raw());
        }
    }
    for (auto& f : menu.flows) {
        std::sort(f.anchors.begin(), f.anchors.end());
        f.anchors.erase(std::unique(f.anchors.begin(), f.anchors.end()), f.anchors.end());
    }
    return menu;
}

std::size_t enumerate_flows(const PeriodMenu& menu, Quantity s_prev, Quantity s_next, std::vector<std::int64_t>& out) {
    const int V = menu.vendors;
    const int n = 2 * V;
    const std::int64_t prev = s_prev.raw();
    const std::int64_t next = s_next.raw();
    const std::int64_t delta = checked::sub(next, prev);

    if (V == 0) {
        if (delta != 0 || prev < 0) return 0;
        return 1;  // the empty decision has no flow values to append
    }

    std::vector<std::int64_t> found;
    std::vector<std::int64_t> values(n, 0);
    auto emit = [&](const std::vector<std::int64_t>& v) { found.insert(found.end(), v.begin(), v.end()); };

    // Case 1: one free flow solved from the balance equation.
    for (int f = 0; f < n; ++f) {
        for_each_anchored(menu, 0, n, f, values, [&](std::vector<std::int64_t>& vals) {
            std::int64_t buy = 0, sell = 0;
            for (int v = 0; v < V; ++v) {
                buy += vals[v];
                sell += vals[V + v];
            }
            // buy/sell exclude the free slot, which is 0 here.
            const std::int64_t free_value = f < V ? delta + sell - buy : buy - sell - delta;
            if (!in_domain(menu.flows[f], free_value)) return;
            const std::int64_t total_sell = f < V ? sell : sell + free_value;
            if (total_sell > prev) return;
            vals[f] = free_value;
            emit(vals);
            vals[f] = 0;
        });
    }

    // Case 2: sales exhaust s_prev; one free sale and one free purchase.
    if (prev >= 0 && next >= 0) {
        std::vector<std::vector<std::int64_t>> sales, buys;
        for (int f = V; f < n; ++f) {
            for_each_anchored(menu, V, n, f, values, [&](std::vector<std::int64_t>& vals) {
                std::int64_t sell = 0;
                for (int v = V; v < n; ++v) sell += vals[v];
                const std::int64_t free_value = prev - sell;
                if (!in_domain(menu.flows[f], free_value)) return;
                std::vector<std::int64_t> s(vals.begin() + V, vals.end());
                s[f - V] = free_value;
                sales.push_back(std::move(s));
            });
        }
        for (int f = 0; f < V; ++f) {
            for_each_anchored(menu, 0, V, f, values, [&](std::vector<std::int64_t>& vals) {
                std::int64_t buy = 0;
                for (int v = 0; v < V; ++v) buy += vals[v];
                const std::int64_t free_value = next - buy;
                if (!in_domain(menu.flows[f], free_value)) return;
                std::vector<std::int64_t> b(vals.begin(), vals.begin() + V);
                b[f] = free_value;
                buys.push_back(std::move(b));
            });
        }
        std::vector<std::int64_t> full(n);
        for (const auto& b : buys) {
            for (const auto& s : sales) {
                std::copy(b.begin(), b.end(), full.begin());
                std::copy(s.begin(), s.end(), full.begin() + V);
                emit(full);
            }
        }
    }

    // Sort rows lexicographically and drop duplicates.
    const std::size_t rows = found.size() / n;
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    auto row = [&](std::size_t i) { return found.begin() + static_cast<std::ptrdiff_t>(i * n); };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(row(a), row(a) + n, row(b), row(b) + n);
    });
    std::size_t appended = 0;
    for (std::size_t k = 0; k < rows; ++k) {
        if (k > 0 && std::equal(row(order[k]), row(order[k]) + n, row(order[k - 1]))) continue;
        out.insert(out.end(), row(order[k]), row(order[k]) + n);
        ++appended;
    }
    return appended;
}

Decision decision_from_flows(std::span<const std::int64_t> flows, int vendors) {
    std::vector<Quantity> x(vendors), y(vendors);
    for (int v = 0; v < vendors; ++v) {
        x[v] = Quantity(flows[v]);
        y[v] = Quantity(flows[vendors + v]);
    }
    return Decision::from_flows(std::move(x), std::move(y));
}

std::vector<Decision> enumerate_decisions(const Instance& inst, int t, Quantity s_prev, Quantity s_next) {
    const auto menu = make_period_menu(inst, t);
    std::vector<std::int64_t> flat;
    const std::size_t count = enumerate_flows(menu, s_prev, s_next, flat);
    std::vector<Decision> out;
    out.reserve(count);
    const int n = 2 * inst.vendors;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(decision_from_flows(std::span(flat).subspan(i * n, n), inst.vendors));
    return out;
}

std::int64_t candidate_bound(int vendors) {
    if (vendors == 0) return 1;
    auto pow3 = [](int e) {
        std::int64_t r = 1;
        for (int i = 0; i < e; ++i) r *= 3;
        return r;
    };
    const std::int64_t V = vendors;
    return 2 * V * pow3(2 * vendors - 1) + V * V * pow3(2 * vendors - 2);
}

}  // namespace wp
