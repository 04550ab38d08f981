#include "wp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "wp/constraints.hpp"

namespace wp {

int ComplementarityConstraint::t_min() const {
    int t = INT32_MAX;
    for (const auto& c : conditions) t = std::min(t, c.var.time);
    return t;
}

int ComplementarityConstraint::t_max() const {
    int t = INT32_MIN;
    for (const auto& c : conditions) t = std::max(t, c.var.time);
    return t;
}

std::span<const StockPiece> Instance::pieces(int t) const {
    if (stock_payoff.empty()) return {};
    return stock_payoff[t - 1];
}

Quantity Instance::lower(const VarRef& ref) const {
    const auto& b = at(ref.vendor, ref.time);
    return ref.kind == FlowKind::purchase ? b.lx : b.ly;
}

Quantity Instance::upper(const VarRef& ref) const {
    const auto& b = at(ref.vendor, ref.time);
    return ref.kind == FlowKind::purchase ? b.ux : b.uy;
}

Quantity Instance::resolve(const Condition& c) const {
    switch (c.anchor.tag) {
        case AnchorKind::zero: return Quantity(0);
        case AnchorKind::lower: return lower(c.var);
        case AnchorKind::upper: return upper(c.var);
        case AnchorKind::explicit_value: return c.anchor.value;
    }
    return Quantity(0);
}

bool operator==(const VendorPeriod& a, const VendorPeriod& b) {
    return a.lx == b.lx && a.ux == b.ux && a.ly == b.ly && a.uy == b.uy && a.cx == b.cx && a.ry == b.ry &&
           a.fx == b.fx && a.fy == b.fy;
}
bool operator==(const StockPiece& a, const StockPiece& b) { return a.slope == b.slope && a.intercept == b.intercept; }
bool operator==(const StockBounds& a, const StockBounds& b) { return a.lower == b.lower && a.upper == b.upper; }

bool operator==(const Instance& a, const Instance& b) {
    // An absent payoff list and a list of T empty lists describe the same g.
    auto payoff_equal = [&] {
        for (int t = 1; t <= a.horizon; ++t) {
            auto pa = a.pieces(t);
            auto pb = b.pieces(t);
            if (!std::equal(pa.begin(), pa.end(), pb.begin(), pb.end())) return false;
        }
        return true;
    };
    return a.horizon == b.horizon && a.vendors == b.vendors && a.scale == b.scale &&
           a.initial_stock == b.initial_stock && a.stock == b.stock && a.market == b.market && payoff_equal() &&
           a.constraints == b.constraints && a.lattice == b.lattice;
}

Decision Decision::from_flows(std::vector<Quantity> x, std::vector<Quantity> y) {
    Decision d;
    d.w.resize(x.size());
    d.z.resize(y.size());
    for (std::size_t v = 0; v < x.size(); ++v) d.w[v] = x[v] > Quantity(0) ? 1 : 0;
    for (std::size_t v = 0; v < y.size(); ++v) d.z[v] = y[v] > Quantity(0) ? 1 : 0;
    d.x = std::move(x);
    d.y = std::move(y);
    return d;
}

Quantity Decision::total_purchase() const {
    Quantity s;
    for (auto q : x) s += q;
    return s;
}

Quantity Decision::total_sale() const {
    Quantity s;
    for (auto q : y) s += q;
    return s;
}

std::strong_ordering operator<=>(const Decision& a, const Decision& b) {
    if (auto c = std::lexicographical_compare_three_way(a.x.begin(), a.x.end(), b.x.begin(), b.x.end()); c != 0)
        return c;
    return std::lexicographical_compare_three_way(a.y.begin(), a.y.end(), b.y.begin(), b.y.end());
}

// ---------------------------------------------------------------------------

bool lattice_representable(Quantity value, const Lattice& lattice) {
    const auto& d = lattice.basis;
    const std::int64_t g = lattice.gamma;
    if (d.empty()) return value == Quantity(0);
    if (d.size() == 1) {
        const std::int64_t b = d[0].raw();
        return value.raw() % b == 0 && std::abs(value.raw() / b) <= g;
    }
    // Depth-first over alpha in [-g, g]^k, pruned by the reachable span of the
    // remaining coordinates.
    std::vector<std::int64_t> reach(d.size() + 1, 0);
    for (std::size_t i = d.size(); i-- > 0;) reach[i] = checked::add(reach[i + 1], checked::mul(g, d[i].raw()));
    auto search = [&](auto&& self, std::size_t i, std::int64_t rest) -> bool {
        if (i == d.size()) return rest == 0;
        if (std::abs(rest) > reach[i]) return false;
        for (std::int64_t a = -g; a <= g; ++a)
            if (self(self, i + 1, rest - a * d[i].raw())) return true;
        return false;
    };
    return search(search, 0, value.raw());
}

namespace {

std::string vp_path(int v, int t, const char* field) {
    std::ostringstream os;
    os << "vendors[" << v << "].periods[" << (t - 1) << "]." << field;
    return os.str();
}

std::string vt(int v, int t) {
    std::ostringstream os;
    os << "(v=" << (v + 1) << ", t=" << t << ")";
    return os.str();
}

double saturating_pow(double base, double exp) {
    const double r = std::pow(base, exp);
    return std::isfinite(r) ? r : HUGE_VAL;
}

}  // namespace

ValidationReport validate_instance(const Instance& inst, const ValidationOptions& opts) {
    ValidationReport rep;
    auto err = [&](std::string path, std::string msg) { rep.errors.push_back({std::move(path), std::move(msg)}); };
    auto warn = [&](std::string path, std::string msg) { rep.warnings.push_back({std::move(path), std::move(msg)}); };

    const int T = inst.horizon;
    const int V = inst.vendors;
    if (T < 1) err("T", "horizon must be at least 1");
    if (V < 0) err("V", "vendor count must be nonnegative");
    if (inst.scale < 1) err("scale", "scale must be positive");
    if (!rep.errors.empty()) return rep;

    if (static_cast<int>(inst.stock.size()) != T) err("stock_bounds", "expected T stock bound entries");
    if (static_cast<int>(inst.market.size()) != V) err("vendors", "expected V vendor entries");
    for (int v = 0; v < static_cast<int>(inst.market.size()); ++v)
        if (static_cast<int>(inst.market[v].size()) != T)
            err("vendors[" + std::to_string(v) + "].periods", "expected T period entries");
    if (!inst.stock_payoff.empty() && static_cast<int>(inst.stock_payoff.size()) != T)
        err("stock_payoff", "expected T stock payoff entries");
    if (!rep.errors.empty()) return rep;

    if (inst.initial_stock < Quantity(0)) err("s0", "initial stock must be nonnegative");
    for (int t = 1; t <= T; ++t) {
        const auto& sb = inst.stock_at(t);
        const std::string p = "stock_bounds[" + std::to_string(t - 1) + "]";
        if (sb.lower < Quantity(0)) err(p + ".L", "stock lower bound negative at t=" + std::to_string(t));
        if (sb.lower > sb.upper) err(p, "stock bounds L > U at t=" + std::to_string(t));
    }
    for (int v = 0; v < V; ++v) {
        for (int t = 1; t <= T; ++t) {
            const auto& b = inst.at(v, t);
            if (b.lx < Quantity(0)) err(vp_path(v, t, "Lx"), "negative purchase lower bound at " + vt(v, t));
            if (b.ly < Quantity(0)) err(vp_path(v, t, "Ly"), "negative sale lower bound at " + vt(v, t));
            if (b.lx > b.ux) err(vp_path(v, t, "Ux"), "purchase bounds Lx > Ux at " + vt(v, t));
            if (b.ly > b.uy) err(vp_path(v, t, "Uy"), "sale bounds Ly > Uy at " + vt(v, t));
            if (b.fx.sign() < 0) err(vp_path(v, t, "fx"), "negative purchase fixed cost at " + vt(v, t));
            if (b.fy.sign() < 0) err(vp_path(v, t, "fy"), "negative sale fixed cost at " + vt(v, t));
        }
    }

    std::set<int> ids;
    for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
        const auto& c = inst.constraints[i];
        const std::string p = "constraints[" + std::to_string(i) + "]";
        if (!ids.insert(c.id).second) err(p, "duplicate constraint id " + std::to_string(c.id));
        if (c.conditions.size() < 2) err(p + ".conditions", "a constraint needs at least two conditions");
        for (std::size_t j = 0; j < c.conditions.size(); ++j) {
            const auto& cond = c.conditions[j];
            const std::string cp = p + ".conditions[" + std::to_string(j) + "]";
            if (cond.var.vendor < 0 || cond.var.vendor >= V) err(cp + ".vendor", "vendor index out of range");
            if (cond.var.time < 1 || cond.var.time > T) err(cp + ".time", "time index out of range");
            if (cond.anchor.tag == AnchorKind::explicit_value && cond.anchor.value < Quantity(0))
                err(cp + ".value", "explicit anchor must be nonnegative");
        }
    }

    rep.lattice_assumption_holds = false;
    if (inst.lattice) {
        const auto& lat = *inst.lattice;
        bool basis_ok = !lat.basis.empty() && lat.gamma >= 0;
        if (lat.basis.empty()) err("lattice.basis", "lattice basis must be nonempty");
        if (lat.gamma < 0) err("lattice.gamma", "gamma must be nonnegative");
        for (std::size_t i = 0; i < lat.basis.size(); ++i) {
            if (lat.basis[i] <= Quantity(0)) {
                err("lattice.basis[" + std::to_string(i) + "]", "basis elements must be positive");
                basis_ok = false;
            }
        }
        if (basis_ok) {
            bool holds = true;
            auto check = [&](Quantity q, const std::string& path, const std::string& what) {
                if (!lattice_representable(q, lat)) {
                    holds = false;
                    err(path, what + " is not a bounded lattice combination (|alpha| <= gamma)");
                }
            };
            for (int v = 0; v < V; ++v) {
                for (int t = 1; t <= T; ++t) {
                    const auto& b = inst.at(v, t);
                    check(b.lx, vp_path(v, t, "Lx"), "Lx at " + vt(v, t));
                    check(b.ux, vp_path(v, t, "Ux"), "Ux at " + vt(v, t));
                    check(b.ly, vp_path(v, t, "Ly"), "Ly at " + vt(v, t));
                    check(b.uy, vp_path(v, t, "Uy"), "Uy at " + vt(v, t));
                }
            }
            for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
                const auto& c = inst.constraints[i];
                for (std::size_t j = 0; j < c.conditions.size(); ++j) {
                    if (c.conditions[j].anchor.tag != AnchorKind::explicit_value) continue;
                    check(c.conditions[j].anchor.value,
                          "constraints[" + std::to_string(i) + "].conditions[" + std::to_string(j) + "].value",
                          "explicit anchor of constraint " + std::to_string(c.id));
                }
            }
            rep.lattice_assumption_holds = holds;
        }
    }
    if (!rep.errors.empty()) return rep;

    rep.thickness = thickness(inst.constraints, T);

    const double log_t = std::log2(static_cast<double>(T));
    if (V > opts.vendor_log_budget * log_t) {
        std::ostringstream os;
        os << "V = " << V << " exceeds the vendor budget " << opts.vendor_log_budget << " * log2(T) = "
           << opts.vendor_log_budget * log_t;
        warn("V", os.str());
    }
    if (rep.thickness > opts.thickness_log_budget * log_t) {
        std::ostringstream os;
        os << "thickness " << rep.thickness << " exceeds the budget " << opts.thickness_log_budget
           << " * log2(T) = " << opts.thickness_log_budget * log_t;
        warn("constraints", os.str());
    }
    if (!inst.lattice) warn("lattice", "no lattice basis given; the exact stock set may be exponential");

    // |S| is bounded by the lattice superset when available, otherwise by the
    // K-values times 3^(4VT) sign patterns.
    const double ks = 2.0 * T + 2.0;
    if (inst.lattice) {
        rep.lattice_set_bound =
            ks * saturating_pow(2.0 * V * T * static_cast<double>(inst.lattice->gamma) + 1.0,
                                static_cast<double>(inst.lattice->basis.size()));
    } else {
        rep.lattice_set_bound = ks * saturating_pow(3.0, 4.0 * V * T);
    }
    const double s2 = rep.lattice_set_bound * rep.lattice_set_bound;
    const double c2 = saturating_pow(2.0, 2.0 * rep.thickness);
    rep.node_bound = T * s2 * c2;
    rep.arc_bound = T * static_cast<double>(V) * V * saturating_pow(3.0, 2.0 * V) * s2 * c2;
    if (rep.node_bound > 1e9) warn("network", "predicted network size is very large");
    return rep;
}

// ---------------------------------------------------------------------------

Rational evaluate_payoff(const Instance& inst, int t, const Decision& d, Quantity stock) {
    Rational total;
    for (int v = 0; v < inst.vendors; ++v) {
        const auto& b = inst.at(v, t);
        total += b.ry * inst.to_rational(d.y[v]);
        total -= b.cx * inst.to_rational(d.x[v]);
        if (d.z[v]) total -= b.fy;
        if (d.w[v]) total -= b.fx;
    }
    auto pieces = inst.pieces(t);
    if (!pieces.empty()) {
        const Rational s = inst.to_rational(stock);
        Rational best = pieces.front().slope * s + pieces.front().intercept;
        for (const auto& p : pieces.subspan(1)) best = std::max(best, p.slope * s + p.intercept);
        total += best;
    }
    return total;
}

Rational total_payoff(const Instance& inst, const Solution& sol) {
    Rational sum;
    for (int t = 1; t <= inst.horizon; ++t) sum += evaluate_payoff(inst, t, sol.periods[t - 1], sol.stocks[t]);
    return sum;
}

ScaledPayoff::ScaledPayoff(const Instance& inst) : vendors_(inst.vendors) {
    std::int64_t den = 1;
    for (int t = 1; t <= inst.horizon; ++t) {
        for (int v = 0; v < inst.vendors; ++v) {
            const auto& b = inst.at(v, t);
            for (const auto* r : {&b.cx, &b.ry, &b.fx, &b.fy}) den = checked::lcm(den, r->den());
        }
        for (const auto& p : inst.pieces(t)) {
            den = checked::lcm(den, p.slope.den());
            den = checked::lcm(den, p.intercept.den());
        }
    }
    auto scaled = [&](const Rational& r) { return checked::mul(r.num(), den / r.den()); };
    const std::int64_t D = inst.scale;
    denominator_ = checked::mul(den, D);
    coeffs_.resize(inst.horizon);
    pieces_.resize(inst.horizon);
    for (int t = 1; t <= inst.horizon; ++t) {
        for (int v = 0; v < inst.vendors; ++v) {
            const auto& b = inst.at(v, t);
            // Per-unit terms multiply raw quantities (already carrying 1/D);
            // fixed terms and intercepts need the extra factor D.
            coeffs_[t - 1].push_back(
                {scaled(b.cx), scaled(b.ry), checked::mul(scaled(b.fx), D), checked::mul(scaled(b.fy), D)});
        }
        for (const auto& p : inst.pieces(t))
            pieces_[t - 1].push_back({scaled(p.slope), checked::mul(scaled(p.intercept), D)});
    }
}

std::int64_t ScaledPayoff::period(int t, std::span<const std::int64_t> flows, Quantity stock) const {
    const auto& cs = coeffs_[t - 1];
    std::int64_t total = 0;
    for (int v = 0; v < vendors_; ++v) {
        const std::int64_t x = flows[v];
        const std::int64_t y = flows[vendors_ + v];
        total = checked::add(total, checked::mul(cs[v].ry, y));
        total = checked::sub(total, checked::mul(cs[v].cx, x));
        if (y > 0) total = checked::sub(total, cs[v].fy);
        if (x > 0) total = checked::sub(total, cs[v].fx);
    }
    const auto& ps = pieces_[t - 1];
    if (!ps.empty()) {
        std::int64_t best = INT64_MIN;
        for (const auto& p : ps) best = std::max(best, checked::add(checked::mul(p.slope, stock.raw()), p.intercept));
        total = checked::add(total, best);
    }
    return total;
}

// ---------------------------------------------------------------------------

const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::shape: return "shape";
        case ViolationKind::initial_stock: return "initial_stock";
        case ViolationKind::balance: return "balance";
        case ViolationKind::stock_bounds: return "stock_bounds";
        case ViolationKind::sales_exceed_stock: return "sales_exceed_stock";
        case ViolationKind::purchase_bounds: return "purchase_bounds";
        case ViolationKind::sale_bounds: return "sale_bounds";
        case ViolationKind::indicator: return "indicator";
        case ViolationKind::complementarity: return "complementarity";
        case ViolationKind::objective: return "objective";
    }
    return "unknown";
}

AuditReport check_feasible(const Instance& inst, const Solution& sol) {
    AuditReport rep;
    auto add = [&](ViolationKind k, int t, int v, int cid, std::string msg) {
        rep.violations.push_back({k, t, v, cid, std::move(msg)});
    };
    const int T = inst.horizon;
    const int V = inst.vendors;
    if (static_cast<int>(sol.periods.size()) != T || static_cast<int>(sol.stocks.size()) != T + 1) {
        add(ViolationKind::shape, 0, -1, -1, "solution must have T periods and T+1 stocks");
        return rep;
    }
    for (int t = 1; t <= T; ++t) {
        const auto& d = sol.periods[t - 1];
        if (static_cast<int>(d.x.size()) != V || static_cast<int>(d.y.size()) != V ||
            static_cast<int>(d.w.size()) != V || static_cast<int>(d.z.size()) != V) {
            add(ViolationKind::shape, t, -1, -1, "period must have V entries in x, y, w, z");
            return rep;
        }
    }

    if (sol.stocks[0] != inst.initial_stock) add(ViolationKind::initial_stock, 0, -1, -1, "stocks[0] != s0");
    for (int t = 1; t <= T; ++t) {
        const auto& d = sol.periods[t - 1];
        const Quantity prev = sol.stocks[t - 1];
        const Quantity cur = sol.stocks[t];
        const Quantity buy = d.total_purchase();
        const Quantity sell = d.total_sale();
        if (cur != prev - sell + buy) add(ViolationKind::balance, t, -1, -1, "s_t != s_{t-1} - sum y + sum x");
        const auto& sb = inst.stock_at(t);
        if (cur < sb.lower || cur > sb.upper) add(ViolationKind::stock_bounds, t, -1, -1, "stock outside [L, U]");
        if (sell > prev) add(ViolationKind::sales_exceed_stock, t, -1, -1, "sum y exceeds s_{t-1}");
        for (int v = 0; v < V; ++v) {
            const auto& b = inst.at(v, t);
            if (!in_flow_domain(d.x[v], b.lx, b.ux))
                add(ViolationKind::purchase_bounds, t, v, -1, "x not in {0} U [Lx, Ux]");
            if (!in_flow_domain(d.y[v], b.ly, b.uy))
                add(ViolationKind::sale_bounds, t, v, -1, "y not in {0} U [Ly, Uy]");
            if ((d.w[v] != 0) != (d.x[v] > Quantity(0)) || d.w[v] > 1)
                add(ViolationKind::indicator, t, v, -1, "w inconsistent with x");
            if ((d.z[v] != 0) != (d.y[v] > Quantity(0)) || d.z[v] > 1)
                add(ViolationKind::indicator, t, v, -1, "z inconsistent with y");
        }
    }
    for (const auto& c : inst.constraints) {
        bool zero = false;
        for (const auto& cond : c.conditions) {
            if (sol.periods[cond.var.time - 1].flow(cond.var) == inst.resolve(cond)) {
                zero = true;
                break;
            }
        }
        if (!zero)
            add(ViolationKind::complementarity, c.t_max(), -1, c.id,
                "constraint " + std::to_string(c.id) + ": product of (V_i - B_i) is nonzero");
    }
    if (rep.violations.empty()) {
        const Rational obj = total_payoff(inst, sol);
        if (obj != sol.objective)
            add(ViolationKind::objective, 0, -1, -1, "objective " + sol.objective.str() + " != " + obj.str());
    }
    return rep;
}

}  // namespace wp
