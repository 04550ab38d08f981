#pragma once

// Problem data for the deterministic multi-vendor warehouse problem.
//
// Quantities (stock levels, flows, bounds, anchor constants, lattice basis)
// are integers on one instance-wide scale: the real value of a Quantity q is
// q.raw() / Instance::scale. Payoff coefficients stay as exact rationals.
//
// Indexing: periods are 1..T (layer 0 is the initial stock), vendors are
// 0-based in memory and 1-based in JSON.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wp/rational.hpp"

namespace wp {

class Quantity {
public:
    constexpr Quantity() = default;
    constexpr explicit Quantity(std::int64_t raw) : raw_(raw) {}

    constexpr std::int64_t raw() const { return raw_; }

    friend constexpr auto operator<=>(Quantity, Quantity) = default;
    friend Quantity operator+(Quantity a, Quantity b) { return Quantity(checked::add(a.raw_, b.raw_)); }
    friend Quantity operator-(Quantity a, Quantity b) { return Quantity(checked::sub(a.raw_, b.raw_)); }
    friend Quantity operator*(std::int64_t k, Quantity a) { return Quantity(checked::mul(k, a.raw_)); }
    Quantity operator-() const { return Quantity(checked::sub(0, raw_)); }
    Quantity& operator+=(Quantity o) { return *this = *this + o; }
    Quantity& operator-=(Quantity o) { return *this = *this - o; }

private:
    std::int64_t raw_ = 0;
};

struct VendorPeriod {
    Quantity lx, ux, ly, uy;
    Rational cx;  // per-unit purchase cost
    Rational ry;  // per-unit sale revenue
    Rational fx;  // fixed cost when purchasing (w = 1)
    Rational fy;  // fixed cost when selling (z = 1)
};

/// One affine piece of the convex stock payoff g_t(s) = max_i (slope_i * s + intercept_i).
struct StockPiece {
    Rational slope;
    Rational intercept;
};

struct StockBounds {
    Quantity lower, upper;
};

enum class FlowKind { purchase, sale };

struct VarRef {
    FlowKind kind = FlowKind::purchase;
    int vendor = 0;  // 0-based
    int time = 1;    // 1-based period
    friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

enum class AnchorKind { zero, lower, upper, explicit_value };

struct BoundAnchor {
    AnchorKind tag = AnchorKind::zero;
    Quantity value;  // only meaningful for explicit_value
    friend bool operator==(const BoundAnchor&, const BoundAnchor&) = default;
};

struct Condition {
    VarRef var;
    BoundAnchor anchor;
    friend bool operator==(const Condition&, const Condition&) = default;
};

/// OR of equalities: at least one condition V_i = B_i must hold exactly,
/// i.e. prod_i (V_i - B_i) = 0.
struct ComplementarityConstraint {
    int id = 0;
    std::vector<Condition> conditions;

    int t_min() const;
    int t_max() const;
    friend bool operator==(const ComplementarityConstraint&, const ComplementarityConstraint&) = default;
};

struct Lattice {
    std::vector<Quantity> basis;
    std::int64_t gamma = 0;
    friend bool operator==(const Lattice&, const Lattice&) = default;
};

struct Instance {
    int horizon = 0;
    int vendors = 0;
    std::int64_t scale = 1;
    Quantity initial_stock;
    std::vector<StockBounds> stock;                      // [t-1]
    std::vector<std::vector<VendorPeriod>> market;       // [v][t-1]
    std::vector<std::vector<StockPiece>> stock_payoff;   // [t-1]; empty list means g_t = 0
    std::vector<ComplementarityConstraint> constraints;  // ids are unique
    std::optional<Lattice> lattice;

    const VendorPeriod& at(int vendor, int t) const { return market[vendor][t - 1]; }
    VendorPeriod& at(int vendor, int t) { return market[vendor][t - 1]; }
    const StockBounds& stock_at(int t) const { return stock[t - 1]; }
    std::span<const StockPiece> pieces(int t) const;

    Quantity lower(const VarRef& ref) const;
    Quantity upper(const VarRef& ref) const;
    /// Value B of an anchor, resolved against the bounds of the referenced variable.
    Quantity resolve(const Condition& c) const;

    Rational to_rational(Quantity q) const { return Rational(q.raw(), scale); }
    friend bool operator==(const Instance&, const Instance&);
};

bool operator==(const VendorPeriod& a, const VendorPeriod& b);
bool operator==(const StockPiece& a, const StockPiece& b);
bool operator==(const StockBounds& a, const StockBounds& b);

/// One period's flows. w/z are stored so that externally supplied solutions
/// can be audited; Decision::from_flows derives them (w = 1 iff x > 0).
struct Decision {
    std::vector<Quantity> x, y;
    std::vector<std::uint8_t> w, z;

    static Decision from_flows(std::vector<Quantity> x, std::vector<Quantity> y);
    Quantity total_purchase() const;
    Quantity total_sale() const;
    Quantity flow(const VarRef& ref) const { return ref.kind == FlowKind::purchase ? x[ref.vendor] : y[ref.vendor]; }
    friend bool operator==(const Decision&, const Decision&) = default;
    /// Canonical order: lexicographic by (x, y).
    friend std::strong_ordering operator<=>(const Decision& a, const Decision& b);
};

struct Solution {
    std::vector<Decision> periods;  // [t-1]
    std::vector<Quantity> stocks;   // [0..T], stocks[0] = s0
    Rational objective;
    friend bool operator==(const Solution&, const Solution&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Finding {
    std::string path;  // e.g. "vendors[0].periods[2].Ly"
    std::string message;
};

struct ValidationOptions {
    // Logarithmic budgets k' for V <= k' log2 T and thickness <= k' log2 T.
    double vendor_log_budget = 2.0;
    double thickness_log_budget = 2.0;
};

struct ValidationReport {
    std::vector<Finding> errors;
    std::vector<Finding> warnings;
    int thickness = 0;
    bool lattice_assumption_holds = false;
    // Upper bounds (saturating, as doubles) from the lattice and network size analysis.
    double lattice_set_bound = 0;
    double node_bound = 0;
    double arc_bound = 0;

    bool ok() const { return errors.empty(); }
};

ValidationReport validate_instance(const Instance& inst, const ValidationOptions& opts = {});

/// True iff value = sum_i alpha_i d_i with integer |alpha_i| <= gamma.
bool lattice_representable(Quantity value, const Lattice& lattice);

// ---------------------------------------------------------------------------
// Payoff

/// p_t = sum_v (ry y - cx x - fy z - fx w) + g_t(s_t), evaluated exactly.
Rational evaluate_payoff(const Instance& inst, int t, const Decision& d, Quantity stock);

/// Sum of evaluate_payoff over all periods of a solution.
Rational total_payoff(const Instance& inst, const Solution& sol);

/// Integer form of the payoff used by the solver: every period payoff is an
/// integer multiple of 1 / denominator(), so path values add exactly in int64.
class ScaledPayoff {
public:
    explicit ScaledPayoff(const Instance& inst);

    std::int64_t denominator() const { return denominator_; }
    /// flows laid out as [x_0..x_{V-1}, y_0..y_{V-1}] in raw quantity units.
    std::int64_t period(int t, std::span<const std::int64_t> flows, Quantity stock) const;
    Rational to_rational(std::int64_t scaled) const { return Rational(scaled, denominator_); }

private:
    struct Coeffs {
        std::int64_t cx, ry, fx, fy;
    };
    struct Piece {
        std::int64_t slope, intercept;
    };
    int vendors_ = 0;
    std::int64_t denominator_ = 1;
    std::vector<std::vector<Coeffs>> coeffs_;  // [t-1][v]
    std::vector<std::vector<Piece>> pieces_;   // [t-1]
};

// ---------------------------------------------------------------------------
// Feasibility audit

enum class ViolationKind {
    shape,
    initial_stock,
    balance,
    stock_bounds,
    sales_exceed_stock,
    purchase_bounds,
    sale_bounds,
    indicator,
    complementarity,
    objective,
};

const char* to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    int time = 0;
    int vendor = -1;
    int constraint_id = -1;
    std::string message;
};

struct AuditReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

/// Exact check of a full solution against the feasible set and the objective.
AuditReport check_feasible(const Instance& inst, const Solution& sol);

/// Membership of a single flow in {0} U [L, U].
inline bool in_flow_domain(Quantity v, Quantity lo, Quantity hi) {
    return v == Quantity(0) || (lo <= v && v <= hi);
}

}  // namespace wp
