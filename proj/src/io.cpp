#include "wp/io.hpp"

#include <fstream>
#include <sstream>

namespace wp {

using nlohmann::json;

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error([&] {
          std::string msg = "invalid instance";
          for (const auto& e : report.errors) msg += "\n  " + e.path + ": " + e.message;
          return msg;
      }()),
      report_(std::move(report)) {}

json number_to_json(const Rational& r) {
    if (r.is_integer()) return r.num();
    return r.str();
}

Rational number_from_json(const json& j, const std::string& path) {
    try {
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const OverflowError&) {
        throw ParseError(path + ": number out of range");
    } catch (const std::invalid_argument& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.is_number()) throw ParseError(path + ": non-integer numbers must be written as \"p/q\" strings");
    throw ParseError(path + ": expected an integer or a \"p/q\" string");
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
    return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
    const json& a = field(obj, key, path);
    if (!a.is_array()) throw ParseError(path + "." + key + ": expected an array");
    return a;
}

std::int64_t int_field(const json& obj, const char* key, const std::string& path) {
    const json& v = field(obj, key, path);
    if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
    return v.get<std::int64_t>();
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

json parse_json(std::string_view document) {
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

// Quantities parsed in a first pass and rescaled once the scale is known.
class QuantityCollector {
public:
    std::size_t add(const json& j, const std::string& path) {
        values_.push_back(number_from_json(j, path));
        paths_.push_back(path);
        return values_.size() - 1;
    }

    std::int64_t scale() const {
        std::int64_t d = 1;
        try {
            for (const auto& r : values_) d = checked::lcm(d, r.den());
        } catch (const OverflowError&) {
            throw OverflowError("scale overflow: common denominator does not fit in 64 bits");
        }
        return d;
    }

    Quantity scaled(std::size_t i, std::int64_t d) const {
        const auto& r = values_[i];
        try {
            return Quantity(checked::mul(r.num(), d / r.den()));
        } catch (const OverflowError&) {
            throw OverflowError("scale overflow at " + paths_[i]);
        }
    }

private:
    std::vector<Rational> values_;
    std::vector<std::string> paths_;
};

FlowKind parse_kind(const json& j, const std::string& path) {
    if (j == "purchase") return FlowKind::purchase;
    if (j == "sale") return FlowKind::sale;
    throw ParseError(path + ": kind must be \"purchase\" or \"sale\"");
}

AnchorKind parse_anchor(const json& j, const std::string& path) {
    if (j == "zero") return AnchorKind::zero;
    if (j == "lower") return AnchorKind::lower;
    if (j == "upper") return AnchorKind::upper;
    if (j == "explicit") return AnchorKind::explicit_value;
    throw ParseError(path + ": anchor must be zero, lower, upper or explicit");
}

const char* anchor_name(AnchorKind k) {
    switch (k) {
        case AnchorKind::zero: return "zero";
        case AnchorKind::lower: return "lower";
        case AnchorKind::upper: return "upper";
        case AnchorKind::explicit_value: return "explicit";
    }
    return "zero";
}

}  // namespace

Instance instance_from_json(const json& doc) {
    const std::string root = "$";
    if (!doc.is_object()) throw ParseError("$: expected an object");
    Instance inst;
    inst.horizon = static_cast<int>(int_field(doc, "T", root));
    inst.vendors = static_cast<int>(int_field(doc, "V", root));
    if (inst.horizon < 1) throw ParseError("$.T: horizon must be at least 1");
    if (inst.vendors < 0) throw ParseError("$.V: vendor count must be nonnegative");
    const int T = inst.horizon;
    const int V = inst.vendors;

    QuantityCollector q;
    const std::size_t s0 = q.add(field(doc, "s0", root), "s0");

    const json& sb = array_field(doc, "stock_bounds", root);
    if (static_cast<int>(sb.size()) != T) throw ParseError("stock_bounds: expected T entries");
    std::vector<std::pair<std::size_t, std::size_t>> stock_ids;
    for (std::size_t t = 0; t < sb.size(); ++t) {
        const std::string p = idx("stock_bounds", t);
        stock_ids.emplace_back(q.add(field(sb[t], "L", p), p + ".L"), q.add(field(sb[t], "U", p), p + ".U"));
    }

    const json& vendors = array_field(doc, "vendors", root);
    if (static_cast<int>(vendors.size()) != V) throw ParseError("vendors: expected V entries");
    struct FlowIds {
        std::size_t lx, ux, ly, uy;
    };
    std::vector<std::vector<FlowIds>> flow_ids(V);
    inst.market.assign(V, std::vector<VendorPeriod>(T));
    for (int v = 0; v < V; ++v) {
        const std::string vp = idx("vendors", v);
        const json& periods = array_field(vendors[v], "periods", vp);
        if (static_cast<int>(periods.size()) != T) throw ParseError(vp + ".periods: expected T entries");
        for (int t = 0; t < T; ++t) {
            const std::string p = idx(vp + ".periods", t);
            const json& e = periods[t];
            flow_ids[v].push_back({q.add(field(e, "Lx", p), p + ".Lx"), q.add(field(e, "Ux", p), p + ".Ux"),
                                   q.add(field(e, "Ly", p), p + ".Ly"), q.add(field(e, "Uy", p), p + ".Uy")});
            auto& b = inst.market[v][t];
            b.cx = number_from_json(field(e, "cx", p), p + ".cx");
            b.ry = number_from_json(field(e, "ry", p), p + ".ry");
            b.fx = number_from_json(field(e, "fx", p), p + ".fx");
            b.fy = number_from_json(field(e, "fy", p), p + ".fy");
        }
    }

    std::vector<std::size_t> basis_ids;
    if (auto it = doc.find("lattice"); it != doc.end() && !it->is_null()) {
        const json& basis = array_field(*it, "basis", "lattice");
        for (std::size_t i = 0; i < basis.size(); ++i) basis_ids.push_back(q.add(basis[i], idx("lattice.basis", i)));
        inst.lattice = Lattice{{}, int_field(*it, "gamma", "lattice")};
    }

    if (auto it = doc.find("stock_payoff"); it != doc.end() && !it->is_null()) {
        if (!it->is_array() || static_cast<int>(it->size()) != T)
            throw ParseError("stock_payoff: expected an array of T entries");
        inst.stock_payoff.resize(T);
        for (int t = 0; t < T; ++t) {
            const std::string p = idx("stock_payoff", t);
            const json& pieces = array_field((*it)[t], "pieces", p);
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                const std::string pp = idx(p + ".pieces", i);
                inst.stock_payoff[t].push_back({number_from_json(field(pieces[i], "slope", pp), pp + ".slope"),
                                                number_from_json(field(pieces[i], "intercept", pp), pp + ".intercept")});
            }
        }
    }

    std::vector<std::vector<std::optional<std::size_t>>> anchor_ids;
    if (auto it = doc.find("constraints"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("constraints: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string p = idx("constraints", i);
            const json& cj = (*it)[i];
            ComplementarityConstraint c;
            c.id = cj.contains("id") ? static_cast<int>(int_field(cj, "id", p)) : static_cast<int>(i);
            const json& conds = array_field(cj, "conditions", p);
            anchor_ids.emplace_back();
            for (std::size_t j = 0; j < conds.size(); ++j) {
                const std::string cp = idx(p + ".conditions", j);
                const json& e = conds[j];
                Condition cond;
                cond.var.kind = parse_kind(field(e, "kind", cp), cp + ".kind");
                cond.var.vendor = static_cast<int>(int_field(e, "vendor", cp)) - 1;
                cond.var.time = static_cast<int>(int_field(e, "time", cp));
                cond.anchor.tag = parse_anchor(field(e, "anchor", cp), cp + ".anchor");
                if (cond.anchor.tag == AnchorKind::explicit_value) {
                    anchor_ids.back().push_back(q.add(field(e, "value", cp), cp + ".value"));
                } else {
                    anchor_ids.back().push_back(std::nullopt);
                }
                c.conditions.push_back(cond);
            }
            inst.constraints.push_back(std::move(c));
        }
    }

    const std::int64_t D = q.scale();
    inst.scale = D;
    inst.initial_stock = q.scaled(s0, D);
    for (const auto& [l, u] : stock_ids) inst.stock.push_back({q.scaled(l, D), q.scaled(u, D)});
    for (int v = 0; v < V; ++v) {
        for (int t = 0; t < T; ++t) {
            auto& b = inst.market[v][t];
            const auto& f = flow_ids[v][t];
            b.lx = q.scaled(f.lx, D);
            b.ux = q.scaled(f.ux, D);
            b.ly = q.scaled(f.ly, D);
            b.uy = q.scaled(f.uy, D);
        }
    }
    for (auto id : basis_ids) inst.lattice->basis.push_back(q.scaled(id, D));
    for (std::size_t i = 0; i < inst.constraints.size(); ++i)
        for (std::size_t j = 0; j < inst.constraints[i].conditions.size(); ++j)
            if (anchor_ids[i][j]) inst.constraints[i].conditions[j].anchor.value = q.scaled(*anchor_ids[i][j], D);

    auto report = validate_instance(inst);
    if (!report.ok()) throw ValidationError(std::move(report));
    return inst;
}

Instance load_instance(std::string_view document) { return instance_from_json(parse_json(document)); }

json instance_to_json(const Instance& inst) {
    auto qty = [&](Quantity v) { return number_to_json(inst.to_rational(v)); };
    json doc;
    doc["T"] = inst.horizon;
    doc["V"] = inst.vendors;
    doc["s0"] = qty(inst.initial_stock);
    doc["stock_bounds"] = json::array();
    for (const auto& sb : inst.stock) doc["stock_bounds"].push_back({{"L", qty(sb.lower)}, {"U", qty(sb.upper)}});
    doc["vendors"] = json::array();
    for (int v = 0; v < inst.vendors; ++v) {
        json periods = json::array();
        for (int t = 1; t <= inst.horizon; ++t) {
            const auto& b = inst.at(v, t);
            periods.push_back({{"Lx", qty(b.lx)},
                               {"Ux", qty(b.ux)},
                               {"Ly", qty(b.ly)},
                               {"Uy", qty(b.uy)},
                               {"cx", number_to_json(b.cx)},
                               {"ry", number_to_json(b.ry)},
                               {"fx", number_to_json(b.fx)},
                               {"fy", number_to_json(b.fy)}});
        }
        doc["vendors"].push_back({{"periods", std::move(periods)}});
    }
    if (inst.lattice) {
        json basis = json::array();
        for (auto d : inst.lattice->basis) basis.push_back(qty(d));
        doc["lattice"] = {{"basis", std::move(basis)}, {"gamma", inst.lattice->gamma}};
    }
    if (!inst.stock_payoff.empty()) {
        doc["stock_payoff"] = json::array();
        for (const auto& pieces : inst.stock_payoff) {
            json pj = json::array();
            for (const auto& p : pieces)
                pj.push_back({{"slope", number_to_json(p.slope)}, {"intercept", number_to_json(p.intercept)}});
            doc["stock_payoff"].push_back({{"pieces", std::move(pj)}});
        }
    }
    doc["constraints"] = json::array();
    for (const auto& c : inst.constraints) {
        json conds = json::array();
        for (const auto& cond : c.conditions) {
            json e = {{"kind", cond.var.kind == FlowKind::purchase ? "purchase" : "sale"},
                      {"vendor", cond.var.vendor + 1},
                      {"time", cond.var.time},
                      {"anchor", anchor_name(cond.anchor.tag)}};
            if (cond.anchor.tag == AnchorKind::explicit_value) e["value"] = qty(cond.anchor.value);
            conds.push_back(std::move(e));
        }
        doc["constraints"].push_back({{"id", c.id}, {"conditions", std::move(conds)}});
    }
    return doc;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

Solution solution_from_json(const Instance& inst, const json& doc) {
    auto qty = [&](const json& j, const std::string& path) {
        const Rational r = number_from_json(j, path);
        const Rational scaled = r * Rational(inst.scale);
        if (!scaled.is_integer()) throw ParseError(path + ": value is not representable at the instance scale");
        return Quantity(scaled.num());
    };
    Solution sol;
    sol.objective = number_from_json(field(doc, "objective", "$"), "objective");
    const json& stocks = array_field(doc, "stocks", "$");
    for (std::size_t i = 0; i < stocks.size(); ++i) sol.stocks.push_back(qty(stocks[i], idx("stocks", i)));
    const json& periods = array_field(doc, "periods", "$");
    for (std::size_t t = 0; t < periods.size(); ++t) {
        const std::string p = idx("periods", t);
        Decision d;
        const json& xs = array_field(periods[t], "x", p);
        const json& ys = array_field(periods[t], "y", p);
        const json& ws = array_field(periods[t], "w", p);
        const json& zs = array_field(periods[t], "z", p);
        for (std::size_t v = 0; v < xs.size(); ++v) d.x.push_back(qty(xs[v], idx(p + ".x", v)));
        for (std::size_t v = 0; v < ys.size(); ++v) d.y.push_back(qty(ys[v], idx(p + ".y", v)));
        for (std::size_t v = 0; v < ws.size(); ++v) {
            if (!ws[v].is_number_integer()) throw ParseError(idx(p + ".w", v) + ": expected 0 or 1");
            d.w.push_back(static_cast<std::uint8_t>(ws[v].get<int>()));
        }
        for (std::size_t v = 0; v < zs.size(); ++v) {
            if (!zs[v].is_number_integer()) throw ParseError(idx(p + ".z", v) + ": expected 0 or 1");
            d.z.push_back(static_cast<std::uint8_t>(zs[v].get<int>()));
        }
        sol.periods.push_back(std::move(d));
    }
    return sol;
}

Solution load_solution(const Instance& inst, std::string_view document) {
    return solution_from_json(inst, parse_json(document));
}

json solution_to_json(const Instance& inst, const Solution& sol) {
    json doc;
    doc["objective"] = sol.objective.str();
    doc["stocks"] = json::array();
    for (auto s : sol.stocks) doc["stocks"].push_back(number_to_json(inst.to_rational(s)));
    doc["periods"] = json::array();
    for (const auto& d : sol.periods) {
        json x = json::array(), y = json::array(), w = json::array(), z = json::array();
        for (auto q : d.x) x.push_back(number_to_json(inst.to_rational(q)));
        for (auto q : d.y) y.push_back(number_to_json(inst.to_rational(q)));
        for (auto b : d.w) w.push_back(static_cast<int>(b));
        for (auto b : d.z) z.push_back(static_cast<int>(b));
        doc["periods"].push_back({{"x", std::move(x)}, {"y", std::move(y)}, {"w", std::move(w)}, {"z", std::move(z)}});
    }
    return doc;
}

std::string serialize_solution(const Instance& inst, const Solution& sol) {
    return solution_to_json(inst, sol).dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace wp
