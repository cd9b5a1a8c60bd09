#include "robba/json_io.hpp"

namespace robba {

using nlohmann::json;

namespace {

std::string extrat_str(const ExtRat& e) { return e.str(); }

} // namespace

json hahn_to_json(const HahnSeries& h) {
    json terms = json::array();
    for (const auto& t : h.terms())
        terms.push_back(json::array({t.exp.str(), h.field()->elem_str(t.coef)}));
    return json{{"terms", terms}, {"prec", extrat_str(h.prec())}};
}

HahnSeries hahn_from_json(const json& j, const FieldPtr& field) {
    ParseContext ctx;
    ctx.field = field;
    std::vector<HahnSeries::Term> terms;
    for (const auto& t : j.at("terms")) {
        Rat exp = parse_rat(t.at(0).get<std::string>());
        HahnSeries c = parse_hahn(t.at(1).get<std::string>(), ctx);
        if (c.no_terms() || !c.terms()[0].exp.is_zero() || c.terms().size() != 1)
            fail(ErrorCode::SyntaxError, "coefficient must be a field constant");
        terms.push_back({exp, c.terms()[0].coef});
    }
    ExtRat prec = parse_extrat(j.at("prec").get<std::string>());
    return HahnSeries::make(field, std::move(terms), prec);
}

json witt_to_json(const WittSeries& w) {
    json coeffs = json::array();
    for (const auto& [n, c] : w.coeffs()) coeffs.push_back(json::array({n, hahn_to_json(c)}));
    json out{{"coeffs", coeffs}, {"prec_pi", w.tail() ? json(w.tail()->n) : json("inf")}};
    if (w.tail()) out["tail_v"] = w.tail()->v.str();
    return out;
}

WittSeries witt_from_json(const json& j, const FieldPtr& field) {
    std::map<long long, HahnSeries> coeffs;
    for (const auto& entry : j.at("coeffs"))
        coeffs.emplace(entry.at(0).get<long long>(), hahn_from_json(entry.at(1), field));
    std::optional<WittSeries::Tail> tail;
    const auto& prec = j.at("prec_pi");
    if (!prec.is_string()) {
        Rat v(0);
        if (j.contains("tail_v")) v = parse_rat(j.at("tail_v").get<std::string>());
        tail = WittSeries::Tail{prec.get<long long>(), v};
    }
    return WittSeries::from_coeffs(field, std::move(coeffs), tail);
}

json tate_to_json(const TateSeries& t) {
    json radii = json::array();
    for (const auto& w : t.weights()) radii.push_back(w.str());
    json terms = json::array();
    for (const auto& [I, c] : t.terms()) {
        json idx = json::array();
        for (uint32_t k : I) idx.push_back(k);
        terms.push_back(json::array({idx, witt_to_json(c)}));
    }
    return json{{"n", t.nvars()},
                {"radii_log", radii},
                {"r", t.base_r().str()},
                {"terms", terms},
                {"term_floor", extrat_str(t.term_floor())}};
}

TateSeries tate_from_json(const json& j, const FieldPtr& field) {
    std::vector<Rat> weights;
    for (const auto& w : j.at("radii_log")) weights.push_back(parse_rat(w.get<std::string>()));
    Rat r = parse_rat(j.at("r").get<std::string>());
    TateSeries::TermMap terms;
    for (const auto& entry : j.at("terms")) {
        MultiIndex I;
        for (const auto& k : entry.at(0)) I.push_back(k.get<uint32_t>());
        terms.emplace(std::move(I), witt_from_json(entry.at(1), field));
    }
    ExtRat floor = ExtRat::infinity();
    if (j.contains("term_floor")) floor = parse_extrat(j.at("term_floor").get<std::string>());
    return TateSeries::make(field, std::move(weights), r, std::move(terms), floor);
}

json factored_to_json(const FactoredElement& f) {
    json factors = json::array();
    for (const auto& z : f.factors) factors.push_back(json{{"u_bar", z.u_bar.str()}});
    return json{{"unit", f.unit_scalar.str()}, {"pi_power", f.pi_power}, {"factors", factors}};
}

FactoredElement factored_from_json(const json& j, const ParseContext& ctx) {
    FactoredElement f;
    f.unit_scalar = parse_hahn(j.at("unit").get<std::string>(), ctx);
    f.pi_power = j.at("pi_power").get<long long>();
    for (const auto& z : j.at("factors")) {
        HahnSeries u = parse_hahn(z.at("u_bar").get<std::string>(), ctx);
        Valuation v = u.valuation();
        if (!v.exact || v.bound.is_infinite() || !(v.bound > ExtRat(Rat(0))))
            fail(ErrorCode::NotPrimitive, "factor u_bar must have positive finite valuation");
        f.factors.push_back({u, Rat(1) / v.bound.finite()});
    }
    return f;
}

GeneratorFile generators_from_json(const json& j, const FieldPtr& field, const Rat& work_prec) {
    GeneratorFile g;
    g.nvars = j.at("n").get<size_t>();
    for (const auto& w : j.at("radii_log")) {
        if (w.is_string())
            g.radii_log.push_back(parse_rat(w.get<std::string>()));
        else
            g.radii_log.push_back(Rat(w.get<long long>()));
    }
    if (g.radii_log.size() != g.nvars)
        fail(ErrorCode::InvalidArgument, "radii_log length differs from n");
    const auto& r = j.at("r");
    g.r = r.is_string() ? parse_rat(r.get<std::string>()) : Rat(r.get<long long>());

    ParseContext ctx;
    ctx.field = field;
    ctx.weights = g.radii_log;
    ctx.base_r = g.r;
    ctx.work_prec = work_prec;
    for (const auto& s : j.at("generators")) {
        ParsedElement e = parse_element(s.get<std::string>(), ctx);
        if (e.tate)
            g.generators.push_back(*e.tate);
        else {
            MultiIndex zero(g.nvars, 0);
            g.generators.push_back(TateSeries::monomial(g.radii_log, g.r, *e.witt, zero));
        }
    }
    return g;
}

} // namespace robba
