#ifndef MAGOSC_JSON_IO_HPP
#define MAGOSC_JSON_IO_HPP

#include <magosc/dynamics.hpp>
#include <magosc/system.hpp>

#include <json.hpp>

namespace magosc {

using json = nlohmann::ordered_json;

inline json qw_to_json(const QwScalar& s) {
    return json{{"a", format_rational(s.a())}, {"b", format_rational(s.b())}};
}

inline QwScalar qw_from_json(const json& j, const Rational& rho) {
    return QwScalar(parse_rational(j.at("a").get<std::string>()),
                    parse_rational(j.at("b").get<std::string>()), rho);
}

inline json poly_to_json(const PhasePoly& p) {
    json terms = json::array();
    for (const auto& [mono, c] : p.terms()) {
        json t;
        t["exp"] = std::vector<int>(mono.e.begin(), mono.e.end());
        t["a"] = format_rational(c.a());
        t["b"] = format_rational(c.b());
        terms.push_back(std::move(t));
    }
    return json{{"rho", format_rational(p.rho())}, {"terms", std::move(terms)}};
}

inline PhasePoly poly_from_json(const json& j) {
    const Rational rho = parse_rational(j.at("rho").get<std::string>());
    PhasePoly p = PhasePoly::zero(rho);
    for (const auto& t : j.at("terms")) {
        const auto exps = t.at("exp").get<std::vector<int>>();
        if (exps.size() != 6) throw std::invalid_argument("poly term: exp must have 6 entries");
        PhasePoly mono = PhasePoly::constant(qw_from_json(t, rho));
        for (int i = 0; i < 6; ++i)
            mono *= PhasePoly::variable(static_cast<Var>(i), rho).pow(exps[i]);
        p += mono;
    }
    return p;
}

inline json params_to_json(const SystemParams& p) {
    json j;
    j["omega1"] = format_rational(p.omega1);
    j["omega2"] = format_rational(p.omega2);
    j["m"] = p.m;
    j["n"] = p.n;
    j["S"] = format_rational(p.S);
    j["kappa"] = format_rational(p.kappa);
    j["rho"] = format_rational(p.rho);
    j["freq1"] = qw_to_json(p.freq1);
    j["freq2"] = qw_to_json(p.freq2);
    j["tau"] = qw_to_json(p.tau);
    j["float"] = {{"S", to_double(p.S)},
                  {"kappa", to_double(p.kappa)},
                  {"rho", to_double(p.rho)},
                  {"freq1", p.freq1.to_double()},
                  {"freq2", p.freq2.to_double()},
                  {"period", p.period}};
    return j;
}

inline json reduction_report_to_json(const ReductionReport& r) {
    json terms = json::array();
    for (const auto& t : r.terms)
        terms.push_back(json{{"k", t.k},
                             {"j", t.j},
                             {"uses_g", t.uses_g},
                             {"coefficient", qw_to_json(t.coefficient)}});
    return json{{"raw_momentum_degree", r.raw_momentum_degree},
                {"reduced_momentum_degree", r.reduced_momentum_degree},
                {"normalization", qw_to_json(r.normalization)},
                {"subtracted", std::move(terms)}};
}

inline json integral_set_to_json(const IntegralSet& set) {
    json j;
    j["params"] = params_to_json(set.params);
    json polys, degrees;
    for (const auto& [name, poly] : set.named()) {
        polys[name] = poly_to_json(*poly);
        degrees[name] = poly->momentum_degree();
    }
    j["integrals"] = std::move(polys);
    j["momentum_degrees"] = std::move(degrees);
    j["reduction_report"] = reduction_report_to_json(set.reduction);
    return j;
}

inline json drift_report_to_json(const DriftReport& r) {
    json records = json::array();
    for (const auto& rec : r.records)
        records.push_back(json{{"name", rec.name},
                               {"initial", rec.initial},
                               {"max_abs_dev", rec.max_abs_dev},
                               {"rel_drift", rec.rel_drift}});
    json j{{"records", std::move(records)}};
    if (std::isfinite(r.closure_error)) j["closure_error"] = r.closure_error;
    return j;
}

}  // namespace magosc

#endif
