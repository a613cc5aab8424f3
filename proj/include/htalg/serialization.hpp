#pragma once

#include "htalg/diff_alg.hpp"
#include "htalg/loc_k.hpp"

#include <json.hpp>

#include <string>

namespace htalg {

// JSON forms: rationals are "p/q" strings throughout.

inline nlohmann::json to_json(const HtElement& a) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [n, c] : a.terms()) t[std::to_string(n)] = c.str();
    return {{"T", t}};
}

inline HtElement ht_from_json(const nlohmann::json& j) {
    HtElement a;
    for (const auto& [k, v] : j.at("T").items()) a.add(std::stol(k), Rational::parse(v.get<std::string>()));
    return a;
}

inline nlohmann::json to_json(const HatHtElement& a) {
    nlohmann::json t = nlohmann::json::object();
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [key, c] : a.terms()) {
        if (key.second == 0) t[std::to_string(key.first)] = c.str();
        else d.push_back({{"n", key.first}, {"l", key.second}, {"coeff", c.str()}});
    }
    return {{"T", t}, {"dtau", d}};
}

inline HatHtElement hat_ht_from_json(const nlohmann::json& j) {
    HatHtElement a;
    for (const auto& [k, v] : j.at("T").items()) a.add(std::stol(k), 0, Rational::parse(v.get<std::string>()));
    for (const auto& e : j.at("dtau"))
        a.add(e.at("n").get<long>(), e.at("l").get<long>(), Rational::parse(e.at("coeff").get<std::string>()));
    return a;
}

inline nlohmann::json to_json(const CzpolElement& f) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [l, c] : f.terms()) t[std::to_string(l)] = c.str();
    return {{"tau", t}};
}

inline CzpolElement czpol_from_json(const nlohmann::json& j) {
    CzpolElement f;
    for (const auto& [k, v] : j.at("tau").items()) f.add(std::stol(k), Rational::parse(v.get<std::string>()));
    return f;
}

inline nlohmann::json to_json(const KElement& f) {
    nlohmann::json sing = nlohmann::json::array();
    for (const auto& [key, c] : f.sing())
        sing.push_back({{"shift", key.first}, {"order", key.second}, {"coeff", c.str()}});
    return {{"pol", to_json(f.pol())}, {"sing", sing}};
}

inline KElement k_from_json(const nlohmann::json& j) {
    KElement f(czpol_from_json(j.at("pol")));
    for (const auto& e : j.at("sing"))
        f.add_sing(e.at("shift").get<long>(), e.at("order").get<long>(),
                   Rational::parse(e.at("coeff").get<std::string>()));
    return f;
}

inline nlohmann::json to_json(const DiffPoly& f) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : f.terms()) {
        nlohmann::json mono = nlohmann::json::array();
        for (const auto& [g, e] : m.factors)
            mono.push_back({{"gen", g.first}, {"shift", g.second}, {"power", e}});
        terms.push_back({{"monomial", mono}, {"coeff", c.str()}});
    }
    return {{"terms", terms}};
}

inline DiffPoly diff_poly_from_json(const nlohmann::json& j) {
    DiffPoly f;
    for (const auto& t : j.at("terms")) {
        DiffMonomial m;
        for (const auto& g : t.at("monomial"))
            m.factors.push_back({{g.at("gen").get<int>(), g.at("shift").get<long>()},
                                 g.at("power").get<int>()});
        f.add(m, Rational::parse(t.at("coeff").get<std::string>()));
    }
    return f;
}

inline nlohmann::json to_json(const VHtOperator& p) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [n, q] : p.terms()) terms[std::to_string(n)] = to_json(q);
    return {{"operator", terms}};
}

inline VHtOperator vht_from_json(const nlohmann::json& j) {
    VHtOperator p;
    for (const auto& [k, v] : j.at("operator").items()) p.add(std::stol(k), diff_poly_from_json(v));
    return p;
}

}  // namespace htalg
