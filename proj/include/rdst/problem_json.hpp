#pragma once

#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "rdst/gallery.hpp"
#include "rdst/problem.hpp"

namespace rdst {

namespace detail {

inline double endpoint_from_json(const nlohmann::json& j, const char* name) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw spec_error(std::string("problem json: ") + name + " must be a number or \"[-+]inf\"");
}

inline TimeFunction time_function_from_json(const nlohmann::json& j) {
    if (j.is_number()) return TimeFunction::constant(j.get<double>());
    const std::string type = j.value("type", "");
    if (type == "zero") return TimeFunction::zero();
    if (type == "constant") return TimeFunction::constant(j.at("value").get<double>());
    if (type == "polynomial")
        return TimeFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
    if (type == "table")
        return TimeFunction::table(j.at("t").get<std::vector<double>>(),
                                   j.at("v").get<std::vector<double>>());
    throw spec_error("problem json: unknown time function type '" + type + "'");
}

inline SpaceFunction space_function_from_json(const nlohmann::json& j) {
    if (j.is_number()) return SpaceFunction::constant(j.get<double>());
    const std::string type = j.value("type", "");
    if (type == "zero") return SpaceFunction::zero();
    if (type == "constant") return SpaceFunction::constant(j.at("value").get<double>());
    if (type == "polynomial")
        return SpaceFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
    if (type == "piecewise_linear")
        return SpaceFunction::piecewise_linear(j.at("x").get<std::vector<double>>(),
                                               j.at("v").get<std::vector<double>>());
    throw spec_error("problem json: unknown space function type '" + type + "'");
}

inline SourceFunction source_function_from_json(const nlohmann::json& j) {
    if (j.is_number()) return SourceFunction::constant(j.get<double>());
    const std::string type = j.value("type", "");
    if (type == "zero") return SourceFunction::zero();
    if (type == "constant") return SourceFunction::constant(j.at("value").get<double>());
    if (type == "separable")
        return SourceFunction::separable(space_function_from_json(j.at("space")),
                                         time_function_from_json(j.at("time")));
    throw spec_error("problem json: unknown source function type '" + type + "'");
}

inline BoundaryCondition bc_from_json(const nlohmann::json& j) {
    if (j.is_object() && j.value("type", "") == "none") return BoundaryCondition::none();
    BoundaryCondition bc;
    bc.alpha = j.at("alpha").get<double>();
    bc.beta = j.at("beta").get<double>();
    bc.g = j.contains("g") ? time_function_from_json(j.at("g")) : TimeFunction::zero();
    return bc;
}

} // namespace detail

/// Problem document, `schema: 1`. Function fields admit constants,
/// polynomials and piecewise-linear tables; sources may also be separable
/// products of a space and a time expression. Infinite endpoints are the
/// strings "inf" / "-inf" and carry {"type": "none"} conditions.
inline ProblemSpec problem_from_json(const nlohmann::json& j) {
    const int schema = j.value("schema", 1);
    if (schema != 1) throw spec_error("problem json: unsupported schema version");
    ProblemSpec spec;
    spec.a = j.at("a").get<double>();
    spec.b = j.value("b", 0.0);
    spec.l1 = detail::endpoint_from_json(j.at("l1"), "l1");
    spec.l2 = detail::endpoint_from_json(j.at("l2"), "l2");
    spec.T = j.value("T", 1.0);
    spec.phi = j.contains("phi") ? detail::space_function_from_json(j.at("phi"))
                                 : SpaceFunction::zero();
    spec.f = j.contains("f") ? detail::source_function_from_json(j.at("f"))
                             : SourceFunction::zero();
    spec.bc1 = j.contains("bc1") ? detail::bc_from_json(j.at("bc1")) : BoundaryCondition::none();
    spec.bc2 = j.contains("bc2") ? detail::bc_from_json(j.at("bc2")) : BoundaryCondition::none();
    auto rep = validate(spec);
    if (!rep.ok()) {
        std::string msg = "problem json: invalid spec:";
        for (const auto& v : rep.violations) msg += " [" + v + "]";
        throw spec_error(msg);
    }
    return spec;
}

inline ProblemSpec problem_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot open problem file: " + path);
    nlohmann::json j;
    in >> j;
    return problem_from_json(j);
}

/// Problem source resolution: a gallery id or a JSON file path.
inline gallery::NamedProblem load_problem(const std::string& source) {
    for (const auto& id : gallery::ids()) {
        if (source == id) return gallery::by_id(source);
    }
    gallery::NamedProblem np;
    np.id = source;
    np.spec = problem_from_json_file(source);
    return np;
}

} // namespace rdst
