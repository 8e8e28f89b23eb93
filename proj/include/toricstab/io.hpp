#pragma once

// JSON (and fan text-line) serialization for every external surface:
// map inputs, fans, rotation certificates, stability and stabilization
// reports, degree reports. Integers that fit in 64 bits are emitted as JSON
// numbers; anything larger becomes a decimal string, so reports stay exact.

#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toricstab/bigint.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/lattice.hpp"
#include "toricstab/quadratic.hpp"
#include "toricstab/rotation.hpp"
#include "toricstab/stability.hpp"
#include "toricstab/tropical.hpp"

namespace toricstab {

using json = nlohmann::json;

inline json to_json(const BigInt& v) {
    static const BigInt lo = BigInt(std::numeric_limits<long long>::min());
    static const BigInt hi = BigInt(std::numeric_limits<long long>::max());
    if (v >= lo && v <= hi) return json(v.convert_to<long long>());
    return json(to_string(v));
}

inline BigInt bigint_from_json(const json& j) {
    if (j.is_number_integer()) return BigInt(j.get<long long>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw std::invalid_argument("expected integer or integer string");
}

inline json to_json(const LatticeVector& v) { return json::array({to_json(v.x), to_json(v.y)}); }

inline LatticeVector lattice_vector_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("expected [x, y] integer pair");
    return {bigint_from_json(j[0]), bigint_from_json(j[1])};
}

inline json to_json(const RationalRay& r) { return to_json(r.gen()); }

inline json to_json(const Fan& f) {
    json arr = json::array();
    for (const auto& r : f.rays()) arr.push_back(to_json(r));
    return arr;
}

inline Fan fan_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("fan must be a JSON array of [x,y] pairs");
    std::vector<LatticeVector> rays;
    for (const auto& e : j) rays.push_back(lattice_vector_from_json(e));
    return Fan::validate(rays);
}

// Text form: whitespace-separated integer pairs, counterclockwise,
// e.g. "1 0  0 1  -1 -1".
inline Fan fan_from_text(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    if (tokens.empty() || tokens.size() % 2 != 0)
        throw std::invalid_argument("fan text needs an even number of integers");
    std::vector<LatticeVector> rays;
    for (std::size_t i = 0; i < tokens.size(); i += 2)
        rays.emplace_back(BigInt(tokens[i]), BigInt(tokens[i + 1]));
    return Fan::validate(rays);
}

inline json to_json(const IntMatrix& m) {
    return json::array({json::array({to_json(m.a), to_json(m.b)}),
                        json::array({to_json(m.c), to_json(m.d)})});
}

inline IntMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw std::invalid_argument("matrix must be [[a,b],[c,d]]");
    return {bigint_from_json(j[0][0]), bigint_from_json(j[0][1]), bigint_from_json(j[1][0]),
            bigint_from_json(j[1][1])};
}

inline json to_json(const MonomialSupport& s) {
    json arr = json::array();
    for (const auto& e : s.exponents()) arr.push_back(to_json(e));
    return arr;
}

inline MonomialSupport support_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("support must be a nonempty array of [i,j] pairs");
    std::vector<LatticeVector> exps;
    for (const auto& e : j) exps.push_back(lattice_vector_from_json(e));
    return MonomialSupport(std::move(exps));
}

// Map input: either {"monomial": [[a,b],[c,d]]} or
// {"p1": [[i,j],...], "p2": [...], "p3": [...], "generic": true}.
struct MapInput {
    std::optional<IntMatrix> monomial;
    std::optional<RationalMapData> supports;

    PLIntegralMap build() const {
        if (monomial) return from_monomial(*monomial);
        if (supports) return tropicalize(*supports);
        throw std::invalid_argument("no map input given");
    }

    json describe() const {
        if (monomial) return json{{"monomial", to_json(*monomial)}};
        json j{{"p1", to_json(supports->p1)},
               {"p2", to_json(supports->p2)},
               {"p3", to_json(supports->p3)},
               {"generic", supports->generic_coefficients}};
        return j;
    }
};

inline MapInput map_input_from_json(const json& j) {
    MapInput in;
    if (j.contains("monomial")) {
        in.monomial = matrix_from_json(j["monomial"]);
        return in;
    }
    if (j.contains("p1") && j.contains("p2") && j.contains("p3")) {
        RationalMapData d{support_from_json(j["p1"]), support_from_json(j["p2"]),
                          support_from_json(j["p3"]),
                          j.value("generic", true)};
        in.supports = std::move(d);
        return in;
    }
    throw std::invalid_argument(
        "map input needs either \"monomial\" or supports \"p1\",\"p2\",\"p3\"");
}

inline json to_json(const PLIntegralMap& T) {
    json pieces = json::array();
    for (const auto& m : T.pieces()) pieces.push_back(to_json(m));
    return json{{"fan", to_json(T.domain_fan())},
                {"pieces", pieces},
                {"generic", T.generic_coefficients()},
                {"degenerate", T.has_degenerate_piece()}};
}

inline json to_json(const Direction& d) {
    if (d.is_rational()) return json{{"type", "rational"}, {"ray", to_json(d.ray())}};
    return json{{"type", "quadratic"},
                {"x", d.surd().x.str()},
                {"y", d.surd().y.str()},
                {"approx", json::array({d.approx_x(), d.approx_y()})}};
}

inline json to_json(const FixedComponent& c) {
    json j{{"stability", to_cstring(c.stability)},
           {"rational", c.rational},
           {"eigenvalue", c.eigenvalue.str()},
           {"eigenvalue_approx", c.eigenvalue.to_double()}};
    if (c.kind == FixedComponent::Kind::arc) {
        j["kind"] = "arc";
        j["full_circle"] = c.full_circle;
        if (!c.full_circle) {
            j["arc_start"] = to_json(*c.arc_start);
            j["arc_end"] = to_json(*c.arc_end);
        }
    } else {
        j["kind"] = "point";
        j["location"] = to_json(*c.location);
    }
    return j;
}

inline json to_json(const RotationCertificate& cert) {
    json j;
    switch (cert.kind) {
        case RotationCertificate::Kind::rational: {
            j["orientation"] = "preserving";
            j["rho"] = json{{"m", cert.m}, {"n", cert.n}};
            json orbit = json::array();
            for (const auto& r : cert.orbit) orbit.push_back(to_json(r));
            j["orbit"] = orbit;
            j["orbit_is_proxy"] = cert.orbit_is_proxy;
            if (cert.irrational_witness)
                j["irrational_witness"] = to_json(*cert.irrational_witness);
            break;
        }
        case RotationCertificate::Kind::orientation_reversing: {
            j["orientation"] = "reversing";
            j["rho"] = json{{"m", 0}, {"n", 1}};
            json fixed = json::array();
            for (const auto& c : cert.fixed_of_map) fixed.push_back(to_json(c));
            j["fixed_components"] = fixed;
            json p2 = json::array();
            for (const auto& c : cert.period_two_components) p2.push_back(to_json(c));
            j["period_two_components"] = p2;
            break;
        }
        case RotationCertificate::Kind::undetermined: {
            j["verdict"] = "undetermined";
            j["searched"] = cert.searched_up_to;
            j["estimate"] = cert.numeric_estimate;
            break;
        }
    }
    return j;
}

inline json to_json(const Sector& s) {
    return json{{"start", to_json(s.start)}, {"end", to_json(s.end)},
                {"witness", to_json(s.witness)}};
}

inline json to_json(const Cone& c) {
    return json{{"start", to_json(c.start)}, {"end", to_json(c.end)}};
}

inline json to_json(const RayStatus& st) {
    json j{{"ray", to_json(st.ray)}};
    switch (st.verdict) {
        case RayStatus::Verdict::fixed:
            j["verdict"] = "fixed";
            break;
        case RayStatus::Verdict::maps_to_fan_ray:
            j["verdict"] = "maps_to_fan_ray";
            j["target"] = to_json(*st.target);
            break;
        case RayStatus::Verdict::contracted_into_cone:
            j["verdict"] = "contracted_into_cone";
            j["cone"] = to_json(*st.cone);
            break;
    }
    return j;
}

inline json to_json(const DestabilizingOrbit& o) {
    json trace = json::array();
    for (const auto& s : o.sector_trace) trace.push_back(to_json(s));
    return json{{"ray", to_json(o.ray)},
                {"steps_to_contraction", o.steps_to_contraction},
                {"cone", to_json(o.cone)},
                {"k", o.k},
                {"hit_ray", to_json(o.hit_ray)},
                {"sector_trace", trace}};
}

inline const char* verdict_string(StabilityReport::Verdict v) {
    switch (v) {
        case StabilityReport::Verdict::stable_along_eta: return "stable_along_eta";
        case StabilityReport::Verdict::destabilized: return "destabilized";
        default: return "unknown";
    }
}

inline json to_json(const StabilityReport& rep) {
    json statuses = json::array();
    for (const auto& st : rep.statuses) statuses.push_back(to_json(st));
    json orbits = json::array();
    for (const auto& o : rep.orbits) orbits.push_back(to_json(o));
    json j{{"verdict", verdict_string(rep.verdict)},
           {"statuses", statuses},
           {"orbits", orbits},
           {"bound", rep.bound},
           {"scope",
            "verdict is relative to the poles of the invariant two-form; non-polar curves are "
            "outside this certificate"}};
    if (!rep.unknown_details.empty()) j["unknown_details"] = rep.unknown_details;
    return j;
}

inline json to_json(const StabilizationResult& res, const Fan& fan_before) {
    json log = json::array();
    for (const auto& line : res.log) log.push_back(line);
    return json{{"iterate_used", res.iterate_used},
                {"fan_before", to_json(fan_before)},
                {"fan_after", to_json(res.fan)},
                {"log", log},
                {"final_report", to_json(res.final_report)},
                {"certificate", to_json(res.certificate)}};
}

inline json to_json(const CorrigibilityVerdict& v, const Fan& fan_before) {
    json j{{"text", v.text}};
    switch (v.kind) {
        case CorrigibilityVerdict::Kind::corrigible:
            j["verdict"] = "corrigible_along_eta";
            j["iterate"] = v.iterate;
            if (v.witness) j["witness"] = to_json(*v.witness, fan_before);
            break;
        case CorrigibilityVerdict::Kind::not_stabilizable:
            j["verdict"] = "not_stabilizable";
            j["numeric_estimate"] = v.numeric_estimate;
            break;
        case CorrigibilityVerdict::Kind::undetermined:
            j["verdict"] = "undetermined";
            j["searched"] = v.searched_up_to;
            j["numeric_estimate"] = v.numeric_estimate;
            break;
    }
    if (v.certificate) j["certificate"] = to_json(*v.certificate);
    return j;
}

inline json to_json(const DegreeReport& rep) {
    return json{{"delta", to_json(rep.delta)},
                {"lambda2", to_json(rep.lambda2)},
                {"lambda1", rep.lambda1.str()},
                {"lambda1_approx", rep.lambda1_approx},
                {"lambda1_is_algebraic_integer", rep.lambda1_is_algebraic_integer},
                {"note", rep.note}};
}

inline json to_json(const DenjoyReport& rep) {
    json gaps = json::array();
    for (const auto& [n, gap] : rep.gap_by_iterations) gaps.push_back(json::array({n, gap}));
    return json{{"gap_by_iterations", gaps}, {"final_gap", rep.final_gap}};
}

}  // namespace toricstab
