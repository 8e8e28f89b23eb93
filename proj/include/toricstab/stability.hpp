#pragma once

// Algebraic stability along the invariant toric form on a toric model:
// ray-by-ray statuses (divisor to divisor, fixed, or contracted to a double
// point), detection of destabilizing cone orbits, the fan stabilization
// algorithm driven by the rotation certificate, and corrigibility verdicts.
//
// Every verdict here is relative to the poles of the invariant two-form:
// a stable verdict certifies that no pole is destabilizing on the given
// model. Non-polar curves are outside the combinatorics and outside the
// certificate.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "toricstab/bigint.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/lattice.hpp"
#include "toricstab/quadratic.hpp"
#include "toricstab/rotation.hpp"
#include "toricstab/tropical.hpp"

namespace toricstab {

// A smooth compact toric surface (its fan) together with a homeomorphic PL
// integral map acting on the ray space.
class ToricModel {
  public:
    ToricModel(Fan fan, PLIntegralMap map) : fan_(std::move(fan)), map_(std::move(map)) {
        const HomeoVerdict hv = is_homeomorphism(map_);
        if (!hv.accepted)
            throw std::invalid_argument("ToricModel: map is not a homeomorphism: " +
                                        hv.diagnostic);
        orientation_ = hv.orientation;
    }

    const Fan& fan() const { return fan_; }
    const PLIntegralMap& map() const { return map_; }
    Orientation orientation() const { return orientation_; }

  private:
    Fan fan_;
    PLIntegralMap map_;
    Orientation orientation_;
};

// Where a fan ray goes: onto another fan ray (divisor to divisor), onto
// itself, or strictly into a cone (divisor contracted to the double point).
struct RayStatus {
    enum class Verdict { maps_to_fan_ray, fixed, contracted_into_cone };

    RationalRay ray;
    Verdict verdict;
    std::optional<RationalRay> target;  // maps_to_fan_ray
    std::optional<Cone> cone;           // contracted_into_cone
};

inline RayStatus ray_status(const ToricModel& model, const RationalRay& ray) {
    if (!model.fan().index_of(ray))
        throw std::invalid_argument("ray_status: " + ray.str() + " is not a fan ray");
    const RationalRay image = model.map().evaluate_ray(ray).ray;
    const auto loc = model.fan().locate(image);
    if (std::holds_alternative<Fan::RayHit>(loc)) {
        if (image == ray) return {ray, RayStatus::Verdict::fixed, std::nullopt, std::nullopt};
        return {ray, RayStatus::Verdict::maps_to_fan_ray, image, std::nullopt};
    }
    const Cone cone = model.fan().cone(std::get<Fan::ConeHit>(loc).index);
    return {ray, RayStatus::Verdict::contracted_into_cone, std::nullopt, cone};
}

// Forward orbit of a cone under the map, watched for an indeterminacy hit:
// a fan ray strictly inside some image sector.
struct ConeOrbitResult {
    enum class Kind { hit, safe_absorbed, safe_periodic, unknown };

    Kind kind = Kind::unknown;
    unsigned k = 0;                    // step of the hit
    std::optional<RationalRay> hit_ray;
    std::vector<Sector> trace;         // sectors T(cone), T^2(cone), ...
    std::string reason;
};

inline ConeOrbitResult cone_orbit_hits_ray(const ToricModel& model, const Cone& cone,
                                           unsigned bound) {
    if (bound < 1) throw std::invalid_argument("cone_orbit_hits_ray: bound must be >= 1");
    ConeOrbitResult res;
    std::set<std::string> seen;
    Sector sector = model.map().map_cone(cone);
    for (unsigned k = 1; k <= bound; ++k) {
        res.trace.push_back(sector);
        for (const auto& r : model.fan().rays()) {
            if (sector_contains_ray(sector, r)) {
                res.kind = ConeOrbitResult::Kind::hit;
                res.k = k;
                res.hit_ray = r;
                return res;
            }
        }
        // No fan ray strictly inside, so the sector sits inside one closed
        // cone; if that cone is contracted the orbit never leaves it again.
        for (std::size_t i = 0; i < model.fan().size(); ++i) {
            const Cone host = model.fan().cone(i);
            if (!sector_within_cone(sector, host)) continue;
            if (sector_within_cone(model.map().map_cone(host), host)) {
                res.kind = ConeOrbitResult::Kind::safe_absorbed;
                res.k = k;
                res.reason = "absorbed by contracted cone " + host.str();
                return res;
            }
            break;
        }
        const std::string key = sector.start.str() + "|" + sector.end.str();
        if (!seen.insert(key).second) {
            res.kind = ConeOrbitResult::Kind::safe_periodic;
            res.k = k;
            res.reason = "periodic sector orbit, no hit";
            return res;
        }
        sector = model.map().map_sector(sector);
    }
    res.kind = ConeOrbitResult::Kind::unknown;
    res.reason = "bound " + std::to_string(bound) + " exhausted";
    return res;
}

// A pole contracted to a double point whose forward cone-orbit reaches a
// fan ray: the witness that stability fails on this model.
struct DestabilizingOrbit {
    RationalRay ray;
    unsigned steps_to_contraction = 0;  // the ray itself is contracted
    Cone cone;
    unsigned k = 0;
    RationalRay hit_ray;
    std::vector<Sector> sector_trace;
};

struct StabilityReport {
    enum class Verdict { stable_along_eta, destabilized, unknown };

    Verdict verdict = Verdict::unknown;
    std::vector<RayStatus> statuses;
    std::vector<DestabilizingOrbit> orbits;
    unsigned bound = 0;
    std::string unknown_details;
};

inline StabilityReport find_destabilizing_orbits(const ToricModel& model, unsigned bound) {
    if (bound < 1) throw std::invalid_argument("find_destabilizing_orbits: bound must be >= 1");
    StabilityReport report;
    report.bound = bound;
    bool any_unknown = false;
    for (const auto& ray : model.fan().rays()) {
        RayStatus st = ray_status(model, ray);
        if (st.verdict == RayStatus::Verdict::contracted_into_cone) {
            const ConeOrbitResult orbit = cone_orbit_hits_ray(model, *st.cone, bound);
            switch (orbit.kind) {
                case ConeOrbitResult::Kind::hit:
                    report.orbits.push_back(
                        {ray, 0, *st.cone, orbit.k, *orbit.hit_ray, orbit.trace});
                    break;
                case ConeOrbitResult::Kind::unknown:
                    any_unknown = true;
                    report.unknown_details += "ray " + ray.str() + ": " + orbit.reason + "; ";
                    break;
                default:
                    break;
            }
        }
        report.statuses.push_back(std::move(st));
    }
    if (!report.orbits.empty())
        report.verdict = StabilityReport::Verdict::destabilized;
    else if (any_unknown)
        report.verdict = StabilityReport::Verdict::unknown;
    else
        report.verdict = StabilityReport::Verdict::stable_along_eta;
    return report;
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

struct StabilizeOptions {
    unsigned max_period = 24;
    unsigned bound = 64;
};

struct StabilizationResult {
    unsigned iterate_used = 1;
    Fan fan;
    std::vector<std::string> log;
    StabilityReport final_report;
    RotationCertificate certificate;

    StabilizationResult(unsigned n, Fan f) : iterate_used(n), fan(std::move(f)) {}
};

struct StabilizeError : std::runtime_error {
    std::vector<std::string> partial_log;
    explicit StabilizeError(const std::string& msg, std::vector<std::string> log = {})
        : std::runtime_error(msg), partial_log(std::move(log)) {}
};

namespace detail {

inline bool cone_contracted(const PLIntegralMap& U, const Cone& c) {
    return sector_within_cone(U.map_cone(c), c);
}

inline bool cone_expanded(const PLIntegralMap& U, const Cone& c) {
    return cone_within_sector(c, U.map_cone(c));
}

inline bool direction_strictly_inside_cone(const Direction& d, const Cone& c) {
    return d.strictly_inside(c.start, c.end);
}

}  // namespace detail

// Fan refinement making the n-th iterate stable along the form, where n is
// dictated by the rotation certificate (n = 2 for orientation-reversing
// maps, the certificate denominator otherwise). The procedure:
//   (a) classify the fixed components of U = T^n;
//   (b) insert rational fixed rays and arc endpoints, separate fixed
//       components into distinct cones, and check that cones holding an
//       attracting (repelling) component contract (expand), subdividing
//       toward the component when they do not;
//   (c) push every non-fixed fan ray forward, inserting images until each
//       orbit lands in a contracted cone;
//   (d) regularize remaining irregular cones and re-run (c) for the chain
//       rays, until the fan is smooth.
// The result is re-verified from scratch by the destabilization detector;
// on budget exhaustion an error with the partial log is thrown rather than
// an unverified fan returned.
inline StabilizationResult stabilize(const PLIntegralMap& T, const Fan& start_fan,
                                     const StabilizeOptions& opts = {}) {
    const RotationCertificate cert = exact_rotation(T, opts.max_period);
    if (cert.kind == RotationCertificate::Kind::undetermined)
        throw StabilizeError(
            "rotation number undetermined up to period " + std::to_string(opts.max_period) +
            "; increase max_period");
    const unsigned n =
        cert.kind == RotationCertificate::Kind::orientation_reversing ? 2u : cert.n;
    const PLIntegralMap U = iterate(T, n);

    StabilizationResult result(n, start_fan);
    result.certificate = cert;

    if (U.is_identity_on_rays()) {
        result.final_report = find_destabilizing_orbits(ToricModel(start_fan, U), opts.bound);
        return result;
    }

    const std::vector<FixedComponent> comps = fixed_components(U);
    Fan& F = result.fan;
    std::vector<std::string>& log = result.log;
    long budget = static_cast<long>(opts.bound) * 64;
    auto spend = [&](const char* where) {
        if (--budget < 0)
            throw StabilizeError(std::string("refinement budget exhausted in step ") + where +
                                     "; increase bound",
                                 log);
    };
    auto insert = [&](const RationalRay& r, const std::string& why) {
        if (F.index_of(r)) return;
        F = F.with_ray(r);
        log.push_back("insert " + r.str() + " (" + why + ")");
    };

    // (b) rational fixed rays and arc endpoints.
    for (const auto& c : comps) {
        if (c.kind == FixedComponent::Kind::arc && !c.full_circle) {
            insert(*c.arc_start, "arc endpoint");
            insert(*c.arc_end, "arc endpoint");
        } else if (c.kind == FixedComponent::Kind::point && c.rational) {
            insert(c.location->ray(), std::string(to_cstring(c.stability)) + " fixed ray");
        }
    }

    // (b) separation: no cone may hold two fixed components. Rational
    // components are fan rays now, so only irrational points can share a
    // cone; mediant bisection splits them apart.
    for (;;) {
        bool split = false;
        for (std::size_t i = 0; i < F.size() && !split; ++i) {
            const Cone cone = F.cone(i);
            unsigned inside = 0;
            for (const auto& c : comps)
                if (c.kind == FixedComponent::Kind::point &&
                    detail::direction_strictly_inside_cone(*c.location, cone))
                    ++inside;
            if (inside >= 2) {
                insert(RationalRay(cone.start.gen() + cone.end.gen()), "separate components");
                split = true;
            }
        }
        if (!split) break;
        spend("separation");
    }

    // (b) contraction/expansion around isolated components. After the
    // separation pass both cone boundaries of a component's cone sit in the
    // adjacent monotone gaps, so these loops normally pass on first try.
    for (const auto& c : comps) {
        if (c.kind != FixedComponent::Kind::point) continue;
        if (c.stability == Stability::semistable) continue;
        for (;;) {
            std::optional<Cone> home;
            for (std::size_t i = 0; i < F.size(); ++i)
                if (detail::direction_strictly_inside_cone(*c.location, F.cone(i))) {
                    home = F.cone(i);
                    break;
                }
            if (!home) break;  // component direction is itself a fan ray
            const bool ok = c.stability == Stability::attracting
                                ? detail::cone_contracted(U, *home)
                                : detail::cone_expanded(U, *home);
            if (ok) break;
            insert(RationalRay(home->start.gen() + home->end.gen()),
                   "subdivide toward fixed direction");
            spend("contraction adjustment");
        }
    }

    // (c) forward orbits of non-fixed rays, to a fixpoint. An image that
    // lands strictly inside a contracted cone is absorbed and not inserted.
    auto orbit_pass = [&]() -> bool {
        for (std::size_t i = 0; i < F.size(); ++i) {
            const RationalRay ray = F.ray(i);
            const RationalRay image = U.evaluate_ray(ray).ray;
            if (F.index_of(image)) continue;
            const auto loc = F.locate(image);
            const Cone host = F.cone(std::get<Fan::ConeHit>(loc).index);
            if (detail::cone_contracted(U, host)) continue;
            insert(image, "forward orbit of " + ray.str());
            return true;
        }
        return false;
    };
    while (orbit_pass()) spend("orbit insertion");

    // (d) regularization interleaved with (c).
    for (;;) {
        std::optional<Cone> irregular;
        for (std::size_t i = 0; i < F.size(); ++i)
            if (!is_regular(F.cone(i))) {
                irregular = F.cone(i);
                break;
            }
        if (!irregular) break;
        for (const auto& r : regularize_cone(*irregular))
            insert(r, "regularize " + irregular->str());
        spend("regularization");
        while (orbit_pass()) spend("orbit insertion");
    }

    result.final_report = find_destabilizing_orbits(ToricModel(F, U), opts.bound);
    if (result.final_report.verdict != StabilityReport::Verdict::stable_along_eta)
        throw StabilizeError("stabilization did not verify: detector verdict is not stable",
                             log);
    return result;
}

// ---------------------------------------------------------------------------
// Corrigibility verdict
// ---------------------------------------------------------------------------

struct CorrigibilityVerdict {
    enum class Kind { corrigible, not_stabilizable, undetermined };

    Kind kind = Kind::undetermined;
    unsigned iterate = 0;
    std::string text;
    std::optional<StabilizationResult> witness;
    std::optional<RotationCertificate> certificate;
    double numeric_estimate = 0.0;
    unsigned searched_up_to = 0;
};

// Theorem-of-the-artifact dispatch: reversing maps stabilize at the square,
// rational rotation number m/n stabilizes the n-th iterate, a globally
// linear map with no real eigenvalue in its first twelve powers certifies
// that no iterate can be stabilized, and anything else is honestly
// undetermined at the searched period.
inline CorrigibilityVerdict corrigibility_verdict(const PLIntegralMap& T, const Fan& start_fan,
                                                  const StabilizeOptions& opts = {}) {
    const HomeoVerdict hv = is_homeomorphism(T);
    if (!hv.accepted)
        throw std::invalid_argument("corrigibility_verdict: not a homeomorphism: " +
                                    hv.diagnostic);
    CorrigibilityVerdict out;
    const RotationCertificate cert = exact_rotation(T, opts.max_period);
    out.certificate = cert;
    if (cert.kind == RotationCertificate::Kind::orientation_reversing ||
        cert.kind == RotationCertificate::Kind::rational) {
        out.kind = CorrigibilityVerdict::Kind::corrigible;
        out.iterate = cert.kind == RotationCertificate::Kind::orientation_reversing ? 2 : cert.n;
        out.witness = stabilize(T, start_fan, opts);
        out.text = "f^" + std::to_string(out.iterate) + " corrigible (along eta)";
        return out;
    }
    // Undetermined search. For a globally linear map the rationality test is
    // complete, so a negative answer upgrades to a definitive verdict.
    if (T.is_linear() && !monomial_rationality_test(T.piece(0))) {
        out.kind = CorrigibilityVerdict::Kind::not_stabilizable;
        out.text = "no iterate stabilizable (irrational rotation number)";
        out.numeric_estimate = cert.numeric_estimate;
        return out;
    }
    out.kind = CorrigibilityVerdict::Kind::undetermined;
    out.searched_up_to = cert.searched_up_to;
    out.numeric_estimate = cert.numeric_estimate;
    out.text = "unknown up to period " + std::to_string(cert.searched_up_to);
    return out;
}

// ---------------------------------------------------------------------------
// Monomial degree report
// ---------------------------------------------------------------------------

struct DegreeReport {
    BigInt delta;            // multiplier of the invariant form, det A
    BigInt lambda2;          // topological degree |det A|
    QuadraticNumber lambda1; // spectral radius, exact
    double lambda1_approx = 0.0;
    bool lambda1_is_algebraic_integer = true;
    std::string note;
};

inline DegreeReport monomial_degrees(const IntMatrix& A) {
    if (A.det() == 0) throw std::invalid_argument("monomial_degrees: singular matrix");
    DegreeReport rep;
    rep.delta = A.det();
    rep.lambda2 = abs(rep.delta);
    const BigInt tr = A.trace();
    const BigInt disc = tr * tr - 4 * A.det();
    if (disc >= 0) {
        const QuadraticNumber lp = QuadraticNumber::surd(tr, 1, disc, 2).abs();
        const QuadraticNumber lm = QuadraticNumber::surd(tr, -1, disc, 2).abs();
        rep.lambda1 = lp >= lm ? lp : lm;
        rep.note = "lambda1 is an algebraic integer: the spectral radius of an integer matrix, "
                   "a root of z^2 - " + to_string(tr) + " z + " + to_string(A.det()) +
                   " or its reflection";
    } else {
        // Conjugate complex eigenvalues share modulus sqrt(det).
        rep.lambda1 = QuadraticNumber::surd(0, 1, rep.lambda2, 1);
        rep.note = "lambda1 is an algebraic integer: complex conjugate spectrum of modulus "
                   "sqrt(" + to_string(rep.lambda2) + "), a root of z^2 - " +
                   to_string(rep.lambda2);
    }
    rep.lambda1_approx = rep.lambda1.to_double();
    return rep;
}

}  // namespace toricstab
