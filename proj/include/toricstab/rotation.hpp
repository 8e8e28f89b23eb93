#pragma once

// Dynamics of the circle homeomorphism induced by a PL integral
// homeomorphism: numeric rotation-number estimates, exact rational
// certificates found through periodic-ray search, and the classification of
// Fix(T) into attracting/repelling/semistable components.
//
// Convention: the circle is oriented counterclockwise and rotation numbers
// are reported in [0, 1). Sources using the clockwise convention will see
// m/n where we report (n-m)/n; rationality and the denominator n are
// convention-free.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "toricstab/bigint.hpp"
#include "toricstab/fan.hpp"
#include "toricstab/lattice.hpp"
#include "toricstab/quadratic.hpp"
#include "toricstab/tropical.hpp"

namespace toricstab {

enum class Stability { attracting, repelling, semistable };

inline const char* to_cstring(Stability s) {
    switch (s) {
        case Stability::attracting: return "attracting";
        case Stability::repelling: return "repelling";
        default: return "semistable";
    }
}

// One connected component of the fixed-ray set of a circle homeomorphism.
// Point components sit at an eigen-direction of a linear piece; arc
// components are unions of cones on which the map is a positive scalar.
// Arc endpoints are always rational, and for orientation-preserving maps so
// are isolated semistable points.
struct FixedComponent {
    enum class Kind { point, arc };

    Kind kind = Kind::point;
    std::optional<Direction> location;      // point
    std::optional<RationalRay> arc_start;   // arc
    std::optional<RationalRay> arc_end;
    bool full_circle = false;
    QuadraticNumber eigenvalue;
    Stability stability = Stability::semistable;
    bool rational = true;
    std::optional<Cone> home_cone;  // cone of the domain fan containing a point component

    std::string str() const {
        if (kind == Kind::arc) {
            if (full_circle) return "arc[full circle]";
            return "arc[" + arc_start->str() + " .. " + arc_end->str() + "]";
        }
        return std::string("point[") + location->str() + "]";
    }
};

struct RotationCertificate {
    enum class Kind { rational, orientation_reversing, undetermined };

    Kind kind = Kind::undetermined;

    // rational: rho = m/n in lowest terms, with either a genuine periodic
    // orbit or (when the periodic rays are irrational) a bracketing proxy
    // orbit plus the fixed-component witness.
    long m = 0;
    unsigned n = 1;
    std::vector<RationalRay> orbit;
    bool orbit_is_proxy = false;
    std::optional<FixedComponent> irrational_witness;

    // orientation reversing: rho = 0, exactly two fixed rays; period-2 data
    // is the fixed set of the square.
    std::vector<FixedComponent> fixed_of_map;
    std::vector<FixedComponent> period_two_components;

    // undetermined
    unsigned searched_up_to = 0;
    double numeric_estimate = 0.0;
};

// ---------------------------------------------------------------------------
// Numeric estimate
// ---------------------------------------------------------------------------

// Birkhoff average of unwrapped angular increments along a floating-point
// ray orbit. Increments are forced into (-pi, pi]; an increment of exactly
// pi (a ray sent to its opposite) is taken as +pi, which fixes one lift
// consistently.
inline double numeric_rotation(const PLIntegralMap& T, unsigned iterations,
                               const RationalRay& seed) {
    const HomeoVerdict hv = is_homeomorphism(T);
    if (!hv.accepted) throw std::invalid_argument("numeric_rotation: not a homeomorphism");
    if (hv.orientation == Orientation::reversing)
        throw std::invalid_argument(
            "numeric_rotation: orientation reversing, rotation number is 0; "
            "use the orientation-reversing branch");
    if (iterations < 1) throw std::invalid_argument("numeric_rotation: iterations must be >= 1");

    const Fan& fan = T.domain_fan();
    const std::size_t pieces = fan.size();
    std::vector<double> rx(pieces), ry(pieces);
    std::vector<double> ma(pieces), mb(pieces), mc(pieces), md(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
        rx[i] = to_double(fan.ray(i).gen().x);
        ry[i] = to_double(fan.ray(i).gen().y);
        ma[i] = to_double(T.piece(i).a);
        mb[i] = to_double(T.piece(i).b);
        mc[i] = to_double(T.piece(i).c);
        md[i] = to_double(T.piece(i).d);
    }
    auto locate = [&](double x, double y) -> std::size_t {
        for (std::size_t i = 0; i < pieces; ++i) {
            const std::size_t j = (i + 1) % pieces;
            const double c1 = rx[i] * y - ry[i] * x;
            const double c2 = x * ry[j] - y * rx[j];
            if (c1 >= 0 && c2 > 0) return i;
        }
        return 0;  // numerically on a ray; either adjacent piece agrees there
    };

    double x = to_double(seed.gen().x), y = to_double(seed.gen().y);
    double norm = std::hypot(x, y);
    x /= norm;
    y /= norm;
    double theta = std::atan2(y, x);
    double total = 0.0;
    constexpr double pi = 3.14159265358979323846;

    for (unsigned k = 0; k < iterations; ++k) {
        const std::size_t i = locate(x, y);
        const double nx = ma[i] * x + mb[i] * y;
        const double ny = mc[i] * x + md[i] * y;
        const double ntheta = std::atan2(ny, nx);
        double delta = ntheta - theta;
        while (delta > pi) delta -= 2 * pi;
        while (delta <= -pi) delta += 2 * pi;
        if (!(std::fabs(delta) <= pi + 1e-12))
            throw std::logic_error("numeric_rotation: increment left (-pi, pi]");
        total += delta;
        norm = std::hypot(nx, ny);
        x = nx / norm;
        y = ny / norm;
        theta = ntheta;
    }
    double rho = std::fmod(total / (2 * pi * iterations), 1.0);
    if (rho < 0) rho += 1.0;
    return rho;
}

// ---------------------------------------------------------------------------
// Fixed components
// ---------------------------------------------------------------------------

namespace detail {

enum class SideBehavior { attracted, repelled, neutral };

// Behavior of the open side arc next to a fixed ray with eigenvalue lam,
// governed by piece M whose other eigenvalue is mu = trace - lam. The arc
// between consecutive fixed directions moves one way, and the local rate at
// the fixed ray is |mu|/lam, so the modulus comparison decides. The Jordan
// case (mu == lam, M not scalar) is settled by one exact probe: the side
// cone contains no other fixed direction, so any interior ray reveals the
// direction of motion.
inline SideBehavior side_behavior(const IntMatrix& M, const QuadraticNumber& lam,
                                  const RationalRay& fixed_ray, bool fixed_is_start,
                                  const Cone& side_cone) {
    const QuadraticNumber mu = QuadraticNumber::rational(M.trace()) - lam;
    const int cmp = QuadraticNumber::compare(mu.abs(), lam);
    if (cmp < 0) return SideBehavior::attracted;
    if (cmp > 0) return SideBehavior::repelled;
    if (mu == lam) {
        // Jordan block; probe the mediant.
        const RationalRay probe(side_cone.start.gen() + side_cone.end.gen());
        const LatticeVector img = M.apply(probe.gen());
        const RationalRay img_ray(img);
        const bool toward = fixed_is_start ? ccw_between(fixed_ray, img_ray, probe)
                                           : ccw_between(probe, img_ray, fixed_ray);
        return toward ? SideBehavior::attracted : SideBehavior::repelled;
    }
    return SideBehavior::neutral;  // mu == -lam: a reversing piece; every nearby ray has period 2
}

inline Stability combine_sides(SideBehavior a, SideBehavior b) {
    if (a == SideBehavior::attracted && b == SideBehavior::attracted)
        return Stability::attracting;
    if (a == SideBehavior::repelled && b == SideBehavior::repelled) return Stability::repelling;
    return Stability::semistable;
}

}  // namespace detail

// Connected components of the fixed-ray set of T (a homeomorphism).
inline std::vector<FixedComponent> fixed_components(const PLIntegralMap& T) {
    if (!is_homeomorphism(T).accepted)
        throw std::invalid_argument("fixed_components: not a homeomorphism");

    const Fan& fan = T.domain_fan();
    const std::size_t n = fan.size();
    std::vector<FixedComponent> out;

    // Whole circle fixed: every piece one positive scalar.
    if (T.is_identity_on_rays()) {
        FixedComponent c;
        c.kind = FixedComponent::Kind::arc;
        c.arc_start = fan.ray(0);
        c.arc_end = fan.ray(0);
        c.full_circle = true;
        c.eigenvalue = QuadraticNumber::rational(T.piece(0).a);
        c.stability = Stability::semistable;
        c.rational = true;
        out.push_back(std::move(c));
        return out;
    }

    std::vector<bool> scalar(n);
    for (std::size_t i = 0; i < n; ++i) scalar[i] = T.piece(i).is_scalar() && T.piece(i).a > 0;

    std::vector<bool> ray_fixed(n);
    std::vector<BigInt> ray_lambda(n);
    for (std::size_t j = 0; j < n; ++j) {
        const LatticeVector img = T.piece(j).apply(fan.ray(j).gen());
        ray_fixed[j] = !img.is_zero() && same_ray(img, fan.ray(j).gen());
        if (ray_fixed[j]) ray_lambda[j] = content(img);
    }

    // Arc components: maximal runs of scalar cones.
    for (std::size_t i = 0; i < n; ++i) {
        if (!scalar[i] || scalar[(i + n - 1) % n]) continue;  // start of a run only
        std::size_t len = 1;
        while (scalar[(i + len) % n]) ++len;

        FixedComponent c;
        c.kind = FixedComponent::Kind::arc;
        c.arc_start = fan.ray(i);
        c.arc_end = fan.ray(i + len);
        c.eigenvalue = QuadraticNumber::rational(T.piece(i).a);
        c.rational = true;
        const auto left = detail::side_behavior(T.piece((i + n - 1) % n), c.eigenvalue,
                                                fan.ray(i), false, fan.cone((i + n - 1) % n));
        const auto right = detail::side_behavior(T.piece((i + len) % n), c.eigenvalue,
                                                 fan.ray(i + len), true, fan.cone((i + len) % n));
        c.stability = detail::combine_sides(left, right);
        out.push_back(std::move(c));
    }

    // Isolated fixed fan rays (not absorbed into an arc).
    for (std::size_t j = 0; j < n; ++j) {
        if (!ray_fixed[j]) continue;
        const std::size_t before = (j + n - 1) % n;
        if (scalar[before] || scalar[j]) continue;  // belongs to an arc
        FixedComponent c;
        c.kind = FixedComponent::Kind::point;
        c.location = Direction(fan.ray(j));
        c.eigenvalue = QuadraticNumber::rational(ray_lambda[j]);
        c.rational = true;
        const auto left =
            detail::side_behavior(T.piece(before), c.eigenvalue, fan.ray(j), false,
                                  fan.cone(before));
        const auto right =
            detail::side_behavior(T.piece(j), c.eigenvalue, fan.ray(j), true, fan.cone(j));
        c.stability = detail::combine_sides(left, right);
        out.push_back(std::move(c));
    }

    // Eigen-directions strictly inside a cone.
    for (std::size_t i = 0; i < n; ++i) {
        if (scalar[i]) continue;
        const Cone cone = fan.cone(i);
        const EigenDirections eig = eigen_directions(T.piece(i));
        for (const EigenRay& er : eig.fixed) {
            if (!er.direction.strictly_inside(cone.start, cone.end)) continue;
            FixedComponent c;
            c.kind = FixedComponent::Kind::point;
            c.location = er.direction;
            c.eigenvalue = er.eigenvalue;
            c.rational = er.direction.is_rational();
            c.home_cone = cone;
            const QuadraticNumber mu =
                QuadraticNumber::rational(T.piece(i).trace()) - er.eigenvalue;
            const int cmp = QuadraticNumber::compare(mu.abs(), er.eigenvalue);
            if (cmp < 0) {
                c.stability = Stability::attracting;
            } else if (cmp > 0) {
                c.stability = Stability::repelling;
            } else {
                c.stability = Stability::semistable;  // Jordan or neutral reversing piece
            }
            out.push_back(std::move(c));
        }
    }

    // Deterministic angular presentation order (exactness is not needed for
    // ordering; all membership logic above is exact).
    auto angle_of = [](const FixedComponent& c) {
        const double x = c.kind == FixedComponent::Kind::arc ? to_double(c.arc_start->gen().x)
                                                             : c.location->approx_x();
        const double y = c.kind == FixedComponent::Kind::arc ? to_double(c.arc_start->gen().y)
                                                             : c.location->approx_y();
        double a = std::atan2(y, x);
        if (a < 0) a += 2 * 3.14159265358979323846;
        return a;
    };
    std::stable_sort(out.begin(), out.end(), [&](const FixedComponent& a, const FixedComponent& b) {
        return angle_of(a) < angle_of(b);
    });

    // Isolated semistable points of an orientation-preserving map are
    // rational (they come from a Jordan block or a linearity-breaking ray).
    if (is_homeomorphism(T).orientation == Orientation::preserving) {
        for (const auto& c : out)
            if (c.kind == FixedComponent::Kind::point && c.stability == Stability::semistable &&
                !c.rational)
                throw std::logic_error("irrational isolated semistable fixed ray");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact rotation number
// ---------------------------------------------------------------------------

namespace detail {

// Cyclic step of an orbit segment: sort the points by angle, read the index
// step of the dynamics, and require it constant. For a homeomorphism with
// rho = m/n the order type of any orbit segment of length n matches the
// rigid rotation, so the step is m.
inline long cyclic_step(const std::vector<RationalRay>& orbit, bool wraps) {
    const std::size_t n = orbit.size();
    if (n == 1) return 0;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return angle_less(orbit[a].gen(), orbit[b].gen());
    });
    std::vector<std::size_t> pos(n);
    for (std::size_t rank = 0; rank < n; ++rank) pos[order[rank]] = rank;

    const std::size_t steps = wraps ? n : n - 1;
    long step = -1;
    for (std::size_t k = 0; k < steps; ++k) {
        const long s =
            static_cast<long>((pos[(k + 1) % n] + n - pos[k]) % n);
        if (step == -1) step = s;
        if (s != step) throw std::logic_error("orbit cyclic order has non-constant step");
    }
    return step;
}

inline long gcd_long(long a, long b) {
    while (b) {
        const long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// Rational ray bracket (lo, hi) around an irrational fixed direction inside
// its home cone, tight enough that no other fixed component lies inside and
// that the images of lo and hi stay on their own sides of the direction
// (the sandwich is invariant).
inline std::pair<RationalRay, RationalRay> bracket_irrational(
    const PLIntegralMap& U, const FixedComponent& target,
    const std::vector<FixedComponent>& all) {
    const Cone cone = *target.home_cone;
    const Direction& d = *target.location;
    RationalRay lo = cone.start, hi = cone.end;
    for (int round = 0; round < 512; ++round) {
        bool clean = true;
        for (const auto& c : all) {
            if (c.kind != FixedComponent::Kind::point) continue;
            if (&c == &target) continue;
            const Direction& e = *c.location;
            const bool inside = e.is_rational()
                                    ? (ccw_between(lo, e.ray(), hi))
                                    : e.strictly_inside(lo, hi);
            if (inside) {
                clean = false;
                break;
            }
        }
        if (clean) {
            const RationalRay lo_img = U.evaluate_ray(lo).ray;
            const RationalRay hi_img = U.evaluate_ray(hi).ray;
            if (d.side_of(lo_img) > 0 && d.side_of(hi_img) < 0) return {lo, hi};
        }
        const RationalRay m(lo.gen() + hi.gen());
        if (d.side_of(m) > 0)
            lo = m;  // direction still ahead of the mediant
        else
            hi = m;
        guard_magnitude(lo.gen().x);
        guard_magnitude(hi.gen().x);
    }
    throw std::runtime_error("bracket_irrational: sandwich did not stabilize");
}

}  // namespace detail

// Exact rotation certificate via periodic-ray search up to max_period.
// Orientation-reversing maps short-circuit to rho = 0 with their two fixed
// rays. Otherwise the smallest n with Fix(T^n) nonempty is the denominator
// and the numerator is the cyclic step of an orbit of length n. If no
// period at or below max_period works the result is Undetermined, an honest
// third verdict that is never silently treated as irrational.
inline RotationCertificate exact_rotation(const PLIntegralMap& T, unsigned max_period) {
    if (max_period < 1) throw std::invalid_argument("exact_rotation: max_period must be >= 1");
    const HomeoVerdict hv = is_homeomorphism(T);
    if (!hv.accepted)
        throw std::invalid_argument("exact_rotation: not a homeomorphism: " + hv.diagnostic);

    RotationCertificate cert;
    if (hv.orientation == Orientation::reversing) {
        cert.kind = RotationCertificate::Kind::orientation_reversing;
        cert.m = 0;
        cert.n = 1;
        cert.fixed_of_map = fixed_components(T);
        cert.period_two_components = fixed_components(iterate(T, 2));
        return cert;
    }

    std::optional<PLIntegralMap> power;
    for (unsigned n = 1; n <= max_period; ++n) {
        power = power ? compose(T, *power) : T;
        const std::vector<FixedComponent> comps = fixed_components(*power);
        if (comps.empty()) continue;

        // Prefer a rational witness: an arc endpoint or a rational point.
        std::optional<RationalRay> witness;
        for (const auto& c : comps) {
            if (c.kind == FixedComponent::Kind::arc) {
                witness = c.full_circle ? RationalRay(1, 0) : *c.arc_start;
                break;
            }
            if (c.rational) {
                witness = c.location->ray();
                break;
            }
        }

        cert.kind = RotationCertificate::Kind::rational;
        cert.n = n;
        if (witness) {
            std::vector<RationalRay> orbit{*witness};
            for (unsigned k = 1; k < n; ++k) orbit.push_back(T.evaluate_ray(orbit.back()).ray);
            if (T.evaluate_ray(orbit.back()).ray != *witness)
                throw std::logic_error("periodic witness does not close up");
            for (std::size_t i = 0; i < orbit.size(); ++i)
                for (std::size_t j = i + 1; j < orbit.size(); ++j)
                    if (orbit[i] == orbit[j])
                        throw std::logic_error("periodic orbit has a repeated ray");
            const long m = detail::cyclic_step(orbit, /*wraps=*/true);
            if (n > 1 && detail::gcd_long(m, static_cast<long>(n)) != 1)
                throw std::logic_error("rotation number not in lowest terms");
            cert.m = m;
            cert.orbit = std::move(orbit);
            cert.orbit_is_proxy = false;
        } else {
            // Only irrational fixed rays: bracket one (attracting if
            // available) and read the step off a rational proxy orbit.
            const FixedComponent* pick = &comps.front();
            for (const auto& c : comps)
                if (c.stability == Stability::attracting) {
                    pick = &c;
                    break;
                }
            const auto [lo, hi] = detail::bracket_irrational(*power, *pick, comps);
            (void)hi;
            std::vector<RationalRay> orbit{lo};
            for (unsigned k = 1; k < n; ++k) orbit.push_back(T.evaluate_ray(orbit.back()).ray);
            const long m = detail::cyclic_step(orbit, /*wraps=*/false);
            if (n > 1 && detail::gcd_long(m, static_cast<long>(n)) != 1)
                throw std::logic_error("rotation number not in lowest terms");
            cert.m = m;
            cert.orbit = std::move(orbit);
            cert.orbit_is_proxy = true;
            cert.irrational_witness = *pick;
        }
        return cert;
    }

    cert.kind = RotationCertificate::Kind::undetermined;
    cert.searched_up_to = max_period;
    cert.numeric_estimate = numeric_rotation(T, 10000, RationalRay(1, 0));
    return cert;
}

// ---------------------------------------------------------------------------
// Monomial rationality
// ---------------------------------------------------------------------------

// Smallest k <= 12 such that A^k has a real eigenvalue, if any. For an
// integer matrix the eigenvalue argument theta has 2*cos(theta) = tr/sqrt(det)
// rational or a pure quadratic surd, which confines rational rotation to
// angles pi*j/q with q in {1,2,3,4,6} plus the surd angles pi/4-type (q=8)
// and pi/6-type (q=12); k = 12 therefore decides. (Checking stops at the
// first real power, which is also handy diagnostics.)
inline std::optional<unsigned> first_real_power(const IntMatrix& A) {
    if (A.det() == 0) throw std::invalid_argument("first_real_power: singular matrix");
    IntMatrix p = IntMatrix::identity();
    for (unsigned k = 1; k <= 12; ++k) {
        p = p * A;
        const BigInt tr = p.trace();
        if (tr * tr - 4 * p.det() >= 0) return k;
    }
    return std::nullopt;
}

// True iff the rotation number of the linear ray map of A is rational.
// Complete for globally linear maps.
inline bool monomial_rationality_test(const IntMatrix& A) {
    return first_real_power(A).has_value();
}

// ---------------------------------------------------------------------------
// Denjoy-style density report
// ---------------------------------------------------------------------------

struct DenjoyReport {
    std::vector<std::pair<unsigned, double>> gap_by_iterations;  // (N, largest angular gap)
    double final_gap = 0.0;
};

// Empirical orbit-density report for a map whose rotation number search came
// back Undetermined and whose numeric estimate is far from every rational
// with small denominator. A shrinking largest-gap sequence is supporting
// evidence of minimality (dense orbits), not a proof.
inline DenjoyReport denjoy_statement_check(const PLIntegralMap& T, unsigned max_period,
                                           unsigned iterations = 10000) {
    const RotationCertificate cert = exact_rotation(T, max_period);
    if (cert.kind != RotationCertificate::Kind::undetermined)
        throw std::invalid_argument(
            "denjoy_statement_check: rotation number was certified rational or reversing");
    const double est = cert.numeric_estimate;
    for (unsigned q = 1; q <= max_period; ++q)
        for (unsigned p = 0; p <= q; ++p)
            if (std::fabs(est - static_cast<double>(p) / q) <= 1e-3)
                throw std::invalid_argument(
                    "denjoy_statement_check: numeric estimate is too close to " +
                    std::to_string(p) + "/" + std::to_string(q));

    const Fan& fan = T.domain_fan();
    std::vector<double> angles;
    angles.reserve(iterations);
    double x = 1.0, y = 0.0;
    const std::size_t n = fan.size();
    std::vector<double> rx(n), ry(n), ma(n), mb(n), mc(n), md(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = to_double(fan.ray(i).gen().x);
        ry[i] = to_double(fan.ray(i).gen().y);
        ma[i] = to_double(T.piece(i).a);
        mb[i] = to_double(T.piece(i).b);
        mc[i] = to_double(T.piece(i).c);
        md[i] = to_double(T.piece(i).d);
    }
    DenjoyReport report;
    constexpr double two_pi = 2 * 3.14159265358979323846;
    auto max_gap = [&]() {
        std::vector<double> sorted = angles;
        std::sort(sorted.begin(), sorted.end());
        double gap = sorted.front() + two_pi - sorted.back();
        for (std::size_t i = 1; i < sorted.size(); ++i)
            gap = std::max(gap, sorted[i] - sorted[i - 1]);
        return gap;
    };
    for (unsigned k = 0; k < iterations; ++k) {
        double a = std::atan2(y, x);
        if (a < 0) a += two_pi;
        angles.push_back(a);
        std::size_t piece = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            if (rx[i] * y - ry[i] * x >= 0 && x * ry[j] - y * rx[j] > 0) {
                piece = i;
                break;
            }
        }
        const double nx2 = ma[piece] * x + mb[piece] * y;
        const double ny2 = mc[piece] * x + md[piece] * y;
        const double norm = std::hypot(nx2, ny2);
        x = nx2 / norm;
        y = ny2 / norm;
        if (k + 1 == iterations / 100 || k + 1 == iterations / 10 || k + 1 == iterations)
            report.gap_by_iterations.emplace_back(k + 1, max_gap());
    }
    report.final_gap = report.gap_by_iterations.empty() ? max_gap()
                                                        : report.gap_by_iterations.back().second;
    return report;
}

}  // namespace toricstab
