#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "toricstab/stability.hpp"

using namespace toricstab;

namespace {

PLIntegralMap period_five_map() {
    return tropicalize({MonomialSupport({{1, 1}}), MonomialSupport({{0, 0}, {0, 1}}),
                        MonomialSupport({{1, 0}}), true});
}

const Fan five_ray_orbit_fan() {
    return Fan::validate({{1, 0}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}});
}

}  // namespace

TEST_CASE("ray_status") {
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const RayStatus st = ray_status(rev, RationalRay(1, 0));
    REQUIRE(st.verdict == RayStatus::Verdict::contracted_into_cone);
    CHECK(*st.cone == Cone(RationalRay(0, 1), RationalRay(-1, -1)));

    const ToricModel id(Fan::p2(), from_monomial(IntMatrix::identity()));
    for (const auto& r : id.fan().rays())
        CHECK(ray_status(id, r).verdict == RayStatus::Verdict::fixed);

    const ToricModel rot(Fan::p1xp1(), from_monomial(IntMatrix(0, -1, 1, 0)));
    for (const auto& r : rot.fan().rays()) {
        const RayStatus s = ray_status(rot, r);
        CHECK(s.verdict == RayStatus::Verdict::maps_to_fan_ray);
    }
    CHECK_THROWS_AS(ray_status(rot, RationalRay(1, 1)), std::invalid_argument);
}

TEST_CASE("cone_orbit_hits_ray") {
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const ConeOrbitResult hit =
        cone_orbit_hits_ray(rev, Cone(RationalRay(0, 1), RationalRay(-1, -1)), 64);
    REQUIRE(hit.kind == ConeOrbitResult::Kind::hit);
    CHECK(hit.k == 1);
    CHECK(*hit.hit_ray == RationalRay(1, 0));

    const ToricModel id(Fan::p2(), from_monomial(IntMatrix::identity()));
    const ConeOrbitResult safe =
        cone_orbit_hits_ray(id, Cone(RationalRay(1, 0), RationalRay(0, 1)), 64);
    CHECK(safe.kind == ConeOrbitResult::Kind::safe_absorbed);
    CHECK(safe.k == 1);

    const ToricModel scalar(Fan::p2(), iterate(from_monomial(IntMatrix(-1, -1, 3, -1)), 3));
    const ConeOrbitResult absorbed =
        cone_orbit_hits_ray(scalar, Cone(RationalRay(1, 0), RationalRay(0, 1)), 64);
    CHECK(absorbed.kind == ConeOrbitResult::Kind::safe_absorbed);
}

TEST_CASE("find_destabilizing_orbits") {
    // the the reversing matrix [[-1,3],[3,2]] matrix on the fan of P^2 is destabilized at k = 1 by the
    // ray (1,0)
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const StabilityReport bad = find_destabilizing_orbits(rev, 64);
    REQUIRE(bad.verdict == StabilityReport::Verdict::destabilized);
    bool found = false;
    for (const auto& o : bad.orbits)
        if (o.ray == RationalRay(1, 0)) {
            found = true;
            CHECK(o.k == 1);
            CHECK(o.hit_ray == RationalRay(1, 0));
            CHECK(o.cone == Cone(RationalRay(0, 1), RationalRay(-1, -1)));
            CHECK(o.steps_to_contraction == 0);
        }
    CHECK(found);

    // the period-five map permutes the five rays of its orbit fan
    const ToricModel us(five_ray_orbit_fan(), period_five_map());
    const StabilityReport ok = find_destabilizing_orbits(us, 64);
    CHECK(ok.verdict == StabilityReport::Verdict::stable_along_eta);
    for (const auto& st : ok.statuses)
        CHECK(st.verdict == RayStatus::Verdict::maps_to_fan_ray);

    const ToricModel id(Fan::p2(), from_monomial(IntMatrix::identity()));
    CHECK(find_destabilizing_orbits(id, 64).verdict ==
          StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("destabilizing orbits replay") {
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const StabilityReport rep = find_destabilizing_orbits(rev, 64);
    REQUIRE(rep.verdict == StabilityReport::Verdict::destabilized);
    for (const auto& o : rep.orbits) {
        Sector s = rev.map().map_cone(o.cone);
        for (std::size_t i = 0; i < o.sector_trace.size(); ++i) {
            CHECK(s.start == o.sector_trace[i].start);
            CHECK(s.end == o.sector_trace[i].end);
            if (i + 1 < o.sector_trace.size()) s = rev.map().map_sector(s);
        }
        CHECK(sector_contains_ray(o.sector_trace.back(), o.hit_ray));
    }
}

TEST_CASE("stabilize: the reversing matrix [[-1,3],[3,2]] stabilizes at the square") {
    const PLIntegralMap T = from_monomial(IntMatrix(-1, 3, 3, 2));
    const StabilizationResult res = stabilize(T, Fan::p2());
    CHECK(res.iterate_used == 2);
    // output fan is a refinement with only regular cones
    const Fan p2 = Fan::p2();
    for (const auto& r : p2.rays()) CHECK(res.fan.index_of(r).has_value());
    for (std::size_t i = 0; i < res.fan.size(); ++i) CHECK(is_regular(res.fan.cone(i)));
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);

    // iterate coherence: U = T^2 is stable on the refined fan while T itself
    // is destabilized on the fan of P^2
    const StabilityReport recheck =
        find_destabilizing_orbits(ToricModel(res.fan, iterate(T, 2)), 64);
    CHECK(recheck.verdict == StabilityReport::Verdict::stable_along_eta);
    CHECK(find_destabilizing_orbits(ToricModel(Fan::p2(), T), 64).verdict ==
          StabilityReport::Verdict::destabilized);
}

TEST_CASE("stabilize: the matrix [[-1,-1],[3,-1]] needs no refinement at the cube") {
    const StabilizationResult res = stabilize(from_monomial(IntMatrix(-1, -1, 3, -1)), Fan::p2());
    CHECK(res.iterate_used == 3);
    CHECK(res.fan == Fan::p2());
    CHECK(res.log.empty());
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: period-five map at the fifth iterate") {
    const StabilizationResult res = stabilize(period_five_map(), Fan::p2());
    CHECK(res.iterate_used == 5);
    CHECK(res.fan == Fan::p2());
    CHECK(res.log.empty());
}

TEST_CASE("stabilize: golden-mean matrix at the first iterate") {
    const StabilizationResult res = stabilize(from_monomial(IntMatrix(2, 1, 1, 1)), Fan::p2());
    CHECK(res.iterate_used == 1);
    for (std::size_t i = 0; i < res.fan.size(); ++i) CHECK(is_regular(res.fan.cone(i)));
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
    // recomputed from scratch
    CHECK(find_destabilizing_orbits(ToricModel(res.fan, from_monomial(IntMatrix(2, 1, 1, 1))),
                                    64)
              .verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: forward-orbit insertion fires for rays in transit cones") {
    // Start fan with a ray just past the repelling direction of the
    // golden-mean matrix: (2,-3) maps to (1,-1), strictly inside a
    // non-contracted transit cone, so the image must be inserted.
    const Fan start = Fan::validate({{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, -2}, {2, -3}});
    const StabilizationResult res = stabilize(from_monomial(IntMatrix(2, 1, 1, 1)), start);
    CHECK(res.iterate_used == 1);
    CHECK(res.fan.index_of(RationalRay(1, -1)).has_value());
    bool orbit_insert = false;
    for (const auto& line : res.log)
        if (line.find("forward orbit") != std::string::npos) orbit_insert = true;
    CHECK(orbit_insert);
    for (const auto& r : start.rays()) CHECK(res.fan.index_of(r).has_value());
    for (std::size_t i = 0; i < res.fan.size(); ++i) CHECK(is_regular(res.fan.cone(i)));
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: irregular start fans get regularized") {
    const Fan start = Fan::validate({{1, 0}, {1, 2}, {-1, 0}, {0, -1}});
    const StabilizationResult res = stabilize(from_monomial(IntMatrix(2, 1, 1, 1)), start);
    CHECK(res.fan.index_of(RationalRay(1, 1)).has_value());
    CHECK(res.fan.index_of(RationalRay(0, 1)).has_value());
    bool regularized = false;
    for (const auto& line : res.log)
        if (line.find("regularize") != std::string::npos) regularized = true;
    CHECK(regularized);
    for (std::size_t i = 0; i < res.fan.size(); ++i) CHECK(is_regular(res.fan.cone(i)));
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: semistable shear inserts the opposite fixed ray") {
    const StabilizationResult res = stabilize(from_monomial(IntMatrix(1, 1, 0, 1)), Fan::p2());
    CHECK(res.iterate_used == 1);
    CHECK(res.fan.index_of(RationalRay(-1, 0)).has_value());
    CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: piecewise-linear inputs") {
    const PLIntegralMap usn = period_five_map();
    // rho(penta . shear) = 5/7; the seventh iterate is stable on P2 as is
    const StabilizationResult seven =
        stabilize(compose(usn, from_monomial(IntMatrix(1, 1, 0, 1))), Fan::p2(), {60, 64});
    CHECK(seven.iterate_used == 7);
    CHECK(seven.final_report.verdict == StabilityReport::Verdict::stable_along_eta);

    const StabilizationResult mix =
        stabilize(compose(usn, from_monomial(IntMatrix(0, -1, 1, 0))), Fan::p2(), {60, 64});
    CHECK(mix.iterate_used == 1);
    for (std::size_t i = 0; i < mix.fan.size(); ++i) CHECK(is_regular(mix.fan.cone(i)));
    CHECK(mix.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
}

TEST_CASE("stabilize: randomized linear maps with certified rotation numbers") {
    oracle::Rng rng(9090);
    int done = 0;
    while (done < 40) {
        const IntMatrix A = rng.nonsingular_matrix(4);
        const PLIntegralMap T = from_monomial(A);
        const RotationCertificate cert = exact_rotation(T, 24);
        if (cert.kind == RotationCertificate::Kind::undetermined) continue;

        Fan start = Fan::p2();
        const int blowups = static_cast<int>(rng.integer(0, 4));
        for (int b = 0; b < blowups; ++b)
            start = blowup(start,
                           start.cone(static_cast<std::size_t>(
                               rng.integer(0, static_cast<long>(start.size()) - 1))));

        const StabilizationResult res = stabilize(T, start, {24, 64});
        for (const auto& r : start.rays()) CHECK(res.fan.index_of(r).has_value());
        for (std::size_t i = 0; i < res.fan.size(); ++i) CHECK(is_regular(res.fan.cone(i)));
        CHECK(res.final_report.verdict == StabilityReport::Verdict::stable_along_eta);
        ++done;
    }
}

TEST_CASE("corrigibility verdicts") {
    CHECK(corrigibility_verdict(from_monomial(IntMatrix(-1, 3, 3, 2)), Fan::p2()).text ==
          "f^2 corrigible (along eta)");
    CHECK(corrigibility_verdict(period_five_map(), Fan::p2()).text == "f^5 corrigible (along eta)");
    CHECK(corrigibility_verdict(from_monomial(IntMatrix(-1, -1, 3, -1)), Fan::p2()).text ==
          "f^3 corrigible (along eta)");

    const CorrigibilityVerdict irr =
        corrigibility_verdict(from_monomial(IntMatrix(1, -2, 1, 1)), Fan::p2());
    CHECK(irr.kind == CorrigibilityVerdict::Kind::not_stabilizable);
}

TEST_CASE("monomial_degrees") {
    const DegreeReport rev = monomial_degrees(IntMatrix(-1, 3, 3, 2));
    CHECK(rev.delta == -11);
    CHECK(rev.lambda2 == 11);
    CHECK(rev.lambda1 == QuadraticNumber::surd(1, 1, 45, 2));
    CHECK(std::fabs(rev.lambda1_approx - 3.854101966249685) < 1e-12);

    const DegreeReport p3cert = monomial_degrees(IntMatrix(-1, -1, 3, -1));
    CHECK(p3cert.delta == 4);
    CHECK(p3cert.lambda2 == 4);
    CHECK(p3cert.lambda1 == QuadraticNumber::rational(2));
    CHECK(p3cert.lambda1.str() == "2");

    const DegreeReport id = monomial_degrees(IntMatrix::identity());
    CHECK(id.delta == 1);
    CHECK(id.lambda2 == 1);
    CHECK(id.lambda1 == QuadraticNumber::rational(1));

    CHECK_THROWS_AS(monomial_degrees(IntMatrix(1, 1, 1, 1)), std::invalid_argument);
}

TEST_CASE("lambda1 tracks the spectral radius within 1e-12") {
    oracle::Rng rng(2718);
    for (int i = 0; i < 200; ++i) {
        const IntMatrix A = rng.nonsingular_matrix(30);
        const DegreeReport rep = monomial_degrees(A);
        const double tr = to_double(A.trace());
        const double det = to_double(A.det());
        const double disc = tr * tr - 4 * det;
        const double expected = disc >= 0
                                    ? std::max(std::fabs((tr + std::sqrt(disc)) / 2),
                                               std::fabs((tr - std::sqrt(disc)) / 2))
                                    : std::sqrt(std::fabs(det));
        CHECK(std::fabs(rep.lambda1_approx - expected) < 1e-9 * std::max(1.0, expected));
        CHECK(rep.lambda2 == abs(A.det()));
    }
}
