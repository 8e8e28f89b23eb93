#pragma once

// Randomized property suites shared by the Catch2 tests and the acceptance
// binary. Each suite runs a fixed-seed batch and reports the first failure.

#include <sstream>
#include <string>

#include "oracles.hpp"
#include "toricstab/rotation.hpp"
#include "toricstab/stability.hpp"

namespace suites {

using namespace toricstab;

struct SuiteResult {
    bool ok = true;
    int cases = 0;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

// compose(from_monomial(A), from_monomial(B)) acts on rays like A*B.
inline SuiteResult functoriality(int cases = 100) {
    SuiteResult res;
    oracle::Rng rng(4001);
    for (int i = 0; i < cases; ++i) {
        const IntMatrix A = rng.nonsingular_matrix(5);
        const IntMatrix B = rng.nonsingular_matrix(5);
        const PLIntegralMap lhs = compose(from_monomial(A), from_monomial(B));
        const PLIntegralMap rhs = from_monomial(A * B);
        if (!ray_equal(lhs, rhs)) {
            res.fail("A=" + A.str() + " B=" + B.str());
            break;
        }
        ++res.cases;
    }
    return res;
}

// Random blowup sequences keep the fan valid and grow it by one ray a step.
inline SuiteResult blowup_validity(int sequences = 500, int max_len = 30) {
    SuiteResult res;
    oracle::Rng rng(4002);
    for (int s = 0; s < sequences; ++s) {
        Fan f = Fan::p2();
        const int len = static_cast<int>(rng.integer(1, max_len));
        for (int step = 0; step < len; ++step) {
            const std::size_t before = f.size();
            const std::size_t pick =
                static_cast<std::size_t>(rng.integer(0, static_cast<long>(f.size()) - 1));
            Fan next = blowup(f, f.cone(pick));
            if (next.size() != before + 1) {
                res.fail("blowup did not add exactly one ray");
                return res;
            }
            std::vector<LatticeVector> gens;
            for (const auto& r : next.rays()) gens.push_back(r.gen());
            try {
                f = Fan::validate(gens);
            } catch (const std::exception& e) {
                res.fail(std::string("fan invalid after blowup: ") + e.what());
                return res;
            }
        }
        ++res.cases;
    }
    return res;
}

// Hirzebruch-Jung chains leave only determinant-1 cones, are idempotent,
// and (for small cones) agree with the brute-force hull oracle.
inline SuiteResult regularization(int cases = 150) {
    SuiteResult res;
    oracle::Rng rng(4003);
    while (res.cases < cases) {
        const RationalRay a = rng.primitive_ray(9);
        RationalRay b = rng.primitive_ray(9);
        if (det2(a.gen(), b.gen()) <= 1) continue;
        const Cone cone(a, b);
        const auto chain = regularize_cone(cone);
        LatticeVector prev = a.gen();
        bool good = true;
        for (const auto& r : chain) {
            if (det2(prev, r.gen()) != 1) good = false;
            prev = r.gen();
        }
        if (det2(prev, b.gen()) != 1) good = false;
        if (!good) {
            res.fail("chain determinant != 1 for " + cone.str());
            return res;
        }
        // idempotence: every sub-cone is already regular
        prev = a.gen();
        for (const auto& r : chain) {
            if (!regularize_cone(Cone(RationalRay(prev), r)).empty()) {
                res.fail("second pass not empty for " + cone.str());
                return res;
            }
            prev = r.gen();
        }
        const auto expected = oracle::hull_chain(cone, 20);
        if (expected.size() != chain.size()) {
            res.fail("hull oracle disagrees for " + cone.str());
            return res;
        }
        for (std::size_t i = 0; i < chain.size(); ++i)
            if (chain[i] != expected[i]) {
                res.fail("hull oracle disagrees for " + cone.str());
                return res;
            }
        ++res.cases;
    }
    return res;
}

// Tropicalized maps are integral and homogeneous, and the piece table
// agrees with the direct double-min formula.
inline SuiteResult integrality(int points = 10000) {
    SuiteResult res;
    oracle::Rng rng(4004);
    const RationalMapData penta{MonomialSupport({{1, 1}}),
                                 MonomialSupport({{0, 0}, {0, 1}}), MonomialSupport({{1, 0}}),
                                 true};
    const RationalMapData wide{MonomialSupport({{0, 0}, {2, 1}, {0, 3}}),
                               MonomialSupport({{1, 0}, {0, 2}}),
                               MonomialSupport({{1, 1}, {3, 0}}), true};
    const RationalMapData maps[] = {penta, wide};
    const PLIntegralMap built[] = {tropicalize(penta), tropicalize(wide)};
    for (int i = 0; i < points; ++i) {
        const int which = static_cast<int>(rng.integer(0, 1));
        const LatticeVector u = rng.nonzero_vector(1000000);
        const LatticeVector via_pieces = built[which].apply(u);
        if (via_pieces != oracle::tropical_formula(maps[which], u)) {
            res.fail("piece table disagrees with the min formula at (" + to_string(u.x) + "," +
                     to_string(u.y) + ")");
            return res;
        }
        const long k = rng.integer(1, 50);
        if (built[which].apply(u.scaled(k)) != via_pieces.scaled(k)) {
            res.fail("homogeneity fails");
            return res;
        }
        ++res.cases;
    }
    return res;
}

// exact_rotation is invariant under GL2(Z) conjugacy: same denominator, and
// the numerator flips sign with the orientation of the conjugacy.
inline SuiteResult conjugacy_invariance(int cases = 100) {
    SuiteResult res;
    oracle::Rng rng(4005);
    const PLIntegralMap base[] = {
        from_monomial(IntMatrix(0, -1, 1, 0)), from_monomial(IntMatrix(-1, -1, 3, -1)),
        from_monomial(IntMatrix(1, -1, 1, 1)),
        tropicalize({MonomialSupport({{1, 1}}), MonomialSupport({{0, 0}, {0, 1}}),
                     MonomialSupport({{1, 0}}), true})};
    for (int i = 0; i < cases; ++i) {
        const PLIntegralMap& T = base[rng.integer(0, 3)];
        const IntMatrix L = rng.gl2z(3);
        const PLIntegralMap conj =
            compose(from_monomial(L), compose(T, from_monomial(oracle::gl2z_inverse(L))));
        const RotationCertificate ct = exact_rotation(T, 16);
        const RotationCertificate cc = exact_rotation(conj, 16);
        if (ct.kind != RotationCertificate::Kind::rational ||
            cc.kind != RotationCertificate::Kind::rational) {
            res.fail("expected rational certificates");
            return res;
        }
        if (ct.n != cc.n) {
            res.fail("denominator changed under conjugacy by " + L.str());
            return res;
        }
        const long expect_m =
            L.det() == 1 ? ct.m : static_cast<long>((ct.n - ct.m) % ct.n);
        if (cc.m != expect_m) {
            res.fail("numerator mismatch under conjugacy by " + L.str() + ": got " +
                     std::to_string(cc.m) + ", expected " + std::to_string(expect_m));
            return res;
        }
        ++res.cases;
    }
    return res;
}

// Every reported destabilizing orbit replays: re-applying the map
// reproduces the stored sector trace and the final containment.
inline SuiteResult orbit_replay(int cases = 100) {
    SuiteResult res;
    oracle::Rng rng(4006);
    while (res.cases < cases) {
        const IntMatrix A = rng.nonsingular_matrix(4);
        const PLIntegralMap T = from_monomial(A);
        if (!is_homeomorphism(T).accepted) continue;
        const ToricModel model(Fan::p2(), T);
        const StabilityReport rep = find_destabilizing_orbits(model, 32);
        if (rep.verdict != StabilityReport::Verdict::destabilized) continue;
        for (const auto& o : rep.orbits) {
            Sector s = model.map().map_cone(o.cone);
            for (std::size_t i = 0; i < o.sector_trace.size(); ++i) {
                if (!(s.start == o.sector_trace[i].start && s.end == o.sector_trace[i].end)) {
                    res.fail("trace mismatch for " + A.str());
                    return res;
                }
                if (i + 1 < o.sector_trace.size()) s = model.map().map_sector(s);
            }
            if (!sector_contains_ray(o.sector_trace.back(), o.hit_ray)) {
                res.fail("final containment fails for " + A.str());
                return res;
            }
        }
        ++res.cases;
    }
    return res;
}

// Random words in Z-invertible generators always get a rational certificate
// or an honest Undetermined, never a certified-irrational verdict; most
// resolve within period 60.
inline SuiteResult plaz2_words(int words = 50, unsigned max_period = 60, int* rational_count = nullptr) {
    SuiteResult res;
    oracle::Rng rng(4007);
    const PLIntegralMap gens[] = {
        tropicalize({MonomialSupport({{1, 1}}), MonomialSupport({{0, 0}, {0, 1}}),
                     MonomialSupport({{1, 0}}), true}),
        from_monomial(IntMatrix(1, 1, 0, 1)), from_monomial(IntMatrix(1, 0, 1, 1)),
        from_monomial(IntMatrix(0, -1, 1, 0))};
    int rational = 0;
    for (int w = 0; w < words; ++w) {
        const int len = static_cast<int>(rng.integer(1, 6));
        PLIntegralMap word = gens[rng.integer(0, 3)];
        for (int i = 1; i < len; ++i) word = compose(word, gens[rng.integer(0, 3)]);
        if (!is_homeomorphism(word).accepted) {
            res.fail("word is not a homeomorphism");
            return res;
        }
        const RotationCertificate cert = exact_rotation(word, max_period);
        if (cert.kind == RotationCertificate::Kind::rational ||
            cert.kind == RotationCertificate::Kind::orientation_reversing) {
            ++rational;
        } else if (cert.kind != RotationCertificate::Kind::undetermined) {
            res.fail("unexpected certificate kind");
            return res;
        }
        ++res.cases;
    }
    if (rational_count) *rational_count = rational;
    return res;
}

}  // namespace suites
