#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "toricstab/quadratic.hpp"

using namespace toricstab;

TEST_CASE("normalization") {
    // sqrt(45) reduces to 3*sqrt(5)
    const QuadraticNumber a = QuadraticNumber::surd(1, 1, 45, 2);
    CHECK(a.D() == 5);
    CHECK(a.q() == 3);
    CHECK(a.str() == "(1+3*sqrt(5))/2");

    // perfect squares collapse to rationals
    const QuadraticNumber b = QuadraticNumber::surd(0, 1, 4, 1);
    CHECK(b.is_rational());
    CHECK(b.str() == "2");

    const QuadraticNumber c = QuadraticNumber::surd(3, 0, 7, 3);
    CHECK(c.is_rational());
    CHECK(c.str() == "1");

    // negative denominators are flipped
    const QuadraticNumber d = QuadraticNumber::surd(1, 1, 2, -1);
    CHECK(d.sign() < 0);
}

TEST_CASE("signs and comparisons") {
    CHECK(QuadraticNumber::surd(-1, 1, 2).sign() > 0);   // sqrt(2) > 1
    CHECK(QuadraticNumber::surd(-2, 1, 2).sign() < 0);   // sqrt(2) < 2
    CHECK(QuadraticNumber::surd(-1, 1, 1).sign() == 0);  // sqrt(1) - 1
    CHECK(QuadraticNumber::surd(1, -1, 5, 2).sign() < 0);

    // cross-field comparison: 1 + sqrt(2) < sqrt(6)? 2.414 vs 2.449
    const QuadraticNumber x = QuadraticNumber::surd(1, 1, 2);
    const QuadraticNumber y = QuadraticNumber::surd(0, 1, 6);
    CHECK(x < y);
    CHECK(y > x);
    CHECK(x == x);
}

TEST_CASE("comparison agrees with floating point on random instances") {
    oracle::Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        const QuadraticNumber a = QuadraticNumber::surd(
            rng.integer(-1000, 1000), rng.integer(-1000, 1000), rng.integer(0, 1000),
            rng.integer(1, 1000));
        const QuadraticNumber b = QuadraticNumber::surd(
            rng.integer(-1000, 1000), rng.integer(-1000, 1000), rng.integer(0, 1000),
            rng.integer(1, 1000));
        const double fa = a.to_double(), fb = b.to_double();
        if (std::fabs(fa - fb) <= 1e-9) continue;  // too close for float to referee
        const int cmp = QuadraticNumber::compare(a, b);
        CHECK(cmp == (fa < fb ? -1 : 1));
    }
}

TEST_CASE("eigen_directions: complex spectrum is empty") {
    const EigenDirections e = eigen_directions(IntMatrix(-1, -1, 3, -1));
    CHECK(e.scalar == EigenDirections::ScalarKind::none);
    CHECK(e.fixed.empty());
    CHECK(e.period_two.empty());
}

TEST_CASE("eigen_directions: mixed real spectrum of the the reversing matrix [[-1,3],[3,2]] matrix") {
    // char poly z^2 - z - 11, roots (1 +- sqrt(45))/2; only the positive
    // root contributes fixed rays, the negative one gives period-2 rays.
    const EigenDirections e = eigen_directions(IntMatrix(-1, 3, 3, 2));
    REQUIRE(e.fixed.size() == 2);
    REQUIRE(e.period_two.size() == 2);
    const QuadraticNumber expected = QuadraticNumber::surd(1, 1, 45, 2);
    CHECK(e.fixed[0].eigenvalue == expected);
    CHECK(e.fixed[0].eigenvalue.sign() > 0);
    CHECK(e.period_two[0].eigenvalue.sign() < 0);
    // the two fixed rays are opposite
    const QuadVec& v0 = e.fixed[0].direction.surd();
    const QuadVec& v1 = e.fixed[1].direction.surd();
    CHECK((v0.x + v1.x).is_zero());
    CHECK((v0.y + v1.y).is_zero());
}

TEST_CASE("eigen_directions: positive scalar fixes everything") {
    const EigenDirections e = eigen_directions(IntMatrix(8, 0, 0, 8));
    CHECK(e.scalar == EigenDirections::ScalarKind::positive);
    CHECK(e.scalar_value == QuadraticNumber::rational(8));
}

TEST_CASE("eigen_directions: rational spectrum and Jordan blocks") {
    // diag(2,1): fixed rays on both axes
    const EigenDirections d = eigen_directions(IntMatrix(2, 0, 0, 1));
    REQUIRE(d.fixed.size() == 4);
    CHECK_FALSE(d.jordan_block);

    // shear: double eigenvalue 1, single eigen line
    const EigenDirections s = eigen_directions(IntMatrix(1, 1, 0, 1));
    CHECK(s.jordan_block);
    REQUIRE(s.fixed.size() == 2);
    CHECK(s.fixed[0].direction.is_rational());
    CHECK(s.fixed[0].direction.ray() == RationalRay(1, 0));

    CHECK_THROWS_AS(eigen_directions(IntMatrix(1, 1, 1, 1)), std::invalid_argument);
}
