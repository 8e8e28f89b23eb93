#include <catch2/catch_amalgamated.hpp>

#include "toricstab/io.hpp"

using namespace toricstab;

TEST_CASE("fan serialization: text and JSON forms") {
    const Fan f = fan_from_text("1 0  0 1  -1 -1");
    CHECK(f == Fan::p2());
    const json j = to_json(f);
    CHECK(fan_from_json(j) == f);
    CHECK_THROWS_AS(fan_from_text("1 0 0"), std::invalid_argument);
    CHECK_THROWS_AS(fan_from_text("1 0  -1 0"), FanError);
}

TEST_CASE("big integers round-trip, large values as strings") {
    const BigInt big("123456789012345678901234567890");
    const json j = to_json(big);
    CHECK(j.is_string());
    CHECK(bigint_from_json(j) == big);
    CHECK(to_json(BigInt(-17)).is_number_integer());
    CHECK(bigint_from_json(json(-17)) == -17);
}

TEST_CASE("map input forms") {
    const MapInput mono = map_input_from_json(json::parse(R"({"monomial": [[-1,3],[3,2]]})"));
    REQUIRE(mono.monomial.has_value());
    CHECK(*mono.monomial == IntMatrix(-1, 3, 3, 2));
    CHECK(mono.build().is_linear());

    const MapInput sup = map_input_from_json(json::parse(
        R"({"p1": [[1,1]], "p2": [[0,0],[0,1]], "p3": [[1,0]], "generic": true})"));
    REQUIRE(sup.supports.has_value());
    const PLIntegralMap T = sup.build();
    CHECK(T.apply({1, 0}) == LatticeVector(0, -1));
    CHECK(T.generic_coefficients());

    CHECK_THROWS_AS(map_input_from_json(json::parse(R"({"p1": [[1,1]]})")),
                    std::invalid_argument);
}

TEST_CASE("rotation certificate JSON shape") {
    const PLIntegralMap penta =
        tropicalize({MonomialSupport({{1, 1}}), MonomialSupport({{0, 0}, {0, 1}}),
                     MonomialSupport({{1, 0}}), true});
    const json j = to_json(exact_rotation(penta, 10));
    CHECK(j["rho"]["m"] == 4);
    CHECK(j["rho"]["n"] == 5);
    CHECK(j["orientation"] == "preserving");
    REQUIRE(j["orbit"].is_array());
    CHECK(j["orbit"].size() == 5);
    CHECK(j["orbit"][0] == json::array({1, 0}));

    const json rev = to_json(exact_rotation(from_monomial(IntMatrix(-1, 3, 3, 2)), 10));
    CHECK(rev["orientation"] == "reversing");
    CHECK(rev["rho"]["m"] == 0);

    const json und = to_json(exact_rotation(from_monomial(IntMatrix(1, -2, 1, 1)), 6));
    CHECK(und["verdict"] == "undetermined");
    CHECK(und["searched"] == 6);
    CHECK(und.contains("estimate"));
}

TEST_CASE("degree report JSON") {
    const json j = to_json(monomial_degrees(IntMatrix(-1, -1, 3, -1)));
    CHECK(j["delta"] == 4);
    CHECK(j["lambda2"] == 4);
    CHECK(j["lambda1"] == "2");
    CHECK(j["lambda1_is_algebraic_integer"] == true);
}

TEST_CASE("stability report JSON carries full orbit traces") {
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const json j = to_json(find_destabilizing_orbits(rev, 64));
    CHECK(j["verdict"] == "destabilized");
    REQUIRE(j["orbits"].is_array());
    CHECK(!j["orbits"].empty());
    CHECK(j["orbits"][0].contains("sector_trace"));
    CHECK(j.contains("scope"));
}

TEST_CASE("reports are deterministic") {
    const ToricModel rev(Fan::p2(), from_monomial(IntMatrix(-1, 3, 3, 2)));
    const std::string a = to_json(find_destabilizing_orbits(rev, 64)).dump();
    const std::string b = to_json(find_destabilizing_orbits(rev, 64)).dump();
    CHECK(a == b);
}
