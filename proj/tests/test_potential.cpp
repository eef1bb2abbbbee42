#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dwt/io.hpp"
#include "dwt/potential.hpp"

using namespace dwt;

static std::string data_path(const char* name) {
    return std::string(DWT_DATA_DIR) + "/" + name;
}

TEST_CASE("plateau sequence indexing and aggregates") {
    PlateauSeq s{{{2, 5.0}, {3, 1.0}}, 4.0};
    REQUIRE(s.head_length() == 5);
    CHECK(s.value(1) == 5.0);
    CHECK(s.value(2) == 5.0);
    CHECK(s.value(3) == 1.0);
    CHECK(s.value(5) == 1.0);
    CHECK(s.value(6) == 4.0);
    CHECK(s.value(1000) == 4.0);
    CHECK(s.min_all() == 1.0);
    CHECK(s.max_all() == 5.0);
    CHECK(s.suffix_min(1) == 1.0);
    CHECK(s.suffix_min(3) == 1.0);
    CHECK(s.suffix_min(6) == 4.0);
    CHECK(s.suffix_max(3) == 4.0);
    CHECK(s.suffix_max(1) == 5.0);
    CHECK(s.head_sum() == 2 * 5.0 + 3 * 1.0);
    // sum of k*value over the head: 5(1+2) + 1(3+4+5)
    CHECK(s.head_weighted_sum() == 15.0 + 12.0);
}

TEST_CASE("plateau sequence normalization merges and absorbs") {
    PlateauSeq s{{{1, 2.0}, {2, 2.0}, {0, 7.0}, {3, 4.0}}, 4.0};
    s.normalize();
    REQUIRE(s.plateaus.size() == 1);
    CHECK(s.plateaus[0].length == 3);
    CHECK(s.plateaus[0].value == 2.0);
    CHECK(s.tail == 4.0);

    PlateauSeq c = PlateauSeq::constant(3.0);
    CHECK(c.head_length() == 0);
    CHECK(c.value(1) == 3.0);
    CHECK(c.min_all() == 3.0);
}

TEST_CASE("from_values builds run-length form") {
    PlateauSeq s = PlateauSeq::from_values({1.0, 1.0, 2.0, 2.0, 2.0, 0.5}, 9.0);
    REQUIRE(s.plateaus.size() == 3);
    CHECK(s.value(2) == 1.0);
    CHECK(s.value(5) == 2.0);
    CHECK(s.value(6) == 0.5);
    CHECK(s.value(7) == 9.0);
}

TEST_CASE("validation accepts the bundled fixture potentials") {
    for (const char* name : {"golden.json", "selectone.json", "kappa2.json", "constant.json"}) {
        auto pf = io::load_potential(data_path(name));
        REQUIRE(pf.is_reduced);
        ValidationReport rep = validate_reduced(pf.reduced);
        INFO(name);
        CHECK(rep.ok);
    }
    auto gf = io::load_potential(data_path("general_example.json"));
    REQUIRE_FALSE(gf.is_reduced);
    CHECK(validate_general(gf.general).ok);
}

TEST_CASE("validation rejects malformed potentials") {
    ReducedPotential r;
    r.h[0] = PlateauSeq::constant(1.0);
    r.h[1] = PlateauSeq{{{1, -0.5}}, 2.0};  // negative level
    CHECK_FALSE(validate_reduced(r).ok);

    r.h[1] = PlateauSeq{{{1, 0.0}}, 2.0};  // zero level in the head
    CHECK_FALSE(validate_reduced(r).ok);

    r.h[1] = PlateauSeq{{{1, 0.5}}, 0.0};  // zero tail without limit flag
    r.limit_approximation = false;
    CHECK_FALSE(validate_reduced(r).ok);
    r.limit_approximation = true;
    r.eps_bracket = 1e-3;
    CHECK(validate_reduced(r).ok);

    GeneralDoubleWell g;
    g.a[0] = PlateauSeq::constant(0.0);
    g.a[1] = PlateauSeq{{{1, 0.5}}, 0.25};  // nonzero limit: first moment diverges
    g.b[0] = PlateauSeq::constant(1.0);
    g.b[1] = PlateauSeq::constant(1.0);
    CHECK_FALSE(validate_general(g).ok);
}

TEST_CASE("reduction adds the interaction sums to the local levels") {
    GeneralDoubleWell g;
    g.a[0] = PlateauSeq{{{2, 0.5}}, 0.0};
    g.a[1] = PlateauSeq{{{1, 0.25}}, 0.0};
    g.b[0] = PlateauSeq{{{1, 1.0}}, 2.0};
    g.b[1] = PlateauSeq{{{3, 0.75}}, 1.5};
    ReducedPotential r = reduce(g);
    // the first level sees no interaction; deep levels pick up the full sum
    CHECK(r.h[0].value(1) == Catch::Approx(1.0).margin(1e-15));
    CHECK(r.h[0].tail == Catch::Approx(2.0 + 0.25).margin(1e-15));
    CHECK(r.h[1].value(1) == Catch::Approx(0.75).margin(1e-15));
    CHECK(r.h[1].value(2) == Catch::Approx(0.75 + 0.5).margin(1e-15));
    CHECK(r.h[1].value(3) == Catch::Approx(0.75 + 1.0).margin(1e-15));
    CHECK(r.h[1].tail == Catch::Approx(1.5 + 1.0).margin(1e-15));
    CHECK(validate_reduced(r).ok);
}

TEST_CASE("reduction matches a direct partial-sum computation") {
    GeneralDoubleWell g;
    g.a[0] = PlateauSeq{{{1, 0.3}, {2, 0.1}}, 0.0};
    g.a[1] = PlateauSeq{{{2, 0.2}}, 0.0};
    g.b[0] = PlateauSeq{{{2, 0.9}}, 1.1};
    g.b[1] = PlateauSeq{{{1, 0.6}}, 0.8};
    ReducedPotential r = reduce(g);
    for (long long n = 1; n <= 8; ++n) {
        double s1 = 0.0;
        for (long long k = 1; k < n; ++k) s1 += g.a[1].value(k);
        CHECK(r.h[0].value(n) == Catch::Approx(g.b[0].value(n) + s1).margin(1e-14));
        double s0 = 0.0;
        for (long long k = 1; k < n; ++k) s0 += g.a[0].value(k);
        CHECK(r.h[1].value(n) == Catch::Approx(g.b[1].value(n) + s0).margin(1e-14));
    }
    CHECK(r.h[0].tail == Catch::Approx(g.b[0].tail + 0.4).margin(1e-14));
    CHECK(r.h[1].tail == Catch::Approx(g.b[1].tail + 0.5).margin(1e-14));
}

TEST_CASE("derived constants and the swap involution") {
    auto r = io::load_potential(data_path("golden.json")).as_reduced();
    DerivedConstants d = derived_constants(r);
    CHECK(d.hinf[0] == 1.0);
    CHECK(d.hinf[1] == 3.0);
    CHECK(d.hmin[0] == 1.0);
    CHECK(d.hmin[1] == 1.0);
    ReducedPotential rs = r.swapped();
    CHECK(rs.hinf(Side::Zero) == 3.0);
    CHECK(rs.hinf(Side::One) == 1.0);
    CHECK(rs.swapped().h[0].tail == r.h[0].tail);
}

TEST_CASE("variation of the energy at a given depth") {
    ReducedPotential r;
    r.h[0] = PlateauSeq{{{2, 5.0}}, 1.0};
    r.h[1] = PlateauSeq{{{1, 2.0}}, 3.0};
    // deep coordinates only see the tails and the deep plateaus
    CHECK(variation(r, 50) == 0.0);
    // at depth 2 the side-0 head value 5 is still visible against tail 1
    CHECK(variation(r, 2) >= 4.0);
    double direct = 0.0;
    for (long long n = 2; n <= 60; ++n) direct += variation(r, n);
    CHECK(variation_tail_sum(r, 2) == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("variation tail sum stays cheap for astronomically long plateaus") {
    ReducedPotential r;
    r.h[0] = PlateauSeq{{{1000000000000000LL, 0.5}}, 2.0};
    r.h[1] = PlateauSeq::constant(1.0);
    // would loop ~1e15 times if computed per-index
    double v = variation_tail_sum(r, 2);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
}

TEST_CASE("potential files survive a serialization round trip") {
    auto r = io::load_potential(data_path("kappa2.json")).as_reduced();
    io::json j = io::reduced_to_json(r);
    std::string tmp = "/tmp/dwt_roundtrip.json";
    io::write_text_file(tmp, j.dump());
    auto r2 = io::load_potential(tmp).as_reduced();
    CHECK(r2.h[0].tail == r.h[0].tail);
    CHECK(r2.h[1].value(1) == r.h[1].value(1));
    CHECK(r2.h[1].value(2) == r.h[1].value(2));
    CHECK(r2.h[1].tail == r.h[1].tail);
}
