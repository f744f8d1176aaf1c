#include <catch2/catch_amalgamated.hpp>

#include "pkmod/quot_ring.hpp"

using namespace pkmod;

TEST_CASE("ring parameters validate their inputs") {
    CHECK_THROWS_AS(RingParams(4, 1), config_error);   // not prime
    CHECK_THROWS_AS(RingParams(1, 1), config_error);
    CHECK_THROWS_AS(RingParams(2, 0), config_error);
    CHECK_THROWS_AS(RingParams(2, 40), config_error);  // p^k over the 2^32 bound
    RingParams pr(3, 3);
    CHECK(pr.pk == 27);
}

TEST_CASE("valuation") {
    RingParams z4(2, 2);
    CHECK(z4.valuation(2) == 1);
    CHECK(z4.valuation(0) == kValInfinity);
    RingParams z27(3, 3);
    CHECK(z27.valuation(18) == 2);  // 18 = 2 * 3^2
    CHECK(z27.valuation(1) == 0);

    // v(xy) = v(x) + v(y) when the sum stays below k; units have v = 0
    SplitMix64 rng(11);
    for (int t = 0; t < 2000; ++t) {
        std::uint64_t x = rng.below(27), y = rng.below(27);
        unsigned vx = z27.valuation(x), vy = z27.valuation(y);
        if (vx == kValInfinity || vy == kValInfinity) continue;
        if (vx + vy < z27.k) CHECK(z27.valuation(z27.mul(x, y)) == vx + vy);
        if (z27.is_unit(x)) CHECK(vx == 0);
    }
}

TEST_CASE("residue ring axioms hold exactly on random triples") {
    RingParams pr(3, 2);
    SplitMix64 rng(5);
    for (int t = 0; t < 3000; ++t) {
        std::uint64_t a = rng.below(9), b = rng.below(9), c = rng.below(9);
        CHECK(pr.mul(a, pr.mul(b, c)) == pr.mul(pr.mul(a, b), c));
        CHECK(pr.mul(a, pr.add(b, c)) == pr.add(pr.mul(a, b), pr.mul(a, c)));
        CHECK(pr.add(a, b) == pr.add(b, a));
    }
    for (std::uint64_t a = 0; a < 9; ++a)
        if (pr.is_unit(a)) CHECK(pr.mul(a, pr.inv(a)) == 1);
}

TEST_CASE("polynomial arithmetic and division") {
    RingParams pr(2, 3);
    SplitMix64 rng(17);
    auto rand_poly = [&](size_t maxdeg) {
        std::vector<std::uint64_t> c(rng.below(maxdeg + 1) + 1);
        for (auto& x : c) x = rng.below(pr.pk);
        return Poly(pr, c);
    };
    for (int t = 0; t < 1000; ++t) {
        Poly a = rand_poly(4), b = rand_poly(4), c = rand_poly(4);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
    // divmod against a monic divisor reassembles exactly
    for (int t = 0; t < 500; ++t) {
        Poly a = rand_poly(6);
        Poly g = rand_poly(3);
        g.c.resize(rng.below(3) + 2, 0);
        g.c.back() = 1;  // force monic
        Poly q(pr), r(pr);
        divmod_monic(a, g, q, r);
        CHECK(g * q + r == a);
        CHECK((r.is_zero() || *r.degree() < *g.degree()));
    }

    // the zero polynomial's degree is the sentinel, not -1 arithmetic
    CHECK(!Poly(pr).degree().has_value());
    CHECK(Poly::constant(pr, 1).degree() == std::optional<size_t>(0));
}

TEST_CASE("block factorization: split case over Z/4") {
    RingParams pr(2, 2);
    auto R = QuotRing::make(pr, Poly(pr, {0, 1, 1}));  // t^2 + t
    REQUIRE(R->blocks.size() == 2);
    CHECK(R->blocks[0].modulus == Poly(pr, {0, 1}));
    CHECK(R->blocks[1].modulus == Poly(pr, {1, 1}));
    CHECK(R->blocks[0].mult == 1);
    CHECK(R->blocks[0].res_deg == 1);
}

TEST_CASE("block factorization: one irreducible power") {
    RingParams pr(2, 2);
    auto R = QuotRing::make(pr, Poly(pr, {0, 0, 1}));  // t^2
    REQUIRE(R->blocks.size() == 1);
    CHECK(R->blocks[0].modulus == Poly(pr, {0, 0, 1}));
    CHECK(R->blocks[0].pbar == Poly(RingParams(2, 1), {0, 1}));
    CHECK(R->blocks[0].mult == 2);
    CHECK(R->blocks[0].res_deg == 1);
}

TEST_CASE("block factorization over Z/9 with exact product oracle") {
    RingParams pr(3, 2);
    auto R = QuotRing::make(pr, Poly(pr, {8, 0, 1}));  // t^2 - 1
    REQUIRE(R->blocks.size() == 2);
    Poly prod = R->blocks[0].modulus * R->blocks[1].modulus;
    CHECK(prod == Poly(pr, {8, 0, 1}));  // multiplies back exactly in (Z/9)[t]
    for (const auto& b : R->blocks) CHECK(b.modulus.is_monic());
    // comaximality mod p
    Poly g = gcd_field(R->blocks[0].modulus.reduced_mod_p(),
                       R->blocks[1].modulus.reduced_mod_p());
    CHECK(g.degree() == std::optional<size_t>(0));
}

TEST_CASE("factorization invariants on random monic polynomials") {
    for (auto [p, k] : {std::pair<std::uint64_t, unsigned>{2, 2},
                        {2, 4},
                        {3, 3},
                        {5, 2},
                        {2, 1},
                        {7, 1}}) {
        RingParams pr(p, k);
        SplitMix64 rng(101 + p + 7 * k);
        for (int t = 0; t < 60; ++t) {
            size_t deg = 1 + rng.below(4);
            std::vector<std::uint64_t> c(deg + 1);
            for (auto& x : c) x = rng.below(pr.pk);
            c.back() = 1;
            auto R = QuotRing::make(pr, Poly(pr, c));
            Poly prod = Poly::constant(pr, 1);
            for (const auto& b : R->blocks) {
                prod = prod * b.modulus;
                CHECK(b.modulus.reduced_mod_p() ==
                      [&] {
                          Poly pw = Poly::constant(RingParams(p, 1), 1);
                          for (unsigned i = 0; i < b.mult; ++i) pw = pw * b.pbar;
                          return pw;
                      }());
            }
            CHECK(prod == R->modulus);
        }
    }
}

TEST_CASE("constant or non-monic moduli are rejected") {
    RingParams pr(2, 2);
    CHECK_THROWS_AS(QuotRing::make(pr, Poly(pr, {1})), config_error);
    CHECK_THROWS_AS(QuotRing::make(pr, Poly(pr, {1, 2})), config_error);
    CHECK_THROWS_AS(QuotRing::make(pr, Poly(pr, {0, 0, 3})), config_error);
}

TEST_CASE("component split and reassembly") {
    RingParams pr(2, 2);
    auto R = QuotRing::make(pr, Poly(pr, {0, 1, 1}));

    // 1 -> (1, 1)
    auto parts = R->crt_split(R->one());
    CHECK(parts[0] == Poly::constant(pr, 1));
    CHECK(parts[1] == Poly::constant(pr, 1));

    // t -> (0, -1): evaluation at the two roots
    parts = R->crt_split(R->t_gen());
    CHECK(parts[0] == Poly(pr));
    CHECK(parts[1] == Poly::constant(pr, 3));

    // round trip on 1000 random elements, and over a second ring
    SplitMix64 rng(23);
    for (int t = 0; t < 1000; ++t) {
        Poly x(pr, {rng.below(4), rng.below(4)});
        CHECK(R->crt_join(R->crt_split(x)) == R->reduce(x));
    }
    RingParams pr9(3, 2);
    auto R9 = QuotRing::make(pr9, Poly(pr9, {0, 8, 0, 1}));  // t^3 - t = t(t-1)(t+1)
    REQUIRE(R9->blocks.size() == 3);
    for (int t = 0; t < 1000; ++t) {
        Poly x(pr9, {rng.below(9), rng.below(9), rng.below(9)});
        CHECK(R9->crt_join(R9->crt_split(x)) == R9->reduce(x));
    }
}

TEST_CASE("quotient ring element arithmetic matches the companion action") {
    RingParams pr(2, 2);
    auto R = QuotRing::make(pr, Poly(pr, {1, 1, 0, 1}));  // t^3 + t + 1
    SplitMix64 rng(3);
    for (int t = 0; t < 500; ++t) {
        Poly a(pr, {rng.below(4), rng.below(4), rng.below(4)});
        Poly b(pr, {rng.below(4), rng.below(4), rng.below(4)});
        Poly c(pr, {rng.below(4), rng.below(4), rng.below(4)});
        CHECK(R->mul(a, R->mul(b, c)) == R->mul(R->mul(a, b), c));
        CHECK(R->mul(a, b + c) == R->mul(a, b) + R->mul(a, c));
    }
    // units invert exactly
    for (int t = 0; t < 200; ++t) {
        Poly a(pr, {rng.below(4), rng.below(4), rng.below(4)});
        if (!R->is_unit(a)) continue;
        CHECK(R->mul(a, R->inv(a)) == R->one());
    }
}
