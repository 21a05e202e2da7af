#include <catch2/catch_amalgamated.hpp>

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include <escf/exact.hpp>

#include "reference_values.hpp"

using escf::exact::Int;

namespace {

bool is_prime_small(std::uint64_t m) {
    if (m < 2) return false;
    for (std::uint64_t p = 2; p * p <= m; ++p)
        if (m % p == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("partial-sum numerators match the reference values") {
    escf::exact::TaylorGen g;
    for (std::size_t n = 0; n < ref::kA.size(); ++n) {
        CAPTURE(n);
        CHECK(g.term().n == n);
        CHECK(g.term().a == ref::kA[n]);
        CHECK(g.term().factorial == escf::exact::factorial(n));
        g.advance();
    }
    CHECK(escf::exact::taylor_numerator(11) == ref::kA[11]);
}

TEST_CASE("partial-sum numerator equals n! times the rational partial sum") {
    // Independent oracle: accumulate sum(1/k!) in exact rationals.
    mpq_class acc = 0;
    escf::exact::TaylorGen g;
    for (std::uint64_t n = 0; n <= 120; ++n) {
        acc += mpq_class(1, escf::exact::factorial(n));
        mpq_class scaled = acc * mpq_class(escf::exact::factorial(n));
        scaled.canonicalize();
        REQUIRE(scaled.get_den() == 1);
        REQUIRE(scaled.get_num() == g.term().a);
        g.advance();
    }
}

TEST_CASE("continued-fraction coefficients") {
    CHECK_THROWS_AS(escf::exact::cf_coefficient(0), std::invalid_argument);
    for (std::size_t i = 0; i < ref::kB.size(); ++i) {
        CAPTURE(i);
        CHECK(escf::exact::cf_coefficient(i + 1) == ref::kB[i]);
    }
    for (std::uint64_t k = 1; k <= 100; ++k) {
        CHECK(escf::exact::cf_coefficient(3 * k) == 2 * k);
        CHECK(escf::exact::cf_coefficient(3 * k + 1) == 1);
        CHECK(escf::exact::cf_coefficient(3 * k + 2) == 1);
    }
}

TEST_CASE("convergents match the reference values") {
    escf::exact::ConvergentGen g;
    for (std::size_t n = 0; n < ref::kP.size(); ++n) {
        CAPTURE(n);
        CHECK(g.term().n == n);
        CHECK(g.term().p == ref::kP[n]);
        CHECK(g.term().q == ref::kQ[n]);
        g.advance();
    }
    auto [p11, q11] = escf::exact::convergent(11);
    CHECK(p11 == 2721);
    CHECK(q11 == 1001);
}

TEST_CASE("convergent structure: determinant identity, coprimality, parity") {
    escf::exact::ConvergentGen g;
    Int prev_p = 0, prev_q = 0;
    for (std::uint64_t n = 0; n <= 500; ++n) {
        const auto& t = g.term();
        if (n >= 1) {
            // P(n) Q(n-1) - P(n-1) Q(n) = (-1)^n
            Int det = t.p * prev_q - prev_p * t.q;
            CAPTURE(n);
            REQUIRE(det == (n % 2 == 0 ? 1 : -1));
            REQUIRE(gcd(t.p, t.q) == 1);
        }
        if (n % 3 == 2) REQUIRE(t.q % 2 == 1);  // Q(3m+2) is odd
        prev_p = t.p;
        prev_q = t.q;
        g.advance();
    }
}

TEST_CASE("reduced terms: d, N, and the paired gcd r") {
    escf::exact::ReducedGen g;
    for (std::size_t n = 0; n < ref::kD.size(); ++n) {
        CAPTURE(n);
        auto t = g.term();
        CHECK(t.n == n);
        CHECK(t.d == ref::kD[n]);
        CHECK(t.numerator == ref::kN[n]);
        CHECK(t.r == ref::kR[n]);
        g.advance();
    }
}

TEST_CASE("reduced terms agree with a direct gcd computation") {
    escf::exact::ReducedGen g;
    for (std::uint64_t n = 0; n <= 200; ++n) {
        Int a = escf::exact::taylor_numerator(n);
        Int d = gcd(a, escf::exact::factorial(n));
        auto t = g.term();
        CAPTURE(n);
        REQUIRE(t.d == d);
        REQUIRE(t.numerator * d == a);
        g.advance();
    }
}

TEST_CASE("nontrivial r(n) values pin a short list of primes") {
    escf::exact::ReducedGen g;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> hits;
    for (std::uint64_t n = 0; n <= 300; ++n) {
        auto t = g.term();
        if (n >= 1 && t.r != 1) {
            REQUIRE(t.r.fits_ulong_p());
            hits.emplace_back(n, t.r.get_ui());
            if (n >= 3) {
                // r(n) != 1 forces r(n) = n + 3, a prime
                REQUIRE(t.r == n + 3);
                REQUIRE(is_prime_small(n + 3));
            }
        }
        g.advance();
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> expect;
    for (auto h : ref::kRHits)
        if (h.n >= 1 && h.n <= 300 && h.r != 1) expect.emplace_back(h.n, h.r);
    CHECK(hits == expect);
}

TEST_CASE("smallest factorial multiple") {
    CHECK_THROWS_AS(escf::exact::smallest_factorial_multiple(0), std::invalid_argument);
    CHECK(escf::exact::smallest_factorial_multiple(1) == 1);
    CHECK(escf::exact::smallest_factorial_multiple(2) == 2);
    CHECK(escf::exact::smallest_factorial_multiple(6) == 3);
    CHECK(escf::exact::smallest_factorial_multiple(9) == 6);
    CHECK(escf::exact::smallest_factorial_multiple(32) == 8);  // v2(m!) first reaches 5 at m = 8
    CHECK(escf::exact::smallest_factorial_multiple(7) == 7);
    SECTION("q | S! and q does not divide (S-1)!") {
        for (std::uint64_t q = 2; q <= 2000; ++q) {
            std::uint64_t s = escf::exact::smallest_factorial_multiple(q);
            CAPTURE(q, s);
            REQUIRE(s <= q);
            REQUIRE(escf::exact::factorial(s) % q == 0);
            REQUIRE(escf::exact::factorial(s - 1) % q != 0);
        }
    }
}

TEST_CASE("factorial power recognition") {
    using P = std::pair<std::uint64_t, std::uint64_t>;
    CHECK_THROWS_AS(escf::exact::is_factorial_power(1), std::invalid_argument);
    CHECK(escf::exact::is_factorial_power(36) == P(3, 2));
    CHECK(escf::exact::is_factorial_power(30) == std::nullopt);
    CHECK(escf::exact::is_factorial_power(2) == P(2, 1));
    CHECK(escf::exact::is_factorial_power(4) == P(2, 2));
    CHECK(escf::exact::is_factorial_power(64) == P(2, 6));
    CHECK(escf::exact::is_factorial_power(720) == P(6, 1));
    CHECK(escf::exact::is_factorial_power(576) == P(4, 2));
    CHECK(escf::exact::is_factorial_power(48) == std::nullopt);
    SECTION("round trip with maximal exponent") {
        for (std::uint64_t j = 2; j <= 8; ++j) {
            Int f = escf::exact::factorial(j);
            Int q = 1;
            for (std::uint64_t k = 1; k <= 5; ++k) {
                q *= f;
                auto rep = escf::exact::is_factorial_power(q);
                CAPTURE(j, k);
                REQUIRE(rep.has_value());
                auto [j0, k0] = *rep;
                REQUIRE(k0 >= k);
                Int check = 1;
                for (std::uint64_t t = 0; t < k0; ++t) check *= escf::exact::factorial(j0);
                REQUIRE(check == q);
            }
        }
    }
}

TEST_CASE("gcd-bounding polynomial towers") {
    CHECK_THROWS_AS(escf::exact::poly_F(0), std::invalid_argument);
    // F(1) = 1, F(2) = x + 3, F(3) = x^2 + 6x + 10
    CHECK(escf::exact::poly_F(1) == escf::IntPolynomial::constant(1));
    CHECK(escf::exact::poly_F(2).eval(0) == 3);
    CHECK(escf::exact::poly_F(2).eval(5) == 8);
    CHECK(escf::exact::poly_F(3).eval(0) == 10);
    CHECK(escf::exact::poly_F(3).eval(2) == 26);
    // G(0) = G(1) = 1, G(2) = x + 3, G(3) = (x+3)^2 (x^2+6x+10)
    CHECK(escf::exact::poly_G(0) == escf::IntPolynomial::constant(1));
    CHECK(escf::exact::poly_G(1) == escf::IntPolynomial::constant(1));
    CHECK(escf::exact::poly_G(2).eval(4) == 7);
    CHECK(escf::exact::poly_G(3).eval(1) == 16 * 17);
    SECTION("recurrences hold at sample points") {
        for (std::uint64_t j = 2; j <= 7; ++j) {
            auto fj = escf::exact::poly_F(j);
            auto fj1 = escf::exact::poly_F(j - 1);
            auto gj = escf::exact::poly_G(j);
            auto gj1 = escf::exact::poly_G(j - 1);
            for (long x = -3; x <= 12; ++x) {
                CAPTURE(j, x);
                REQUIRE(fj.eval(x) == (Int(x) + Int(static_cast<long>(j))) * fj1.eval(x) + 1);
                Int prefix = 1;
                for (std::uint64_t t = 1; t <= j; ++t) prefix *= escf::exact::poly_F(t).eval(x);
                REQUIRE(gj.eval(x) == prefix * gj1.eval(x));
            }
        }
    }
}

TEST_CASE("gcds of d-values obey the polynomial bounds") {
    std::vector<Int> d(61), fact(61);
    escf::exact::TaylorGen tg;
    for (std::uint64_t n = 0; n <= 60; ++n, tg.advance()) {
        fact[n] = tg.term().factorial;
        d[n] = gcd(tg.term().a, tg.term().factorial);
    }
    for (std::uint64_t j = 1; j <= 6; ++j) {
        auto F = escf::exact::poly_F(j);
        auto G = escf::exact::poly_G(j);
        for (std::uint64_t i = 0; i + j <= 56; ++i) {
            CAPTURE(i, j);
            REQUIRE(F.eval(static_cast<long>(i)) % gcd(d[i], d[i + j]) == 0);
            Int prod = 1;
            for (std::uint64_t t = 0; t <= j; ++t) prod *= d[i + t];
            REQUIRE(prod <= fact[i + j] * G.eval(static_cast<long>(i)));
        }
    }
}

TEST_CASE("consecutive d gcd structure") {
    escf::exact::TaylorGen tg;
    std::vector<Int> d(503);
    for (std::uint64_t n = 0; n <= 502; ++n, tg.advance())
        d[n] = gcd(tg.term().a, tg.term().factorial);
    for (std::uint64_t n = 0; n <= 500; ++n) {
        CAPTURE(n);
        REQUIRE(gcd(d[n], d[n + 1]) == 1);
        REQUIRE(Int(n + 3) % gcd(d[n], d[n + 2]) == 0);
    }
}

TEST_CASE("partial sum vs convergent equality") {
    CHECK(escf::exact::partial_sum_equals_convergent(1, 1));
    CHECK(escf::exact::partial_sum_equals_convergent(3, 3));
    CHECK_FALSE(escf::exact::partial_sum_equals_convergent(0, 0));
    CHECK_FALSE(escf::exact::partial_sum_equals_convergent(2, 2));
    CHECK_FALSE(escf::exact::partial_sum_equals_convergent(5, 5));
    CHECK_FALSE(escf::exact::partial_sum_equals_convergent(3, 4));
}

TEST_CASE("exhaustive match scan finds exactly the two known pairs") {
    using PairList = std::vector<std::pair<std::uint64_t, std::uint64_t>>;
    PairList expect = {{1, 1}, {3, 3}};
    CHECK(escf::exact::scan_partial_sum_matches(15) == expect);
    SECTION("raising the per-m bound does not change the result") {
        CHECK(escf::exact::scan_partial_sum_matches(15, 60) == expect);
        CHECK(escf::exact::scan_partial_sum_matches(5) == escf::exact::scan_partial_sum_matches(5, 100));
    }
}

TEST_CASE("inequality battery passes on a healthy range") {
    auto rep = escf::exact::check_inequalities(50);
    CHECK(rep.pass);
    CHECK(rep.id == "inequalities");
    CHECK(rep.counterexamples.empty());
    CHECK(rep.stats.at("a_denominators_checked") == "48");
    CHECK(rep.stats.at("b_checked") == "51");
    CHECK(rep.stats.at("c_pairs_checked") == "306");
    CHECK(rep.stats.at("d_checked") == "51");
}

TEST_CASE("factorial-power convergent denominators") {
    auto rep = escf::exact::check_factorial_power_convergents(100);
    CHECK(rep.pass);
    CHECK(rep.stats.at("representations_found") == "2");
    CHECK(rep.stats.at("representations") == "n=4:Q=(2!)^2; n=6:Q=(2!)^5");
}
