#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <escf/exact.hpp>
#include <escf/modular.hpp>
#include <escf/two_adic.hpp>
#include <escf/valuation.hpp>

#include "reference_values.hpp"

using escf::Valuation;
using escf::twoadic::reverse_binary;
using u64 = std::uint64_t;

TEST_CASE("reverse binary rendering") {
    CHECK(reverse_binary(0) == "0");
    CHECK(reverse_binary(1) == "1");
    CHECK(reverse_binary(6) == "011");
    CHECK(reverse_binary(1, 4) == "1000");
    CHECK(reverse_binary(19) == "11001");
    SECTION("round trip") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 1000; ++i) {
            u64 v = rng() >> (i % 40);
            std::string s = reverse_binary(v);
            u64 back = 0;
            for (std::size_t b = s.size(); b-- > 0;) back = back * 2 + (s[b] - '0');
            CAPTURE(v, s);
            REQUIRE(back == v);
        }
    }
}

TEST_CASE("valuation type") {
    auto f = Valuation::finite(5);
    CHECK(f.value() == 5);
    CHECK(f.factor_string() == "32");
    CHECK(f == Valuation::finite(5));
    CHECK_FALSE(f == Valuation::finite(4));

    auto inf = Valuation::infinite();
    CHECK(inf.factor_string() == "-");
    CHECK_THROWS_AS(inf.value(), std::logic_error);

    auto lb = Valuation::at_least(7);
    CHECK(lb.cap() == 7);
    CHECK_THROWS_AS(lb.value(), std::logic_error);

    CHECK(Valuation().value() == 0);  // default: exact valuation 0

    SECTION("comparison predicates respect partial knowledge") {
        CHECK(f.known_le(5));
        CHECK_FALSE(f.known_le(4));
        CHECK_FALSE(inf.known_le(1000));
        CHECK(f.known_gt(4));
        CHECK(lb.known_gt(6));
        CHECK(inf.known_gt(1 << 30));
    }
}

TEST_CASE("two-factor extraction") {
    CHECK(escf::two_factor(escf::exact::Int(48)) == Valuation::finite(4));
    CHECK(escf::two_factor(escf::exact::Int(1)) == Valuation::finite(0));
    CHECK(escf::two_factor(escf::exact::Int(0)) == Valuation::infinite());
    CHECK(escf::two_factor(escf::exact::Int(-12)) == Valuation::finite(2));
    CHECK(escf::p_valuation(escf::exact::Int(54), 3) == 3);
    CHECK(escf::p_valuation(escf::exact::Int(250), 5) == 3);

    SECTION("residue-based factor agrees with exact factor below the cap") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 2000; ++i) {
            u64 v = rng();
            auto capped = escf::two_factor(v, 64);
            auto exact = escf::two_factor(escf::exact::Int(static_cast<unsigned long>(v)));
            CAPTURE(v);
            if (v == 0) {
                REQUIRE_FALSE(capped.known_le(63));
            } else {
                REQUIRE(capped == exact);
            }
        }
    }

    SECTION("multiplicativity") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 2000; ++i) {
            escf::exact::Int a = escf::exact::Int(static_cast<unsigned long>(rng() | 1)) << (rng() % 20);
            escf::exact::Int b = escf::exact::Int(static_cast<unsigned long>(rng() | 1)) << (rng() % 20);
            REQUIRE(escf::two_factor(a * b).value() ==
                    escf::two_factor(a).value() + escf::two_factor(b).value());
        }
    }
}

TEST_CASE("zero scan locates the reference zeros") {
    auto res = escf::twoadic::zero_scan(22);
    CHECK(res.violations.empty());
    CHECK(res.precision_bits == 23);
    REQUIRE(res.traces.size() == 22);
    for (unsigned k = 1; k <= 22; ++k) {
        const auto& t = res.traces[k - 1];
        CAPTURE(k);
        CHECK(t.k == k);
        CHECK(t.c == ref::kC[k - 1]);
        CHECK(t.digits == reverse_binary(ref::kC[k - 1]));
        CHECK(t.a_val.known_gt(k - 1));  // 2^k | A(c_k)
    }
    CHECK_THROWS_AS(escf::twoadic::zero_scan(0), std::invalid_argument);
    CHECK_THROWS_AS(escf::twoadic::zero_scan(31), std::invalid_argument);
}

TEST_CASE("zeros are unique in the fundamental window (independent residue walk)") {
    for (unsigned k = 1; k <= 14; ++k) {
        escf::modular::ModStream s(escf::modular::Seq::A, u64(1) << k);
        u64 zeros = 0, at = 0;
        for (u64 n = 0; n < (u64(1) << k); ++n) {
            if (s.next() == 0) {
                ++zeros;
                at = n;
            }
        }
        CAPTURE(k);
        REQUIRE(zeros == 1);
        REQUIRE(at == ref::kC[k - 1]);
    }
}

TEST_CASE("digit expansion of the zero limit") {
    CHECK(escf::twoadic::digits_of_c(22).digits == ref::kCDigits22);
    auto d26 = escf::twoadic::digits_of_c(26);
    CHECK(d26.digits == ref::kCDigits26);
    CHECK(d26.precision == 26);
    CHECK(d26.constant_id == "c");
    CHECK(escf::twoadic::zero_scan(26).traces.back().c == ref::kC26);
    SECTION("each precision extends the previous one") {
        std::string prev = escf::twoadic::digits_of_c(2).digits;
        for (unsigned K = 3; K <= 20; ++K) {
            std::string cur = escf::twoadic::digits_of_c(K).digits;
            CAPTURE(K);
            REQUIRE(cur.substr(0, K - 1) == prev);
            prev = cur;
        }
    }
}

TEST_CASE("zero positions refine one bit at a time") {
    auto res = escf::twoadic::zero_scan(22);
    for (unsigned k = 1; k < 22; ++k) {
        u64 ck = res.traces[k - 1].c, cnext = res.traces[k].c;
        CAPTURE(k);
        REQUIRE(ck % 2 == 1);
        REQUIRE((cnext == ck || cnext == ck + (u64(1) << k)));
        // the step is decided by A(c_k) mod 2^(k+1)
        escf::modular::ModStream s(escf::modular::Seq::A, u64(1) << (k + 1));
        u64 a = 0;
        for (u64 n = 0; n <= ck; ++n) a = s.next();
        REQUIRE((a == 0) == (cnext == ck));
    }
}

TEST_CASE("update corollary check") {
    auto rep = escf::twoadic::check_update_corollary(22);
    CHECK(rep.pass);
    CHECK(rep.id == "cdigits-update");
    CHECK(rep.stats.at("jumps") == "10");
    CHECK(rep.stats.at("stays") == "11");
}

TEST_CASE("digits of the limit of A at -1") {
    auto d16 = escf::twoadic::digits_of_a_tilde_minus1(16);
    CHECK(d16.digits == ref::kATildeMinus1Digits16);
    CHECK(d16.precision == 16);
    CHECK(d16.constant_id == "A~(-1)");
    auto d22 = escf::twoadic::digits_of_a_tilde_minus1(22);
    CHECK(d22.digits.substr(0, 16) == ref::kATildeMinus1Digits16);
    SECTION("stability across consecutive precisions") {
        std::string prev = escf::twoadic::digits_of_a_tilde_minus1(2).digits;
        for (unsigned K = 3; K <= 20; ++K) {
            std::string cur = escf::twoadic::digits_of_a_tilde_minus1(K).digits;
            CAPTURE(K);
            REQUIRE(cur.substr(0, K - 1) == prev);
            prev = cur;
        }
    }
    CHECK_THROWS_AS(escf::twoadic::digits_of_a_tilde_minus1(1), std::invalid_argument);
}

TEST_CASE("parity lemma: adding 2^k to an odd index shifts A by exactly 2^k") {
    SECTION("exact small cases") {
        std::vector<escf::exact::Int> a;
        escf::exact::TaylorGen g;
        for (u64 n = 0; n <= 48; ++n, g.advance()) a.push_back(g.term().a);
        for (u64 n = 1; n <= 31; n += 2) {
            for (unsigned k = 1; n + (u64(1) << k) <= 48; ++k) {
                escf::exact::Int diff = a[n + (u64(1) << k)] - a[n];
                escf::exact::Int mod = escf::exact::Int(1) << (k + 1);
                CAPTURE(n, k);
                REQUIRE(diff % mod == (escf::exact::Int(1) << k));
            }
        }
    }
    SECTION("scan report") {
        auto rep = escf::twoadic::check_parity_lemma(10000, 20);
        CHECK(rep.pass);
        CHECK(rep.stats.at("pairs_checked") == "100000");
        auto rep4 = escf::twoadic::check_parity_lemma(10000, 20, 4);
        CHECK(rep4.pass);
        CHECK(rep4.stats == rep.stats);
    }
}

TEST_CASE("distance preservation") {
    SECTION("exact bignum form") {
        std::vector<escf::exact::Int> a;
        escf::exact::TaylorGen g;
        for (u64 n = 0; n <= 200; ++n, g.advance()) a.push_back(g.term().a);
        for (u64 m = 0; m < 200; ++m) {
            for (u64 n = m + 1; n <= 200; ++n) {
                // Distances survive except between two even indices, where
                // the valuation genuinely drifts (A(2)-A(0) = 4 vs |2|_2).
                if (m % 2 == 0 && n % 2 == 0) continue;
                escf::exact::Int diff = a[n] - a[m];
                CAPTURE(m, n);
                REQUIRE(mpz_scan1(diff.get_mpz_t(), 0) ==
                        mpz_scan1(escf::exact::Int(n - m).get_mpz_t(), 0));
            }
        }
    }
    SECTION("|A(n)|_2 = |n - c|_2 through the residue window") {
        auto res = escf::twoadic::zero_scan(14);
        u64 c = res.traces.back().c;
        std::vector<escf::exact::Int> a;
        escf::exact::TaylorGen g;
        for (u64 n = 0; n <= 500; ++n, g.advance()) a.push_back(g.term().a);
        for (u64 n = 0; n <= 500; ++n) {
            if (n == c) continue;
            u64 diff = n >= c ? n - c : c - n;
            u64 va = mpz_scan1(a[n].get_mpz_t(), 0);
            CAPTURE(n);
            if (va < 14) REQUIRE(va == static_cast<u64>(std::countr_zero(diff)));
        }
    }
    SECTION("scan report") {
        auto rep = escf::twoadic::check_isometry(10000, 22);
        CHECK(rep.pass);
        auto rep4 = escf::twoadic::check_isometry(10000, 22, 4);
        CHECK(rep4.pass);
        CHECK(rep4.stats == rep.stats);
    }
}

TEST_CASE("zero runs in the digit expansion stay short") {
    auto rep = escf::twoadic::check_zero_runs(22);
    CHECK(rep.pass);
    CHECK(rep.stats.at("longest_run") == "3");
    CHECK(rep.stats.at("longest_run_at") == "12");
    SECTION("direct statement on the 26-digit prefix") {
        const std::string& d = ref::kCDigits26;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] != '0') continue;
            std::size_t len = 0;
            while (j + len < d.size() && d[j + len] == '0') ++len;
            CAPTURE(j, len);
            REQUIRE(len <= j);
        }
    }
}
