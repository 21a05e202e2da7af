#pragma once

// Exact integer sequences around e: Taylor partial-sum numerators
// A(n) = n! * (1/0! + 1/1! + ... + 1/n!), simple-continued-fraction
// convergents P(n)/Q(n) of e, and the reduced forms N(n) = A(n)/gcd(A(n), n!)
// with the consecutive-gcd sequence R(n) = gcd(N(n), N(n+2)).

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "escf/polynomial.hpp"
#include "escf/report.hpp"

namespace escf::exact {

using Int = mpz_class;

inline Int factorial(std::uint64_t n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

// --- Taylor side: A(0) = 1, A(n+1) = (n+1) A(n) + 1 ---------------------

struct TaylorTerm {
    std::uint64_t n;
    Int a;          // A(n)
    Int factorial;  // n!
};

class TaylorGen {
  public:
    const TaylorTerm& term() const { return t_; }
    void advance() {
        ++t_.n;
        t_.a = t_.a * t_.n + 1;
        t_.factorial *= t_.n;
    }

  private:
    TaylorTerm t_{0, 1, 1};
};

inline Int taylor_numerator(std::uint64_t n) {
    TaylorGen g;
    while (g.term().n < n) g.advance();
    return g.term().a;
}

// --- Continued-fraction side: e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...] ------

// b(1) = 2; for n >= 2, b(n) = 2n/3 if 3 | n, else 1.
inline Int cf_coefficient(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("cf_coefficient: n must be >= 1");
    if (n == 1) return 2;
    if (n % 3 == 0) return Int(2) * static_cast<unsigned long>(n / 3);
    return 1;
}

struct ConvergentTerm {
    std::uint64_t n;
    Int p, q;
    Int b;  // b(n); 0 at n = 0 where no coefficient exists
};

class ConvergentGen {
  public:
    const ConvergentTerm& term() const { return t_; }
    void advance() {
        if (t_.n == 0) {
            prev_p_ = t_.p;
            prev_q_ = t_.q;
            t_ = {1, 2, 1, 2};
            return;
        }
        ++t_.n;
        t_.b = cf_coefficient(t_.n);
        Int p = t_.b * t_.p + prev_p_;
        Int q = t_.b * t_.q + prev_q_;
        prev_p_ = std::move(t_.p);
        prev_q_ = std::move(t_.q);
        t_.p = std::move(p);
        t_.q = std::move(q);
    }

  private:
    ConvergentTerm t_{0, 1, 0, 0};
    Int prev_p_{0}, prev_q_{0};
};

inline std::pair<Int, Int> convergent(std::uint64_t n) {
    ConvergentGen g;
    while (g.term().n < n) g.advance();
    return {g.term().p, g.term().q};
}

// --- Reduced terms: d(n) = gcd(A(n), n!), N(n) = A(n)/d(n) --------------

struct ReducedTerm {
    std::uint64_t n;
    Int d;
    Int numerator;  // N(n)
    Int r;          // R(n) = gcd(N(n), N(n+2))
};

class ReducedGen {
  public:
    ReducedGen() {
        for (auto& s : win_) {
            s.d = gcd(tg_.term().a, tg_.term().factorial);
            s.num = tg_.term().a / s.d;
            tg_.advance();
        }
    }
    ReducedTerm term() const {
        return {n_, win_[0].d, win_[0].num, gcd(win_[0].num, win_[2].num)};
    }
    void advance() {
        ++n_;
        win_[0] = std::move(win_[1]);
        win_[1] = std::move(win_[2]);
        win_[2].d = gcd(tg_.term().a, tg_.term().factorial);
        win_[2].num = tg_.term().a / win_[2].d;
        tg_.advance();
    }

  private:
    struct Slot {
        Int d, num;
    };
    std::uint64_t n_ = 0;
    std::array<Slot, 3> win_;
    TaylorGen tg_;  // positioned at n_ + 3
};

inline ReducedTerm reduced_terms(std::uint64_t n) {
    ReducedGen g;
    while (g.term().n < n) g.advance();
    return g.term();
}

// --- Factorial divisibility helpers --------------------------------------

// Smallest positive m with q | m!.  S(q) <= q, so the incremental
// factorial-mod-q walk terminates.
inline std::uint64_t smallest_factorial_multiple(const Int& q) {
    if (q < 1) throw std::invalid_argument("smallest_factorial_multiple: q must be >= 1");
    if (q == 1) return 1;
    Int fm = 1;
    std::uint64_t m = 0;
    while (fm != 0) {
        ++m;
        fm = fm * static_cast<unsigned long>(m) % q;
    }
    return m;
}

// If q = (j!)^k with j >= 2, k >= 1, returns the representation with k
// maximal (equivalently the smallest j). q >= 2 required.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> is_factorial_power(const Int& q) {
    if (q < 2) throw std::invalid_argument("is_factorial_power: q must be >= 2");
    Int f = 1;
    for (std::uint64_t j = 2;; ++j) {
        f *= static_cast<unsigned long>(j);
        if (f > q) return std::nullopt;
        Int t = f;
        std::uint64_t k = 1;
        while (t < q) {
            t *= f;
            ++k;
        }
        if (t == q) return std::make_pair(j, k);
    }
}

// --- gcd-bounding polynomials --------------------------------------------
// F(1) = 1, F(j) = (x + j) F(j-1) + 1;  G(0) = 1, G(j) = F(1)...F(j) * G(j-1).

inline IntPolynomial poly_F(std::uint64_t j) {
    if (j == 0) throw std::invalid_argument("poly_F: j must be >= 1");
    IntPolynomial f = IntPolynomial::constant(1);
    for (std::uint64_t t = 2; t <= j; ++t) {
        f.mul_linear(static_cast<long>(t));
        f += 1;
    }
    return f;
}

inline IntPolynomial poly_G(std::uint64_t j) {
    IntPolynomial g = IntPolynomial::constant(1);
    IntPolynomial prefix = IntPolynomial::constant(1);  // F(1)...F(t)
    IntPolynomial f = IntPolynomial::constant(1);       // F(t)
    for (std::uint64_t t = 1; t <= j; ++t) {
        if (t >= 2) {
            f.mul_linear(static_cast<long>(t));
            f += 1;
        }
        prefix = prefix * f;
        g = prefix * g;
    }
    return g;
}

// --- Partial sum vs convergent -------------------------------------------

// A(m)/m! == P(n)/Q(n), compared by cross-multiplication.
inline bool partial_sum_equals_convergent(std::uint64_t m, std::uint64_t n) {
    TaylorGen tg;
    while (tg.term().n < m) tg.advance();
    ConvergentGen cg;
    while (cg.term().n < n) cg.advance();
    return tg.term().a * cg.term().q == tg.term().factorial * cg.term().p;
}

// Exhaustive match scan. For each m <= m_max the convergent index runs over
// [0, max(3m, 2)]; Q(n) <= m! forces n < 3m, and n in {1, 2} covers the
// Q = 1 denominators. n_cap can only raise the per-m bound (the result is
// invariant under raising it).
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> scan_partial_sum_matches(
    std::uint64_t m_max, std::optional<std::uint64_t> n_cap = std::nullopt) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> matches;
    TaylorGen tg;
    for (std::uint64_t m = 0; m <= m_max; ++m) {
        std::uint64_t bound = std::max<std::uint64_t>(3 * m, 2);
        if (n_cap && *n_cap > bound) bound = *n_cap;
        ConvergentGen cg;
        for (std::uint64_t n = 0; n <= bound; ++n) {
            if (tg.term().a * cg.term().q == tg.term().factorial * cg.term().p)
                matches.emplace_back(m, n);
            cg.advance();
        }
        tg.advance();
    }
    return matches;
}

// --- Inequality battery ---------------------------------------------------
// (a) Q(n)^2 < (S(Q(n)) + 1)! for convergent denominators Q(n) > 1.
//     Decided without computing S(q) in full: with m0 = min{m : (m+1)! > q^2},
//     either q | m! appears at some m <= m0 (then S = m exactly) or S > m0 and
//     (S+1)! >= (m0+2)! > q^2 certifies the inequality.
// (b) d(n) d(n+1) d(n+2) <= (n+3)!.
// (c) gcd(d(i), d(i+j)) | F(j)(i)  and  d(i)...d(i+j) <= (i+j)! G(j)(i).
// (d) 2-factor of m! is >= 2^m/(m+1), i.e. 2^popcount(m) <= m + 1.
inline ScanReport check_inequalities(std::uint64_t n_max, std::uint64_t j_max = 6) {
    ScanReport rep;
    rep.id = "inequalities";
    rep.range = "n <= " + std::to_string(n_max) + ", j <= " + std::to_string(j_max);

    // (a)
    std::uint64_t a_checked = 0, a_exact_s = 0;
    {
        ConvergentGen cg;
        for (std::uint64_t n = 0; n <= n_max; ++n, cg.advance()) {
            const Int& q = cg.term().q;
            if (q <= 1) continue;
            ++a_checked;
            Int q2 = q * q;
            Int fm = 1 % q;     // m! mod q
            Int fnext = 1;      // (m+1)!
            for (std::uint64_t m = 1;; ++m) {
                fm = fm * static_cast<unsigned long>(m) % q;
                fnext *= static_cast<unsigned long>(m + 1);
                if (fm == 0) {
                    ++a_exact_s;
                    if (q2 >= fnext) {
                        std::ostringstream o;
                        o << "a: n=" << n << " Q=" << q.get_str() << " S=" << m
                          << " Q^2 >= (S+1)!";
                        rep.fail(o.str());
                    }
                    break;
                }
                if (fnext > q2) break;  // S > m, so (S+1)! > (m+1)! > q^2
            }
        }
    }
    rep.stats["a_denominators_checked"] = std::to_string(a_checked);
    rep.stats["a_exact_S_found"] = std::to_string(a_exact_s);

    // shared d / factorial prefix for (b), (c)
    std::uint64_t hi = n_max + std::max<std::uint64_t>(j_max, 3);
    std::vector<Int> d(hi + 1), fact(hi + 1);
    {
        TaylorGen tg;
        for (std::uint64_t n = 0; n <= hi; ++n, tg.advance()) {
            fact[n] = tg.term().factorial;
            d[n] = gcd(tg.term().a, tg.term().factorial);
        }
    }

    // (b)
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        if (d[n] * d[n + 1] * d[n + 2] > fact[n + 3]) {
            rep.fail("b: n=" + std::to_string(n) + " d(n)d(n+1)d(n+2) > (n+3)!");
        }
    }
    rep.stats["b_checked"] = std::to_string(n_max + 1);

    // (c)
    std::vector<IntPolynomial> F(j_max + 1), G(j_max + 1);
    for (std::uint64_t j = 1; j <= j_max; ++j) F[j] = poly_F(j);
    for (std::uint64_t j = 1; j <= j_max; ++j) G[j] = poly_G(j);
    std::uint64_t c_checked = 0;
    for (std::uint64_t i = 0; i <= n_max; ++i) {
        Int prod = d[i];
        for (std::uint64_t j = 1; j <= j_max; ++j) {
            prod *= d[i + j];
            Int g = gcd(d[i], d[i + j]);
            if (F[j].eval(static_cast<long>(i)) % g != 0)
                rep.fail("c: gcd(d(" + std::to_string(i) + "),d(" + std::to_string(i + j) +
                         ")) does not divide F_" + std::to_string(j) + "(i)");
            if (prod > fact[i + j] * G[j].eval(static_cast<long>(i)))
                rep.fail("c: d-product at i=" + std::to_string(i) + " j=" + std::to_string(j) +
                         " exceeds (i+j)! G_j(i)");
            ++c_checked;
        }
    }
    rep.stats["c_pairs_checked"] = std::to_string(c_checked);

    // (d)
    for (std::uint64_t m = 0; m <= n_max; ++m) {
        unsigned pc = static_cast<unsigned>(__builtin_popcountll(m));
        if ((Int(1) << pc) > Int(static_cast<unsigned long>(m)) + 1)
            rep.fail("d: m=" + std::to_string(m) + " 2-factor of m! below 2^m/(m+1)");
    }
    rep.stats["d_checked"] = std::to_string(n_max + 1);
    return rep;
}

// Scan convergent denominators for factorial powers Q(n) = (j!)^k and assert
// j/k stays below e (hard-coded bracket 2.718281828459 < e < 2.718281828460).
inline ScanReport check_factorial_power_convergents(std::uint64_t n_max) {
    ScanReport rep;
    rep.id = "factorial-power-convergents";
    rep.range = "n <= " + std::to_string(n_max);
    std::string found;
    std::uint64_t reps = 0;
    ConvergentGen cg;
    for (std::uint64_t n = 0; n <= n_max; ++n, cg.advance()) {
        const Int& q = cg.term().q;
        if (q < 2) continue;
        auto fp = is_factorial_power(q);
        if (!fp) continue;
        auto [j, k] = *fp;
        ++reps;
        if (!found.empty()) found += "; ";
        found += "n=" + std::to_string(n) + ":Q=(" + std::to_string(j) + "!)^" + std::to_string(k);
        Int lhs = Int(static_cast<unsigned long>(j)) * Int("1000000000000");
        Int lo = Int(static_cast<unsigned long>(k)) * Int("2718281828459");
        Int hi = Int(static_cast<unsigned long>(k)) * Int("2718281828460");
        if (lhs >= hi)
            rep.fail("n=" + std::to_string(n) + " factorial power (j=" + std::to_string(j) +
                     ", k=" + std::to_string(k) + ") has j/k >= e");
        else if (lhs > lo)
            rep.fail("n=" + std::to_string(n) + " j/k lands inside the e bracket (widen it)");
    }
    rep.stats["representations_found"] = std::to_string(reps);
    if (!found.empty()) rep.stats["representations"] = found;
    return rep;
}

}  // namespace escf::exact
