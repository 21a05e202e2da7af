#pragma once

// 2-adic structure of A: the unique zero c_k of (A mod 2^k), the digit
// stream of the 2-adic number c they converge to, the limit value
// A~(-1) = lim A(2^K - 1), and the parity / isometry / zero-run checks.

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "escf/parallel.hpp"
#include "escf/report.hpp"
#include "escf/valuation.hpp"

namespace escf::twoadic {

using u64 = std::uint64_t;

// LSB-first binary digits, padded with trailing zeros to min_digits.
inline std::string reverse_binary(u64 v, unsigned min_digits = 0) {
    std::string s;
    while (v) {
        s += char('0' + (v & 1));
        v >>= 1;
    }
    if (s.empty()) s = "0";
    while (s.size() < min_digits) s += '0';
    return s;
}

struct ZeroTrace {
    unsigned k;
    u64 c;              // unique n in [0, 2^k) with 2^k | A(n)
    Valuation a_val;    // valuation of A(c), capped at the scan precision
    std::string digits; // reverse-binary digits of c (natural length)
};

struct ZeroScanResult {
    std::vector<ZeroTrace> traces;        // k = 1..K
    std::vector<std::string> violations;  // uniqueness / existence failures
    unsigned precision_bits;              // residues were carried mod 2^precision_bits
};

// One pass of A(n) mod 2^(K+1) over n in [0, 2^K): locates c_k for every
// k <= K and counts the zeros of (A mod 2^k) inside [0, 2^k) (must be 1).
inline ZeroScanResult zero_scan(unsigned K) {
    if (K < 1 || K > 30) throw std::invalid_argument("zero_scan: K in [1,30]");
    const unsigned W = K + 1;
    const u64 mask = (u64(1) << W) - 1;
    const u64 NONE = ~u64(0);
    std::vector<u64> c(K + 1, NONE);
    std::vector<unsigned> val_at(K + 1, 0);
    std::vector<u64> zeros_in_window(K + 1, 0);
    u64 a = 1;  // A(0)
    const u64 n_end = u64(1) << K;
    for (u64 n = 0; n < n_end; ++n) {
        unsigned v = a ? static_cast<unsigned>(std::countr_zero(a)) : W;
        unsigned kmax = v < K ? v : K;
        for (unsigned k = 1; k <= kmax; ++k) {
            if (c[k] == NONE) {
                c[k] = n;
                val_at[k] = v;
            }
            if (n < (u64(1) << k)) ++zeros_in_window[k];
        }
        a = (a * (n + 1) + 1) & mask;
    }
    ZeroScanResult res;
    res.precision_bits = W;
    for (unsigned k = 1; k <= K; ++k) {
        if (c[k] == NONE) {
            res.violations.push_back("k=" + std::to_string(k) +
                                     ": no zero of A mod 2^k found in [0, 2^K)");
            continue;
        }
        if (zeros_in_window[k] != 1)
            res.violations.push_back("k=" + std::to_string(k) + ": " +
                                     std::to_string(zeros_in_window[k]) +
                                     " zeros of A mod 2^k in [0, 2^k), expected exactly 1");
        ZeroTrace t;
        t.k = k;
        t.c = c[k];
        t.a_val = val_at[k] >= W ? Valuation::at_least(W) : Valuation::finite(val_at[k]);
        t.digits = reverse_binary(c[k]);
        res.traces.push_back(t);
    }
    return res;
}

struct DigitStream {
    std::string constant_id;
    unsigned precision;  // number of stable digits carried
    std::string digits;  // LSB-first
};

// First K digits of the 2-adic limit c of the c_k tower.
inline DigitStream digits_of_c(unsigned K) {
    auto scan = zero_scan(K);
    if (!scan.violations.empty())
        throw std::runtime_error("digits_of_c: zero_scan reported violations");
    return {"c", K, reverse_binary(scan.traces.back().c, K)};
}

// A~(-1) = lim A(2^K - 1) in Z_2: value of A(2^K - 1) mod 2^K, with a
// built-in stability cross-check against precision K-1.
inline DigitStream digits_of_a_tilde_minus1(unsigned K) {
    if (K < 2 || K > 30) throw std::invalid_argument("digits_of_a_tilde_minus1: K in [2,30]");
    const u64 mask = (u64(1) << K) - 1;
    u64 a = 1, at_half = 0;
    const u64 half_n = (u64(1) << (K - 1)) - 1, n_end = (u64(1) << K) - 1;
    for (u64 n = 0; n < n_end; ++n) {
        if (n == half_n) at_half = a & ((u64(1) << (K - 1)) - 1);  // A(2^(K-1)-1) mod 2^(K-1)
        a = (a * (n + 1) + 1) & mask;
    }
    // n_end was never reached by the capture above; a now holds A(2^K - 1)
    if ((a & ((u64(1) << (K - 1)) - 1)) != at_half)
        throw std::logic_error("digits_of_a_tilde_minus1: digits not stable across precisions");
    return {"A~(-1)", K, reverse_binary(a, K)};
}

// c_{k+1} - c_k is 0 or 2^k, and which one is decided by whether
// 2^(k+1) | A(c_k).
inline ScanReport check_update_corollary(unsigned K) {
    ScanReport rep;
    rep.id = "cdigits-update";
    rep.range = "k < " + std::to_string(K);
    auto scan = zero_scan(K);
    for (const auto& v : scan.violations) rep.fail(v);
    u64 stays = 0, jumps = 0;
    for (unsigned k = 1; k < K; ++k) {
        const auto& cur = scan.traces[k - 1];
        const auto& nxt = scan.traces[k];
        bool divisible = cur.a_val.known_gt(k);  // valuation >= k+1
        u64 expected = divisible ? cur.c : cur.c + (u64(1) << k);
        if (nxt.c != expected)
            rep.fail("k=" + std::to_string(k) + ": c_{k+1}=" + std::to_string(nxt.c) +
                     " but divisibility of A(c_k) predicts " + std::to_string(expected));
        if (nxt.c == cur.c) ++stays;
        else if (nxt.c == cur.c + (u64(1) << k)) ++jumps;
        else rep.fail("k=" + std::to_string(k) + ": c_{k+1} - c_k is neither 0 nor 2^k");
    }
    rep.stats["stays"] = std::to_string(stays);
    rep.stats["jumps"] = std::to_string(jumps);
    return rep;
}

// For odd n, A(n) and A(n + 2^k) differ mod 2^(k+1).
inline ScanReport check_parity_lemma(u64 n_max, unsigned k_max, unsigned workers = 1) {
    if (k_max < 1 || k_max > 22) throw std::invalid_argument("check_parity_lemma: k_max in [1,22]");
    const u64 window = n_max + (u64(1) << k_max);
    if (window > (u64(1) << 23))
        throw std::invalid_argument("check_parity_lemma: n_max + 2^k_max above 2^23");
    const u64 mask = (u64(1) << (k_max + 1)) - 1;
    std::vector<std::uint32_t> res(window + 1);
    u64 a = 1;
    for (u64 n = 0; n <= window; ++n) {
        res[n] = static_cast<std::uint32_t>(a);
        a = (a * (n + 1) + 1) & mask;
    }
    const u64 chunk = 1 << 12;
    std::size_t n_chunks = static_cast<std::size_t>(n_max / chunk + 1);
    auto parts = map_chunks<ScanReport>(n_chunks, workers, [&](std::size_t ci) {
        ScanReport part;
        u64 checked = 0;
        u64 stop = std::min(n_max + 1, (ci + 1) * chunk);
        for (u64 n = ci * chunk | 1; n < stop; n += 2) {
            for (unsigned k = 1; k <= k_max; ++k) {
                std::uint32_t diff = (res[n] ^ res[n + (u64(1) << k)]) &
                                     static_cast<std::uint32_t>((u64(1) << (k + 1)) - 1);
                if (diff == 0)
                    part.fail("n=" + std::to_string(n) + " k=" + std::to_string(k) +
                              ": A(n) == A(n+2^k) mod 2^(k+1)");
                ++checked;
            }
        }
        part.stats["pairs_checked"] = std::to_string(checked);
        return part;
    });
    ScanReport rep;
    rep.id = "parity-lemma";
    rep.range = "odd n <= " + std::to_string(n_max) + ", k <= " + std::to_string(k_max);
    for (const auto& p : parts) rep.absorb(p);
    return rep;
}

// The map n -> A(n) is a 2-adic isometry around c:
//   (a) |A(n)|_2 = |n - c|_2
//   (b) |A(n) - A(m)|_2 = |n - m|_2 for m, n not both even
// verified at precision K (valuations >= K count as precision events, not
// failures).
inline ScanReport check_isometry(u64 n_max, unsigned K, unsigned workers = 1) {
    if (K < 2 || K > 30) throw std::invalid_argument("check_isometry: K in [2,30]");
    if (n_max > (u64(1) << 23)) throw std::invalid_argument("check_isometry: n_max above 2^23");
    auto scan = zero_scan(K);
    if (!scan.violations.empty()) throw std::runtime_error("check_isometry: zero_scan violations");
    const u64 c = scan.traces.back().c;
    const u64 mask = K == 64 ? ~u64(0) : (u64(1) << K) - 1;
    std::vector<u64> res(n_max + 1);
    {
        u64 a = 1;
        for (u64 n = 0; n <= n_max; ++n) {
            res[n] = a & mask;
            a = a * (n + 1) + 1;
        }
    }
    auto val_or_K = [&](u64 x) { return x ? static_cast<unsigned>(std::countr_zero(x)) : K; };

    const u64 chunk = 1 << 13;
    std::size_t n_chunks = static_cast<std::size_t>(n_max / chunk + 1);
    auto parts = map_chunks<ScanReport>(n_chunks, workers, [&](std::size_t ci) {
        ScanReport part;
        u64 checked = 0, precision = 0;
        u64 stop = std::min(n_max + 1, (ci + 1) * chunk);
        for (u64 n = ci * chunk; n < stop; ++n) {
            u64 diff = n > c ? n - c : c - n;
            if (diff == 0 || static_cast<unsigned>(std::countr_zero(diff)) >= K) {
                ++precision;
                continue;
            }
            unsigned vn = static_cast<unsigned>(std::countr_zero(diff));
            unsigned va = val_or_K(res[n]);
            if (va != vn)
                part.fail("a: n=" + std::to_string(n) + " |A(n)|_2 = 2^-" + std::to_string(va) +
                          " but |n-c|_2 = 2^-" + std::to_string(vn));
            ++checked;
        }
        part.stats["a_checked"] = std::to_string(checked);
        part.stats["a_precision_events"] = std::to_string(precision);
        return part;
    });
    ScanReport rep;
    rep.id = "isometry";
    rep.range = "n <= " + std::to_string(n_max) + ", precision 2^" + std::to_string(K);
    for (const auto& p : parts) rep.absorb(p);

    // (b): exhaustive small block plus a fixed-seed sample
    u64 b_checked = 0, b_precision = 0;
    auto check_pair = [&](u64 m, u64 n) {
        if (m == n) return;
        if ((m % 2 == 0) && (n % 2 == 0)) return;
        u64 diff_idx = n > m ? n - m : m - n;
        unsigned vn = static_cast<unsigned>(std::countr_zero(diff_idx));
        if (vn >= K) {
            ++b_precision;
            return;
        }
        u64 diff_res = (res[n] - res[m]) & mask;
        unsigned va = val_or_K(diff_res);
        if (va != vn)
            rep.fail("b: (m,n)=(" + std::to_string(m) + "," + std::to_string(n) +
                     ") |A(n)-A(m)|_2 = 2^-" + std::to_string(va) + " but |n-m|_2 = 2^-" +
                     std::to_string(vn));
        ++b_checked;
    };
    u64 small = std::min<u64>(n_max, 96);
    for (u64 m = 0; m <= small; ++m)
        for (u64 n = m + 1; n <= small; ++n) check_pair(m, n);
    std::mt19937_64 rng(0xE5CF);
    std::uniform_int_distribution<u64> dist(0, n_max);
    for (int i = 0; i < 4096; ++i) check_pair(dist(rng), dist(rng));
    rep.stats["b_checked"] = std::to_string(b_checked);
    rep.stats["b_precision_events"] = std::to_string(b_precision);
    return rep;
}

// No maximal run of zeros in the digits of c is longer than the number of
// digits preceding it; equivalently |c - c_k|_2 >= 2^(-2k).
inline ScanReport check_zero_runs(unsigned K) {
    ScanReport rep;
    rep.id = "cdigits-zero-runs";
    rep.range = "first " + std::to_string(K) + " digits of c";
    auto ds = digits_of_c(K);
    const std::string& d = ds.digits;
    if (d[0] != '1') rep.fail("digit 0 of c is not 1 (c_k must be odd)");
    unsigned longest = 0, longest_at = 0;
    for (unsigned j = 0; j < K;) {
        if (d[j] == '1') {
            ++j;
            continue;
        }
        unsigned len = 0;
        while (j + len < K && d[j + len] == '0') ++len;
        if (len > longest) {
            longest = len;
            longest_at = j;
        }
        if (len > j)
            rep.fail("zero run of length " + std::to_string(len) + " at digit " +
                     std::to_string(j) + " exceeds its position");
        j += len;
    }
    // cutoff form: the first 1-digit at position >= k sits at position <= 2k
    for (unsigned k = 1; 2 * k + 1 <= K; ++k) {
        unsigned idx = k;
        while (idx < K && d[idx] == '0') ++idx;
        if (idx > 2 * k)
            rep.fail("k=" + std::to_string(k) + ": |c - c_k|_2 < 2^(-2k)");
    }
    rep.stats["longest_run"] = std::to_string(longest);
    rep.stats["longest_run_at"] = std::to_string(longest_at);
    return rep;
}

}  // namespace escf::twoadic
