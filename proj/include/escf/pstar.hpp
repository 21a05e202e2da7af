#pragma once

// The prime scan: p is a member iff 0! - 1! + 2! - ... + (-1)^(p-1) (p-1)!
// is divisible by p (equivalently p | A(p-1)). Segmented sieve, resumable
// checkpointed scan, the membership-route equivalences, the factorial prime
// criterion, and the Mertens-style 1/p sum estimate.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "escf/exact.hpp"
#include "escf/parallel.hpp"
#include "escf/report.hpp"

namespace escf::pstar {

using u64 = std::uint64_t;

constexpr u64 kSieveMax = 200000000;  // 2e8

struct PrimeRange {
    u64 lo = 0, hi = 0;  // primes in [lo, hi)
    std::vector<u64> primes;
};

inline bool is_prime_u64(u64 m) {
    if (m < 2) return false;
    if (m < 4) return true;
    if (m % 2 == 0 || m % 3 == 0) return false;
    for (u64 d = 5; d * d <= m; d += 6)
        if (m % d == 0 || m % (d + 2) == 0) return false;
    return true;
}

namespace detail {

inline std::vector<u64> base_primes(u64 up_to) {  // simple sieve, inclusive
    std::vector<char> comp(up_to + 1, 0);
    std::vector<u64> out;
    for (u64 i = 2; i <= up_to; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= up_to; j += i) comp[j] = 1;
    }
    return out;
}

template <class Fn>
void sieve_segments(u64 lo, u64 hi, const std::vector<u64>& base, Fn per_prime) {
    constexpr u64 SEG = u64(1) << 22;
    std::vector<char> seg;
    for (u64 s = lo; s < hi; s += SEG) {
        u64 e = std::min(hi, s + SEG);
        seg.assign(e - s, 1);
        for (u64 p : base) {
            if (p * p >= e) break;
            u64 first = std::max(p * p, (s + p - 1) / p * p);
            for (u64 j = first; j < e; j += p) seg[j - s] = 0;
        }
        for (u64 i = s; i < e; ++i)
            if (seg[i - s] && i >= 2) per_prime(i);
    }
}

}  // namespace detail

inline PrimeRange sieve_primes(u64 lo, u64 hi) {
    if (lo < 2 || hi <= lo || hi > kSieveMax + 1)
        throw std::invalid_argument("sieve_primes: need 2 <= lo < hi <= 2e8+1");
    PrimeRange r{lo, hi, {}};
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 2;
    auto base = detail::base_primes(root);
    detail::sieve_segments(lo, hi, base, [&](u64 p) { r.primes.push_back(p); });
    return r;
}

// sum_{r=0}^{m-1} (-1)^r r!  mod m, by incremental factorial residues.
inline u64 alt_factorial_sum_mod(u64 m) {
    if (m < 2) throw std::invalid_argument("alt_factorial_sum_mod: modulus >= 2");
    u64 t = 1 % m;  // r! mod m
    u64 sum = t;    // r = 0 term
    for (u64 r = 1; r < m; ++r) {
        t = t * r % m;
        sum = (r & 1) ? (sum + m - t) % m : (sum + t) % m;
    }
    return sum;
}

// A(n) mod m walked by the recurrence; used as the independent second route.
inline u64 a_mod(u64 n, u64 m) {
    u64 a = 1 % m;
    for (u64 i = 1; i <= n; ++i) a = (a * (i % m) + 1) % m;
    return a;
}

// ---- checkpointing -------------------------------------------------------

class CheckpointError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanCheckpoint {
    u64 bound = 0;  // [2, bound) fully scanned
    std::vector<u64> hits;
};

namespace detail {

inline u64 fnv1a64(std::string_view s) {
    u64 h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string checkpoint_body(const ScanCheckpoint& cp) {
    std::string hits;
    for (u64 p : cp.hits) {
        if (!hits.empty()) hits += ',';
        hits += std::to_string(p);
    }
    return "pstar-checkpoint v1\nbound=" + std::to_string(cp.bound) + "\nhits=" + hits;
}

}  // namespace detail

inline std::string format_checkpoint(const ScanCheckpoint& cp) {
    std::string body = detail::checkpoint_body(cp);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(body)));
    return body + "\ndigest=" + hex + "\n";
}

inline ScanCheckpoint parse_checkpoint(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    if (lines.empty() || lines[0] != "pstar-checkpoint v1")
        throw CheckpointError("checkpoint: unrecognized format/version line");
    if (lines.size() < 4 || lines[1].rfind("bound=", 0) != 0 || lines[2].rfind("hits=", 0) != 0 ||
        lines[3].rfind("digest=", 0) != 0)
        throw CheckpointError("checkpoint: malformed field layout");
    ScanCheckpoint cp;
    cp.bound = std::stoull(lines[1].substr(6));
    std::string hits = lines[2].substr(5);
    std::string num;
    for (char c : hits + ",") {
        if (c == ',') {
            if (!num.empty()) cp.hits.push_back(std::stoull(num));
            num.clear();
        } else if (c >= '0' && c <= '9') {
            num += c;
        } else {
            throw CheckpointError("checkpoint: non-numeric hit entry");
        }
    }
    std::string body = detail::checkpoint_body(cp);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(body)));
    if (lines[3].substr(7) != hex) throw CheckpointError("checkpoint: digest mismatch");
    return cp;
}

// ---- the scan --------------------------------------------------------------

struct PstarHit {
    u64 p;
    u64 residue;  // alternating-sum residue, always 0 for a hit
};

struct PstarScan {
    std::vector<PstarHit> hits;
    ScanCheckpoint checkpoint;  // bound == limit when the scan completed
};

// Scan primes p in [2, limit). Resumes from `resume` (already-scanned prefix
// carried over verbatim); `sink`, when given, receives a checkpoint after
// every contiguously-completed sieve segment. Hit order is deterministic and
// independent of the worker count. seg_size is the checkpoint granularity;
// the default keeps sink traffic low on full-size scans.
inline PstarScan scan_pstar(u64 limit, const std::optional<ScanCheckpoint>& resume = std::nullopt,
                            unsigned workers = 1,
                            const std::function<void(const ScanCheckpoint&)>& sink = {},
                            u64 seg_size = u64(1) << 20) {
    if (limit < 2 || limit > kSieveMax)
        throw std::invalid_argument("scan_pstar: limit in [2, 2e8]");
    if (seg_size < 2) throw std::invalid_argument("scan_pstar: seg_size >= 2");
    u64 start = 2;
    std::vector<PstarHit> carried;
    if (resume) {
        if (resume->bound > limit)
            throw CheckpointError("checkpoint: bound exceeds the requested limit");
        start = std::max<u64>(start, resume->bound);
        for (u64 p : resume->hits) {
            if (p >= resume->bound) throw CheckpointError("checkpoint: hit beyond bound");
            carried.push_back({p, 0});
        }
    }

    const u64 SEG = seg_size;
    std::vector<std::pair<u64, u64>> segs;
    for (u64 s = start; s < limit; s += SEG) segs.emplace_back(s, std::min(limit, s + SEG));

    std::vector<u64> base;
    if (!segs.empty()) {
        u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 2;
        base = detail::base_primes(root);
    }

    std::vector<std::vector<PstarHit>> found(segs.size());
    std::vector<char> done(segs.size(), 0);
    std::size_t frontier = 0;  // segments [0, frontier) merged into `merged`
    std::vector<PstarHit> merged = carried;
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto advance_frontier = [&] {  // caller holds mu
        bool moved = false;
        while (frontier < segs.size() && done[frontier]) {
            for (const auto& h : found[frontier]) merged.push_back(h);
            ++frontier;
            moved = true;
        }
        if (moved && sink) {
            ScanCheckpoint cp;
            cp.bound = frontier == segs.size() ? limit : segs[frontier].first;
            for (const auto& h : merged) cp.hits.push_back(h.p);
            sink(cp);
        }
    };

    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= segs.size()) return;
            std::vector<PstarHit> hits;
            detail::sieve_segments(segs[i].first, segs[i].second, base, [&](u64 p) {
                u64 s = alt_factorial_sum_mod(p);
                if (s == 0) hits.push_back({p, s});
            });
            std::lock_guard<std::mutex> lk(mu);
            found[i] = std::move(hits);
            done[i] = 1;
            advance_frontier();
        }
    };

    if (workers <= 1 || segs.size() <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        unsigned n = std::min<std::size_t>(workers, segs.size());
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }

    PstarScan out;
    out.hits = std::move(merged);
    out.checkpoint.bound = limit;
    for (const auto& h : out.hits) out.checkpoint.hits.push_back(h.p);
    return out;
}

// ---- equivalences and the prime criterion ---------------------------------

// (a) both membership routes (alternating sum, A(p-1) mod p) agree on every
//     prime p < limit;
// (b) the congruence sum_{r<n} (-1)^r r! == A(n-1) (mod n) holds for every
//     n in [2, min(limit, 5000)), composite n included;
// (c) the reduced-term gcd sequence R matches the membership pattern:
//     R(1) = 2, R(p-3) = p for odd members p, R(n) = 1 otherwise, n <= r_cap.
inline ScanReport check_pstar_equivalences(u64 limit, u64 r_cap = 1000, unsigned workers = 1) {
    if (limit < 3) throw std::invalid_argument("check_pstar_equivalences: limit >= 3");
    ScanReport rep;
    rep.id = "pstar-equivalences";
    rep.range = "p < " + std::to_string(limit) + ", n <= " + std::to_string(r_cap);

    auto pr = sieve_primes(2, limit);
    std::vector<u64> members;

    const std::size_t chunk = 256;
    std::size_t n_chunks = (pr.primes.size() + chunk - 1) / chunk;
    struct Part {
        ScanReport rep;
        std::vector<u64> members;
    };
    auto parts = map_chunks<Part>(std::max<std::size_t>(n_chunks, 1), workers, [&](std::size_t ci) {
        Part part;
        std::size_t lo = ci * chunk, hi = std::min(pr.primes.size(), lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) {
            u64 p = pr.primes[i];
            bool via_sum = alt_factorial_sum_mod(p) == 0;
            bool via_a = a_mod(p - 1, p) == 0;
            if (via_sum != via_a)
                part.rep.fail("a: p=" + std::to_string(p) + " membership routes disagree");
            if (via_sum) part.members.push_back(p);
        }
        return part;
    });
    for (auto& p : parts) {
        rep.absorb(p.rep);
        for (u64 m : p.members) members.push_back(m);
    }
    rep.stats["a_primes_checked"] = std::to_string(pr.primes.size());
    {
        std::string ms;
        for (u64 m : members) ms += (ms.empty() ? "" : ",") + std::to_string(m);
        rep.stats["members"] = ms;
    }

    u64 b_hi = std::min<u64>(limit, 5000);
    for (u64 n = 2; n < b_hi; ++n) {
        if (alt_factorial_sum_mod(n) != a_mod(n - 1, n))
            rep.fail("b: n=" + std::to_string(n) + " congruence fails");
    }
    rep.stats["b_checked"] = std::to_string(b_hi > 2 ? b_hi - 2 : 0);

    u64 r_hi = std::min(r_cap, limit >= 3 ? limit - 3 : 0);
    exact::ReducedGen rg;
    for (u64 n = 0; n <= r_hi; ++n, rg.advance()) {
        auto t = rg.term();
        mpz_class expected = 1;
        if (n == 1) expected = 2;
        else {
            u64 q = n + 3;
            if (q % 2 == 1 && std::binary_search(members.begin(), members.end(), q))
                expected = static_cast<unsigned long>(q);
        }
        if (t.r != expected)
            rep.fail("c: n=" + std::to_string(n) + " R(n) = " + t.r.get_str() + " expected " +
                     expected.get_str());
    }
    rep.stats["c_checked"] = std::to_string(r_hi + 1);
    return rep;
}

// For every 4 < m <= limit: m is prime iff m does not divide (m-3)!.
inline ScanReport check_prime_criterion(u64 limit) {
    ScanReport rep;
    rep.id = "prime-criterion";
    rep.range = "4 < m <= " + std::to_string(limit);
    u64 checked = 0;
    for (u64 m = 5; m <= limit; ++m) {
        u64 f = 1 % m;
        for (u64 r = 2; r <= m - 3; ++r) f = f * r % m;
        bool divides = f == 0;
        if (divides == is_prime_u64(m))
            rep.fail("m=" + std::to_string(m) + ": factorial divisibility disagrees with primality");
        ++checked;
    }
    rep.stats["checked"] = std::to_string(checked);
    return rep;
}

// ---- Mertens-style sum ------------------------------------------------------

struct MertensResult {
    u64 x = 0;
    long double sum = 0;        // sum of 1/p over p <= x
    long double predicted = 0;  // log log x + 0.2614972128
    long double gap = 0;
    long double tail_from_463 = 0;  // sum over 463 < p <= x
};

inline MertensResult mertens_estimate(u64 x) {
    if (x < 3) throw std::invalid_argument("mertens_estimate: x >= 3");
    auto pr = sieve_primes(2, x + 1);
    MertensResult r;
    r.x = x;
    long double sum = 0, tail = 0;
    for (std::size_t i = pr.primes.size(); i-- > 0;) {  // smallest terms first
        long double term = 1.0L / static_cast<long double>(pr.primes[i]);
        sum += term;
        if (pr.primes[i] > 463) tail += term;
    }
    r.sum = sum;
    r.tail_from_463 = tail;
    r.predicted = std::log(std::log(static_cast<long double>(x))) + 0.2614972128L;
    r.gap = std::fabs(r.sum - r.predicted);
    return r;
}

}  // namespace escf::pstar
