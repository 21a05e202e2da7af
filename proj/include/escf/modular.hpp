#pragma once

// Residue streams for the recurrences behind A and the convergent
// denominators Q, period detection, and the conjecture scans that run on
// machine words instead of exact integers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "escf/parallel.hpp"
#include "escf/report.hpp"

namespace escf::modular {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

enum class Seq { A, Q, Q0, Q1, Q2 };

inline std::string seq_name(Seq s) {
    switch (s) {
        case Seq::A: return "A";
        case Seq::Q: return "Q";
        case Seq::Q0: return "Q_0";
        case Seq::Q1: return "Q_1";
        case Seq::Q2: return "Q_2";
    }
    return "?";
}

// b(n) mod M for n >= 2 (the regular regime of the continued fraction).
inline u64 cf_coefficient_mod(u64 n, u64 M) {
    if (n % 3 == 0) return static_cast<u64>((2 * (n / 3)) % M);
    return 1 % M;
}

// Stream of S(n) mod M for one of the supported recurrences. The irregular
// first continued-fraction coefficient b(1) = 2 is baked into the initial
// state, so transitions only ever use the regular b(n), n >= 2.
class ModStream {
  public:
    ModStream(Seq s, u64 M) : ModStream(s, M, 1) {}

    // S(0) = s0, S(n) = n S(n-1) + S(0). Seq::A is the s0 = 1 case.
    static ModStream generalized(u64 M, long long s0) { return ModStream(Seq::A, M, s0); }

    u64 modulus() const { return m_; }
    u64 index() const { return n_; }  // index of the value next() returns

    u64 next() {
        u64 r = cur_;
        step();
        return r;
    }

  private:
    ModStream(Seq s, u64 M, long long s0) : seq_(s), m_(M) {
        if (M < 2) throw std::invalid_argument("ModStream: modulus must be >= 2");
        if (M > (u64(1) << 62)) throw std::invalid_argument("ModStream: modulus too large");
        long long r = s0 % static_cast<long long>(M);
        if (r < 0) r += static_cast<long long>(M);
        s0_ = static_cast<u64>(r);
        switch (seq_) {
            case Seq::A: cur_ = s0_; break;
            case Seq::Q: cur_ = 0; nxt_ = 1 % m_; break;
            case Seq::Q0:
            case Seq::Q1:
            case Seq::Q2: {
                qn_ = 0;
                cur_ = 0;
                nxt_ = 1 % m_;
                unsigned off = seq_ == Seq::Q1 ? 1 : (seq_ == Seq::Q2 ? 2 : 0);
                for (unsigned i = 0; i < off; ++i) q_step();
                break;
            }
        }
    }

    void q_step() {  // (Q(qn_), Q(qn_+1)) -> (Q(qn_+1), Q(qn_+2))
        u64 b = cf_coefficient_mod(qn_ + 2, m_);
        u64 t = static_cast<u64>((u128(b) * nxt_ + cur_) % m_);
        cur_ = nxt_;
        nxt_ = t;
        ++qn_;
    }

    void step() {
        ++n_;
        switch (seq_) {
            case Seq::A:
                cur_ = static_cast<u64>((u128(cur_) * (n_ % m_) + s0_) % m_);
                break;
            case Seq::Q:
                q_step();
                break;
            default:
                q_step();
                q_step();
                q_step();
                break;
        }
    }

    Seq seq_;
    u64 m_;
    u64 s0_ = 1;
    u64 n_ = 0;    // index in the emitted (possibly strided) sequence
    u64 qn_ = 0;   // underlying Q index for the strided kinds
    u64 cur_ = 0;
    u64 nxt_ = 0;
};

struct PeriodResult {
    std::string sequence_id;
    u64 modulus = 0;
    u64 period = 0;
    u64 scanned_bound = 0;  // terms generated while detecting the period
};

namespace detail {

inline std::vector<u64> divisors_ascending(u64 n) {
    std::vector<u64> lo, hi;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        lo.push_back(d);
        if (d != n / d) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

// Minimal cyclic period of arr (arr is one full cycle of a periodic sequence).
inline u64 min_cyclic_period(const std::vector<u64>& arr, u64 stride = 1, u64 offset = 0) {
    u64 full = arr.size() / stride;
    for (u64 t : divisors_ascending(full)) {
        bool ok = true;
        for (u64 x = 0; x < full && ok; ++x)
            ok = arr[(stride * (x + t) + offset) % arr.size()] == arr[stride * x + offset];
        if (ok) return t;
    }
    return full;
}

// One simulation of Q mod M: state-return period plus the pure periods of Q
// and of the three strided subsequences Q_i(n) = Q(3n+i).
struct QPeriods {
    u64 state_return = 0;
    u64 full = 0;
    u64 sub[3] = {0, 0, 0};
};

inline QPeriods detect_q_periods(u64 M) {
    if (M < 2) throw std::invalid_argument("detect_q_periods: modulus must be >= 2");
    const u64 q0 = 0, q1 = 1 % M;
    u64 cur = q0, nxt = q1;
    // 3M^3 + 2 saturated so the guard itself cannot overflow
    const u64 bound = M <= (u64(1) << 20) ? 3 * M * M * M + 2 : ~u64(0);
    u64 n = 0;
    for (;;) {
        // advance to the next multiple of 3M and compare the full state
        for (u64 i = 0; i < 3 * M; ++i) {
            u64 b = cf_coefficient_mod(n + 2, M);
            u64 t = static_cast<u64>((u128(b) * nxt + cur) % M);
            cur = nxt;
            nxt = t;
            ++n;
        }
        if (cur == q0 && nxt == q1) break;
        if (n > bound)
            throw std::runtime_error("detect_q_periods: no state return within 3M^3+2 terms");
        if (n > (u64(1) << 28))
            throw std::runtime_error("detect_q_periods: state-return period too large for desk scale");
    }
    QPeriods r;
    r.state_return = n;
    std::vector<u64> arr(n);
    ModStream qs(Seq::Q, M);
    for (u64 i = 0; i < n; ++i) arr[i] = qs.next();
    r.full = min_cyclic_period(arr);
    for (unsigned i = 0; i < 3; ++i) r.sub[i] = min_cyclic_period(arr, 3, i);
    return r;
}

// State-return detection for S(n) = n S(n-1) + s0; returns the pure period.
// The state (n mod M, S(n)) provably returns at n = M.
inline u64 detect_s_period(u64 M, long long s0) {
    ModStream st = ModStream::generalized(M, s0);
    std::vector<u64> arr(M);
    for (u64 i = 0; i < M; ++i) arr[i] = st.next();
    if (st.next() != arr[0])
        throw std::runtime_error("detect_s_period: state did not return at n = M");
    return min_cyclic_period(arr);
}

}  // namespace detail

// Expected period of Q_i mod 2^k: the closed forms 2^(k-2) (Q_0, k > 3) and
// 2^(k-1) (Q_1/Q_2, k > 2), with the small-k exceptions listed explicitly.
inline u64 power_period_expected(unsigned i, unsigned k) {
    if (i > 2 || k == 0 || k > 62) throw std::invalid_argument("power_period_expected: bad i or k");
    switch (i) {
        case 0:
            if (k == 1) return 2;
            if (k <= 3) return 4;
            return u64(1) << (k - 2);
        case 1:
            if (k == 1) return 2;
            if (k == 2) return 4;
            return u64(1) << (k - 1);
        default:
            if (k == 1) return 1;
            if (k == 2) return 4;
            return u64(1) << (k - 1);
    }
}

// Pure period of (sequence mod M) from n = 0. For A the proven value M is
// asserted; the Q flavors return whatever the simulation finds.
inline PeriodResult period_of(Seq s, u64 M) {
    PeriodResult r;
    r.sequence_id = seq_name(s);
    r.modulus = M;
    switch (s) {
        case Seq::A: {
            r.period = detail::detect_s_period(M, 1);
            r.scanned_bound = M + 1;
            if (r.period != M)
                throw std::logic_error("period_of(A): detected period != M, recurrence bug");
            break;
        }
        case Seq::Q: {
            auto q = detail::detect_q_periods(M);
            r.period = q.full;
            r.scanned_bound = q.state_return;
            break;
        }
        default: {
            auto q = detail::detect_q_periods(M);
            unsigned i = s == Seq::Q1 ? 1 : (s == Seq::Q2 ? 2 : 0);
            r.period = q.sub[i];
            r.scanned_bound = q.state_return;
            break;
        }
    }
    return r;
}

// Period of the generalized recurrence; asserts the closed form
// period = M / gcd(M, S(0)).
inline PeriodResult period_of_generalized(u64 M, long long s0) {
    PeriodResult r;
    r.sequence_id = "S[s0=" + std::to_string(s0) + "]";
    r.modulus = M;
    r.period = detail::detect_s_period(M, s0);
    r.scanned_bound = M + 1;
    long long rm = s0 % static_cast<long long>(M);
    if (rm < 0) rm += static_cast<long long>(M);
    u64 g = std::gcd(M, static_cast<u64>(rm));  // gcd(M, 0) = M, covering s0 = 0 mod M
    if (r.period != M / g)
        throw std::logic_error("period_of_generalized: period != M/gcd(M, S(0))");
    return r;
}

// Period Conjecture scan: for every modulus 2 <= M <= M_max the subsequences
// Q_i mod M have period exactly 2M when M is odd, and period dividing M when
// M is even. Observed even-M periods are tallied, nothing sharper asserted.
inline ScanReport check_period_conjecture(u64 M_max, unsigned workers = 1) {
    ScanReport rep;
    rep.id = "period-conjecture";
    rep.range = "2 <= M <= " + std::to_string(M_max);
    if (M_max < 2) {
        rep.stats["moduli_checked"] = "0";
        return rep;
    }
    const u64 chunk = 64;
    std::size_t n_chunks = static_cast<std::size_t>((M_max - 1 + chunk - 1) / chunk);
    auto parts = map_chunks<ScanReport>(n_chunks, workers, [&](std::size_t ci) {
        ScanReport part;
        u64 lo = 2 + ci * chunk;
        u64 hi = std::min(M_max, lo + chunk - 1);
        u64 odd = 0, even = 0, eq_m = 0, eq_half = 0, other = 0;
        for (u64 M = lo; M <= hi; ++M) {
            auto q = detail::detect_q_periods(M);
            bool pow2 = (M & (M - 1)) == 0;
            unsigned k = pow2 ? static_cast<unsigned>(std::countr_zero(M)) : 0;
            for (unsigned i = 0; i < 3; ++i) {
                if (M % 2) {
                    if (q.sub[i] != 2 * M)
                        part.fail("M=" + std::to_string(M) + " Q_" + std::to_string(i) +
                                  " period " + std::to_string(q.sub[i]) + " != 2M");
                } else {
                    if (M % q.sub[i] != 0)
                        part.fail("M=" + std::to_string(M) + " Q_" + std::to_string(i) +
                                  " period " + std::to_string(q.sub[i]) + " does not divide M");
                    else if (q.sub[i] == M) ++eq_m;
                    else if (2 * q.sub[i] == M) ++eq_half;
                    else ++other;
                    if (pow2 && q.sub[i] != power_period_expected(i, k))
                        part.fail("M=2^" + std::to_string(k) + " Q_" + std::to_string(i) +
                                  " period " + std::to_string(q.sub[i]) +
                                  " != closed form " +
                                  std::to_string(power_period_expected(i, k)));
                }
            }
            (M % 2 ? odd : even) += 1;
        }
        part.stats["odd_moduli"] = std::to_string(odd);
        part.stats["even_moduli"] = std::to_string(even);
        part.stats["even_period_eq_M"] = std::to_string(eq_m);
        part.stats["even_period_eq_M/2"] = std::to_string(eq_half);
        part.stats["even_period_smaller"] = std::to_string(other);
        return part;
    });
    for (const auto& p : parts) rep.absorb(p);
    rep.stats["moduli_checked"] = std::to_string(M_max - 1);
    return rep;
}

// Power-of-two periods alone: Q_i mod 2^k must hit the closed forms for
// every k <= k_max. Much cheaper than a full conjecture sweep to 2^k_max.
inline ScanReport check_power_periods(unsigned k_max) {
    if (k_max < 1 || k_max > 20)
        throw std::invalid_argument("check_power_periods: k_max in [1, 20]");
    ScanReport rep;
    rep.id = "power-periods";
    rep.range = "M = 2^k, k <= " + std::to_string(k_max);
    for (unsigned k = 1; k <= k_max; ++k) {
        auto q = detail::detect_q_periods(u64(1) << k);
        for (unsigned i = 0; i < 3; ++i) {
            u64 expect = power_period_expected(i, k);
            if (q.sub[i] != expect)
                rep.fail("k=" + std::to_string(k) + " Q_" + std::to_string(i) + " period " +
                         std::to_string(q.sub[i]) + " != " + std::to_string(expect));
        }
    }
    rep.stats["levels_checked"] = std::to_string(k_max);
    return rep;
}

// ---- Zeros Conjecture scan (width-64 wraparound arithmetic) --------------
//
// (i)   [Q(3n)]_2   <= 4 [n(n+2)]_2
// (ii)  [Q(3n+1)]_2 <= 2 [n+1]_2
// (iii) [Q(3n+2)]_2 = 1
// (iv)  [A(n)]_2    <= (n+1)^2
//
// Residues are carried mod 2^64; a residue of 0 means valuation >= 64, which
// already exceeds every bound the statements predict at these scales and so
// counts as a counterexample (it would also be a sensation).

namespace detail {

inline unsigned v2_or_64(u64 x) { return x ? static_cast<unsigned>(std::countr_zero(x)) : 64; }

struct ZerosChunk {
    ScanReport part[4];
    u64 eq_count_i = 0, eq_count_ii = 0;
    long double max_slack = -1.0L;  // max of [A(n)]_2 / (n+1)^2
    u64 argmax_n = 0;
    std::vector<u64> eq_i, eq_ii;  // first few equality witnesses
};

}  // namespace detail

inline std::vector<ScanReport> check_zeros_conjecture(u64 n_max, unsigned workers = 1) {
    const u64 chunk = 1 << 15;
    const std::size_t n_chunks = static_cast<std::size_t>(n_max / chunk + 1);

    // serial pass collecting the recurrence states at chunk starts
    struct Boundary {
        u64 a, q, qn;
    };
    std::vector<Boundary> starts(n_chunks);
    {
        u64 a = 1, q = 0, qn = 1, j = 0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            starts[c] = {a, q, qn};
            u64 stop_n = std::min(n_max + 1, (c + 1) * chunk);
            for (u64 n = c * chunk; n < stop_n; ++n) {
                a = a * (n + 1) + 1;  // A(n) -> A(n+1), mod 2^64 by wraparound
                for (int s = 0; s < 3; ++s) {
                    u64 m = j + 2;
                    u64 b = (m % 3 == 0) ? 2 * (m / 3) : 1;
                    u64 t = b * qn + q;
                    q = qn;
                    qn = t;
                    ++j;
                }
            }
        }
    }

    auto chunks = map_chunks<detail::ZerosChunk>(n_chunks, workers, [&](std::size_t c) {
        detail::ZerosChunk out;
        u64 a = starts[c].a, q = starts[c].q, qn = starts[c].qn;
        u64 j = 3 * (c * chunk);
        u64 stop_n = std::min(n_max + 1, (c + 1) * chunk);
        auto q_advance = [&] {
            u64 m = j + 2;
            u64 b = (m % 3 == 0) ? 2 * (m / 3) : 1;
            u64 t = b * qn + q;
            q = qn;
            qn = t;
            ++j;
        };
        for (u64 n = c * chunk; n < stop_n; ++n) {
            // (i) at Q(3n)
            if (n == 0) {
                out.part[0].stats["infinite_cases"] = "1";  // Q(0) = 0 vs [0]_2
            } else {
                unsigned lhs = detail::v2_or_64(q);
                unsigned rhs = 2 + detail::v2_or_64(n) + detail::v2_or_64(n + 2);
                if (lhs > rhs)
                    out.part[0].fail("i: n=" + std::to_string(n) + " [Q(3n)]_2 = 2^" +
                                     std::to_string(lhs) + " > 4[n(n+2)]_2 = 2^" +
                                     std::to_string(rhs));
                else if (lhs == rhs) {
                    ++out.eq_count_i;
                    if (out.eq_i.size() < 8) out.eq_i.push_back(n);
                }
            }
            q_advance();
            // (ii) at Q(3n+1)
            {
                unsigned lhs = detail::v2_or_64(q);
                unsigned rhs = 1 + detail::v2_or_64(n + 1);
                if (lhs > rhs)
                    out.part[1].fail("ii: n=" + std::to_string(n) + " [Q(3n+1)]_2 = 2^" +
                                     std::to_string(lhs) + " > 2[n+1]_2 = 2^" +
                                     std::to_string(rhs));
                else if (lhs == rhs) {
                    ++out.eq_count_ii;
                    if (out.eq_ii.size() < 8) out.eq_ii.push_back(n);
                }
            }
            q_advance();
            // (iii) at Q(3n+2)
            if ((q & 1) == 0)
                out.part[2].fail("iii: n=" + std::to_string(n) + " Q(3n+2) is even");
            q_advance();
            // (iv) at A(n)
            {
                unsigned v = detail::v2_or_64(a);
                u128 squared = u128(n + 1) * (n + 1);
                if (v >= 64 || (u128(1) << v) > squared) {
                    out.part[3].fail("iv: n=" + std::to_string(n) + " [A(n)]_2 = 2^" +
                                     (v >= 64 ? std::string(">=64") : std::to_string(v)) +
                                     " > (n+1)^2");
                } else {
                    long double slack = std::ldexp(1.0L, static_cast<int>(v)) /
                                        ((long double)(n + 1) * (long double)(n + 1));
                    if (slack > out.max_slack) {
                        out.max_slack = slack;
                        out.argmax_n = n;
                    }
                }
                a = a * (n + 1) + 1;
            }
        }
        return out;
    });

    const char* ids[4] = {"zeros-i", "zeros-ii", "zeros-iii", "zeros-iv"};
    std::vector<ScanReport> reps(4);
    long double max_slack = -1.0L;
    u64 argmax = 0, eq_count_i = 0, eq_count_ii = 0;
    std::vector<u64> eq_i, eq_ii;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (int s = 0; s < 4; ++s) reps[s].absorb(chunks[c].part[s]);
        eq_count_i += chunks[c].eq_count_i;
        eq_count_ii += chunks[c].eq_count_ii;
        if (chunks[c].max_slack > max_slack) {
            max_slack = chunks[c].max_slack;
            argmax = chunks[c].argmax_n;
        }
        for (u64 n : chunks[c].eq_i)
            if (eq_i.size() < 8) eq_i.push_back(n);
        for (u64 n : chunks[c].eq_ii)
            if (eq_ii.size() < 8) eq_ii.push_back(n);
    }
    for (int s = 0; s < 4; ++s) {
        reps[s].id = ids[s];
        reps[s].range = "n <= " + std::to_string(n_max);
    }
    reps[0].stats["equality_count"] = std::to_string(eq_count_i);
    reps[1].stats["equality_count"] = std::to_string(eq_count_ii);
    auto join = [](const std::vector<u64>& v) {
        std::string s;
        for (u64 x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
        return s;
    };
    if (!eq_i.empty()) reps[0].stats["first_equalities"] = join(eq_i);
    if (!eq_ii.empty()) reps[1].stats["first_equalities"] = join(eq_ii);
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6Lg", max_slack);
        reps[3].stats["max_slack_ratio"] = buf;
        reps[3].stats["max_slack_n"] = std::to_string(argmax);
    }
    return reps;
}

}  // namespace escf::modular
