#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace escf {

// p-adic valuation result. Three shapes:
//   finite(v)   - exact valuation v
//   infinite()  - valuation of 0
//   at_least(c) - residue was 0 under a 2^c working modulus, so the true
//                 valuation is >= c but unknown (cap marker)
class Valuation {
  public:
    Valuation() = default;  // finite 0
    static Valuation finite(std::uint64_t v) { return Valuation(Kind::Finite, v); }
    static Valuation infinite() { return Valuation(Kind::Infinite, 0); }
    static Valuation at_least(std::uint64_t cap) { return Valuation(Kind::AtLeast, cap); }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }
    bool is_capped() const { return kind_ == Kind::AtLeast; }

    std::uint64_t value() const {
        if (!is_finite()) throw std::logic_error("Valuation: no finite value");
        return v_;
    }
    std::uint64_t cap() const {
        if (!is_capped()) throw std::logic_error("Valuation: not a cap marker");
        return v_;
    }

    // Certified comparisons against a finite bound. "unknown" is only possible
    // for a cap marker whose cap does not decide the question.
    bool known_le(std::uint64_t bound) const { return is_finite() && v_ <= bound; }
    bool known_gt(std::uint64_t bound) const {
        return (is_finite() && v_ > bound) || is_infinite() || (is_capped() && v_ > bound);
    }

    bool operator==(const Valuation& o) const = default;

    // Rendering used by the table grids: the p-factor itself ("32"), "-" for
    // the valuation of 0, ">=2^c" when capped.
    std::string factor_string() const {
        switch (kind_) {
            case Kind::Infinite: return "-";
            case Kind::AtLeast: return ">=2^" + std::to_string(v_);
            default: break;
        }
        mpz_class f = mpz_class(1) << static_cast<unsigned long>(v_);
        return f.get_str();
    }

  private:
    enum class Kind { Finite, Infinite, AtLeast };
    Valuation(Kind k, std::uint64_t v) : kind_(k), v_(v) {}
    Kind kind_ = Kind::Finite;
    std::uint64_t v_ = 0;
};

// 2-factor of a residue known modulo 2^cap_bits.
inline Valuation two_factor(std::uint64_t residue, unsigned cap_bits) {
    if (cap_bits == 0 || cap_bits > 64) throw std::invalid_argument("two_factor: cap_bits in [1,64]");
    if (cap_bits < 64) residue &= (cap_bits == 64) ? ~0ull : ((1ull << cap_bits) - 1);
    if (residue == 0) return Valuation::at_least(cap_bits);
    return Valuation::finite(static_cast<std::uint64_t>(std::countr_zero(residue)));
}

// Exact 2-factor of an integer.
inline Valuation two_factor(const mpz_class& x) {
    if (x == 0) return Valuation::infinite();
    return Valuation::finite(mpz_scan1(x.get_mpz_t(), 0));
}

// Exact p-adic valuation of a nonzero integer.
inline std::uint64_t p_valuation(const mpz_class& x, unsigned long p) {
    if (x == 0) throw std::invalid_argument("p_valuation: x must be nonzero");
    if (p < 2) throw std::invalid_argument("p_valuation: p must be >= 2");
    mpz_class a = abs(x), q, r;
    std::uint64_t v = 0;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p);
        if (r != 0) return v;
        a = q;
        ++v;
    }
}

}  // namespace escf
