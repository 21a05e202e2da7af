#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace escf {

// Dense integer polynomial, coefficients lowest-degree first.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPolynomial constant(const mpz_class& v) { return IntPolynomial({v}); }

    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpz_class>& coeffs() const { return c_; }

    mpz_class eval(const mpz_class& x) const {
        mpz_class r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    IntPolynomial& operator+=(const mpz_class& v) {
        if (c_.empty()) c_.push_back(v);
        else c_[0] += v;
        trim();
        return *this;
    }

    // multiply by (x + a)
    IntPolynomial& mul_linear(const mpz_class& a) {
        if (c_.empty()) return *this;
        c_.push_back(0);
        for (std::size_t i = c_.size(); i-- > 1;) c_[i] = c_[i - 1] + a * c_[i];
        c_[0] *= a;
        trim();
        return *this;
    }

    IntPolynomial operator*(const IntPolynomial& o) const {
        if (c_.empty() || o.c_.empty()) return IntPolynomial{};
        std::vector<mpz_class> r(c_.size() + o.c_.size() - 1, mpz_class(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return IntPolynomial(std::move(r));
    }

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

    std::string str() const {  // human form, highest degree first
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const mpz_class& a = c_[i];
            if (a == 0) continue;
            if (!s.empty()) s += a < 0 ? " - " : " + ";
            else if (a < 0) s += "-";
            mpz_class m = abs(a);
            if (i == 0 || m != 1) s += m.get_str();
            if (i > 0) {
                s += "x";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<mpz_class> c_;
};

}  // namespace escf
