#pragma once

#include <string>
#include <utility>
#include <vector>

#include "synd/numeric.hpp"

namespace synd {

/// Univariate polynomial with exact rational coefficients; coeffs[i] multiplies x^i.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

    static Poly constant(const Rational& v) { return Poly({v}); }
    static Poly x_minus(const Rational& r) { return Poly({-r, Rational(1)}); }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    const std::vector<Rational>& coeffs() const noexcept { return c_; }
    const Rational& lead() const { return c_.back(); }

    Rational operator()(const Rational& x) const {
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1)
            return Poly();
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d[i - 1] = c_[i] * static_cast<long>(i);
        return Poly(std::move(d));
    }

    Poly monic() const {
        if (is_zero())
            return *this;
        std::vector<Rational> d = c_;
        const Rational l = lead();
        for (auto& v : d)
            v /= l;
        return Poly(std::move(d));
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                out[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(out));
    }

    Poly operator-() const {
        std::vector<Rational> d = c_;
        for (auto& v : d)
            v = -v;
        return Poly(std::move(d));
    }

    /// (quotient, remainder) for b != 0.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        std::vector<Rational> rem = a.c_;
        if (a.degree() < b.degree())
            return {Poly(), a};
        std::vector<Rational> quot(a.c_.size() - b.c_.size() + 1);
        for (std::size_t i = quot.size(); i-- > 0;) {
            const Rational coef = rem[i + b.c_.size() - 1] / b.lead();
            quot[i] = coef;
            if (coef == 0)
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                rem[i + j] -= coef * b.c_[j];
        }
        rem.resize(b.c_.size() - 1);
        return {Poly(std::move(quot)), Poly(std::move(rem))};
    }

    friend bool operator==(const Poly&, const Poly&) = default;

    std::string str() const {
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (!out.empty())
                out += ' ';
            out += c_[i].str();
        }
        return out.empty() ? "0" : out;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Monic gcd (zero if both are zero).
inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

inline Poly squarefree(const Poly& p) {
    if (p.degree() <= 0)
        return p;
    Poly g = gcd(p, p.derivative());
    return divmod(p, g).first.monic();
}

/// det(x I - A), by Faddeev-LeVerrier in exact rationals.
inline Poly characteristic_polynomial(const IntMatrix& a) {
    const std::size_t n = a.rows();
    Matrix<Rational> A = a.cast<Rational>();
    std::vector<Rational> coeff(n + 1);
    coeff[n] = 1;
    Matrix<Rational> m(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<Rational> next = A * m;
        for (std::size_t i = 0; i < n; ++i)
            next(i, i) += coeff[n - k + 1];
        m = std::move(next);
        Matrix<Rational> am = A * m;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += am(i, i);
        coeff[n - k] = -tr / static_cast<long>(k);
    }
    return Poly(std::move(coeff));
}

/// Sturm chain of a squarefree polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, p.derivative()};
    while (!chain.back().is_zero()) {
        Poly r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero())
            break;
        chain.push_back(-r);
    }
    return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int variations = 0;
    int last = 0;
    for (const Poly& q : chain) {
        const Rational v = q(x);
        const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++variations;
        last = s;
    }
    return variations;
}

/// Distinct real roots of p in the closed interval [lo, hi].
inline int count_roots(const Poly& p, const Rational& lo, const Rational& hi) {
    if (p.degree() <= 0 || hi < lo)
        return 0;
    const Poly sq = squarefree(p);
    const auto chain = sturm_chain(sq);
    int n = sign_variations(chain, lo) - sign_variations(chain, hi);
    if (sq(lo) == 0)
        ++n;
    return n;
}

}  // namespace synd
