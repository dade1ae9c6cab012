#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "synd/growth.hpp"

namespace synd {

inline constexpr std::size_t kDefaultKMax = 24;

enum class IndependenceStatus {
    IndependentCase1,
    IndependentCase2,
    IndependentCase3,
    Dependent,
    NotIndependent,  // none of the three conditions; no dependence witness applies
    Unknown,
};

constexpr const char* to_string(IndependenceStatus s) noexcept {
    switch (s) {
        case IndependenceStatus::IndependentCase1: return "IndependentCase1";
        case IndependenceStatus::IndependentCase2: return "IndependentCase2";
        case IndependenceStatus::IndependentCase3: return "IndependentCase3";
        case IndependenceStatus::Dependent: return "Dependent";
        case IndependenceStatus::NotIndependent: return "NotIndependent";
        case IndependenceStatus::Unknown: return "Unknown";
    }
    return "?";
}

struct IndependenceVerdict {
    IndependenceStatus status = IndependenceStatus::Unknown;
    std::uint64_t k = 0, l = 0;        // Dependent: alpha^k = beta^l, (k, l) primitive
    std::optional<std::size_t> bound;  // independence established only for k, l <= bound
    bool exact = false;                // decided by exact integer arithmetic
    std::string reason;

    // Growth-type classification details.
    bool dense = false;                 // one of the three density conditions holds
    bool equal_growth_types = false;
    bool outside_theorem_scope = false;  // both rates equal to 1
    bool polynomial_exponential = false;  // condition (3) with exactly one rate equal to 1
    bool strict_paper = false;

    bool independent() const noexcept {
        return status == IndependenceStatus::IndependentCase1 ||
               status == IndependenceStatus::IndependentCase2 ||
               status == IndependenceStatus::IndependentCase3;
    }
};

namespace detail {

inline BigInt ipow(const BigInt& b, std::uint64_t e) {
    BigInt r = 1, x = b;
    for (; e; e >>= 1) {
        if (e & 1)
            r *= x;
        if (e > 1)
            x *= x;
    }
    return r;
}

/// floor(n^(1/k)) for n >= 0, k >= 1.
inline BigInt iroot(const BigInt& n, std::uint64_t k) {
    if (n < 2 || k == 1)
        return n;
    const std::size_t bits = boost::multiprecision::msb(n) + 1;
    BigInt lo = 1, hi = BigInt(1) << (bits / k + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (ipow(mid, k) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

/// n = r^x with x maximal, for n >= 2.
inline std::pair<BigInt, std::uint64_t> perfect_power_root(const BigInt& n) {
    const std::size_t bits = boost::multiprecision::msb(n) + 1;
    for (std::uint64_t x = bits; x >= 2; --x) {
        BigInt r = iroot(n, x);
        if (r >= 2 && ipow(r, x) == n)
            return {r, x};
    }
    return {n, 1};
}

}  // namespace detail

/// Does alpha^k = beta^l hold for some k, l >= 1? Integers are decided exactly (two integers
/// >= 2 are dependent iff they are powers of the same primitive root); otherwise the powers are
/// compared for 1 <= k, l <= k_max with certified comparisons. Rate 1 follows the literal
/// definition: 1 is dependent only on 1.
inline IndependenceVerdict multiplicatively_independent(const AlgebraicRate& alpha, const AlgebraicRate& beta,
                                                        std::size_t k_max = kDefaultKMax) {
    if (alpha.is_zero() || beta.is_zero())
        throw Error(ErrorCode::InvalidArgument, "multiplicative independence needs non-zero rates");
    IndependenceVerdict v;
    auto dependent = [&](std::uint64_t k, std::uint64_t l) {
        const std::uint64_t g = std::gcd(k, l);
        v.status = IndependenceStatus::Dependent;
        v.k = k / g;
        v.l = l / g;
    };
    auto independent = [&] { v.status = IndependenceStatus::IndependentCase1; };

    if (alpha.is_one() || beta.is_one()) {
        v.exact = true;
        if (alpha.is_one() && beta.is_one())
            dependent(1, 1);
        else
            independent();
        return v;
    }

    const auto ia = alpha.exact_integer();
    const auto ib = beta.exact_integer();
    if (ia && ib) {
        v.exact = true;
        const auto [ra, xa] = detail::perfect_power_root(*ia);
        const auto [rb, xb] = detail::perfect_power_root(*ib);
        if (ra == rb)
            dependent(xb, xa);
        else
            independent();
        return v;
    }

    std::vector<AlgebraicRate> pa, pb;
    for (std::size_t k = 1; k <= k_max; ++k) {
        pa.push_back(alpha.pow(k));
        pb.push_back(beta.pow(k));
    }
    for (std::size_t k = 1; k <= k_max; ++k)
        for (std::size_t l = 1; l <= k_max; ++l) {
            const AlgebraicRate& x = pa[k - 1];
            const AlgebraicRate& y = pb[l - 1];
            if (x.upper() < y.lower() || y.upper() < x.lower())
                continue;
            try {
                if (compare(x, y) == 0) {
                    dependent(k, l);
                    return v;
                }
            } catch (const Error& e) {
                if (e.code() != ErrorCode::UnresolvedComparison)
                    throw;
                v.status = IndependenceStatus::Unknown;
                v.reason = "alpha^" + std::to_string(k) + " and beta^" + std::to_string(l) +
                           " overlap without a certificate";
                return v;
            }
        }
    independent();
    v.bound = k_max;
    return v;
}

struct ClassifyOptions {
    std::size_t k_max = kDefaultKMax;
    bool strict_paper = false;  // literal definitions: 1 is independent of every beta > 1
};

/// Classifies (d, alpha) vs (e, beta) by the density conditions on
/// {alpha^n n^d / (beta^m m^e)}:
///   (1) alpha, beta > 1 multiplicatively independent;
///   (2) alpha, beta > 1 and d != e;
///   (3) beta = 1, e >= 1 and (alpha > 1 or d >= 1), or symmetrically.
/// With strict_paper, (1) and (3) are read literally (no "> 1" guards).
inline IndependenceVerdict independent_growth_types(const GrowthType& g1, const GrowthType& g2,
                                                    ClassifyOptions opt = {}) {
    const std::size_t d = g1.degree, e = g2.degree;
    const AlgebraicRate& alpha = g1.rate;
    const AlgebraicRate& beta = g2.rate;
    IndependenceVerdict v;
    v.strict_paper = opt.strict_paper;
    if (alpha.is_zero() || beta.is_zero()) {
        v.status = IndependenceStatus::NotIndependent;
        v.reason = "zero growth rate";
        return v;
    }
    try {
        v.equal_growth_types = d == e && rates_equal(alpha, beta);
    } catch (const Error& err) {
        throw Error(ErrorCode::RateUnresolved, err.what());
    }
    v.outside_theorem_scope = alpha.is_one() && beta.is_one();

    const bool a1 = alpha.is_root(), b1 = beta.is_root();
    const IndependenceVerdict mult = multiplicatively_independent(alpha, beta, opt.k_max);

    const bool c1 = (opt.strict_paper || (a1 && b1)) && mult.status == IndependenceStatus::IndependentCase1;
    const bool c2 = a1 && b1 && d != e;
    const bool c3 = opt.strict_paper
                        ? (beta.is_one() && e != 0) || (alpha.is_one() && d != 0)
                        : (beta.is_one() && e >= 1 && (a1 || d >= 1)) || (alpha.is_one() && d >= 1 && (b1 || e >= 1));

    v.exact = mult.exact;
    if (c1) {
        v.status = IndependenceStatus::IndependentCase1;
        v.bound = mult.bound;
    } else if (c2) {
        v.status = IndependenceStatus::IndependentCase2;
    } else if (c3) {
        v.status = IndependenceStatus::IndependentCase3;
        v.polynomial_exponential = alpha.is_one() != beta.is_one();
    } else if (mult.status == IndependenceStatus::Dependent) {
        v.status = IndependenceStatus::Dependent;
        v.k = mult.k;
        v.l = mult.l;
    } else if (mult.status == IndependenceStatus::Unknown) {
        v.status = IndependenceStatus::Unknown;
        v.reason = mult.reason;
    } else {
        v.status = IndependenceStatus::NotIndependent;
        v.reason = "no density condition holds";
    }
    v.dense = c1 || c2 || c3;
    if (v.equal_growth_types && v.independent()) {
        v.status = IndependenceStatus::NotIndependent;
        v.reason = "equal growth types";
    }
    if (v.outside_theorem_scope && v.reason.empty())
        v.reason = "both growth types polynomial";
    return v;
}

/// Independence of two substitutions through their growth types. The analyses refer to the
/// regularized powers sigma^p; degrees, the "> 1" tests and multiplicative (in)dependence are
/// invariant under taking powers, and a dependence witness is lifted back to the originals.
inline IndependenceVerdict substitutions_independent(const GrowthAnalysis& a1, const GrowthAnalysis& a2,
                                                     ClassifyOptions opt = {}) {
    IndependenceVerdict v = independent_growth_types(a1.growth_type(), a2.growth_type(), opt);
    if (v.status == IndependenceStatus::Dependent) {
        const std::uint64_t k = v.k * a1.p, l = v.l * a2.p;
        const std::uint64_t g = std::gcd(k, l);
        v.k = k / g;
        v.l = l / g;
    }
    return v;
}

}  // namespace synd
