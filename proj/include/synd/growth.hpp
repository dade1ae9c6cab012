#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "synd/automata.hpp"
#include "synd/graph.hpp"
#include "synd/polynomial.hpp"
#include "synd/substitution.hpp"

namespace synd {

inline constexpr unsigned kDefaultPrecisionBits = 128;
inline constexpr unsigned kComparisonBudgetBits = 256;

/// Precision from SYND_PRECISION_BITS when set, else the default.
inline unsigned precision_bits_from_env(unsigned fallback = kDefaultPrecisionBits) {
    if (const char* env = std::getenv("SYND_PRECISION_BITS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 16 && v <= 4096)
            return static_cast<unsigned>(v);
    }
    return fallback;
}

namespace detail {

inline Rational dyadic_floor(const Rational& q, unsigned bits) {
    BigInt scale = BigInt(1) << bits;
    BigInt num = boost::multiprecision::numerator(q) * scale;
    BigInt den = boost::multiprecision::denominator(q);
    BigInt f = num / den;
    if (num < 0 && f * den != num)
        f -= 1;
    return Rational(f, scale);
}

inline Rational dyadic_ceil(const Rational& q, unsigned bits) {
    Rational f = dyadic_floor(q, bits);
    if (f == q)
        return f;
    return f + Rational(BigInt(1), BigInt(1) << bits);
}

/// Collatz-Wielandt enclosure of the Perron root of an irreducible non-negative block:
/// min_i (Bv)_i / v_i <= rho <= max_i (Bv)_i / v_i for any positive v. v is iterated under
/// B + I (primitive) and kept to a bounded bit size; the enclosure is exact, not rounded inward.
inline std::pair<Rational, Rational> perron_enclosure(const IntMatrix& b, unsigned bits,
                                                      std::size_t max_iterations = 20000) {
    const std::size_t n = b.rows();
    if (n == 1)
        return {Rational(b(0, 0)), Rational(b(0, 0))};
    std::vector<BigInt> v(n, BigInt(1));
    const Rational target(BigInt(1), BigInt(1) << bits);
    Rational lo, hi;
    const unsigned keep_bits = bits + 64;
    for (std::size_t it = 0;; ++it) {
        std::vector<BigInt> bv = b.apply(v);
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
            Rational r(bv[i], v[i]);
            if (first || r < lo)
                lo = r;
            if (first || r > hi)
                hi = r;
            first = false;
        }
        if (hi - lo <= target || it >= max_iterations)
            break;
        for (std::size_t i = 0; i < n; ++i)
            v[i] += bv[i];
        std::size_t top = 0;
        for (const BigInt& x : v)
            top = std::max<std::size_t>(top, boost::multiprecision::msb(x) + 1);
        if (top > keep_bits) {
            const unsigned shift = static_cast<unsigned>(top - keep_bits);
            for (BigInt& x : v) {
                x >>= shift;
                if (x == 0)
                    x = 1;
            }
        }
    }
    return {dyadic_floor(lo, bits + 16), dyadic_ceil(hi, bits + 16)};
}

}  // namespace detail

/// Growth rate of a communicating class: 0, 1, or the Perron root of an irreducible block
/// (> 1), enclosed in a certified rational interval and carrying its exact characteristic
/// polynomial.
class AlgebraicRate {
public:
    enum class Kind { Zero, One, Root };

    static AlgebraicRate zero() { return AlgebraicRate(Kind::Zero); }
    static AlgebraicRate one() { return AlgebraicRate(Kind::One); }

    /// Perron root of an irreducible block whose root exceeds 1.
    static AlgebraicRate root(IntMatrix block, unsigned bits = kDefaultPrecisionBits) {
        AlgebraicRate r(Kind::Root);
        r.charpoly_ = characteristic_polynomial(block);
        r.block_ = std::move(block);
        r.refine_to(bits);
        return r;
    }

    /// Exact integer rate k >= 0.
    static AlgebraicRate integer(const BigInt& k) {
        if (k == 0)
            return zero();
        if (k == 1)
            return one();
        IntMatrix b(1, 1);
        b(0, 0) = k;
        return root(std::move(b));
    }

    Kind kind() const noexcept { return kind_; }
    bool is_zero() const noexcept { return kind_ == Kind::Zero; }
    bool is_one() const noexcept { return kind_ == Kind::One; }
    bool is_root() const noexcept { return kind_ == Kind::Root; }

    const IntMatrix& block() const noexcept { return block_; }
    const Poly& charpoly() const noexcept { return charpoly_; }
    unsigned bits() const noexcept { return bits_; }

    Rational lower() const {
        if (kind_ == Kind::Root)
            return lo_;
        return kind_ == Kind::One ? Rational(1) : Rational(0);
    }
    Rational upper() const {
        if (kind_ == Kind::Root)
            return hi_;
        return kind_ == Kind::One ? Rational(1) : Rational(0);
    }
    Real approx() const { return to_real((lower() + upper()) / 2); }
    Real error() const { return to_real((upper() - lower()) / 2); }
    double to_double() const { return static_cast<double>(approx()); }

    /// Same rate with the enclosure shrunk to width <= 2^-bits (if reachable).
    AlgebraicRate refined(unsigned bits) const {
        AlgebraicRate r = *this;
        if (kind_ == Kind::Root && bits > bits_)
            r.refine_to(bits);
        return r;
    }

    /// The unique root of the squarefree characteristic polynomial inside the enclosure.
    bool isolated() const {
        return kind_ != Kind::Root || count_roots(charpoly_, lo_, hi_) == 1;
    }

    /// Integer value when the rate is provably an integer.
    std::optional<BigInt> exact_integer() const {
        if (kind_ == Kind::Zero)
            return BigInt(0);
        if (kind_ == Kind::One)
            return BigInt(1);
        AlgebraicRate r = *this;
        if (r.hi_ - r.lo_ >= 1)
            r = r.refined(64);
        BigInt f = boost::multiprecision::numerator(r.lo_) / boost::multiprecision::denominator(r.lo_);
        for (BigInt k = f; Rational(k) <= r.hi_; ++k)
            if (Rational(k) >= r.lo_ && r.charpoly_(Rational(k)) == 0 && r.isolated())
                return k;
        return std::nullopt;
    }

    /// rate^k, as the Perron root of block^k.
    AlgebraicRate pow(std::uint64_t k) const {
        if (kind_ != Kind::Root || k == 1)
            return *this;
        if (k == 0)
            return one();
        return root(block_.pow(k), bits_);
    }

private:
    explicit AlgebraicRate(Kind k) : kind_(k) {}

    void refine_to(unsigned bits) {
        bits_ = bits;
        std::tie(lo_, hi_) = detail::perron_enclosure(block_, bits);
    }

    Kind kind_ = Kind::Zero;
    IntMatrix block_;
    Poly charpoly_;
    Rational lo_, hi_;
    unsigned bits_ = 0;
};

/// Certified comparison of two rates. Enclosures are refined up to `budget_bits`; overlapping
/// isolated enclosures are decided exactly through the gcd of the characteristic polynomials.
/// Throws UnresolvedComparison when the budget is exhausted.
inline std::strong_ordering compare(const AlgebraicRate& a, const AlgebraicRate& b,
                                    unsigned budget_bits = kComparisonBudgetBits) {
    using K = AlgebraicRate::Kind;
    auto rank = [](K k) { return k == K::Zero ? 0 : (k == K::One ? 1 : 2); };
    if (rank(a.kind()) != rank(b.kind()))
        return rank(a.kind()) <=> rank(b.kind());
    if (!a.is_root())
        return std::strong_ordering::equal;

    AlgebraicRate x = a, y = b;
    unsigned bits = std::max({x.bits(), y.bits(), 32u});
    for (;;) {
        x = x.refined(bits);
        y = y.refined(bits);
        if (x.upper() < y.lower())
            return std::strong_ordering::less;
        if (y.upper() < x.lower())
            return std::strong_ordering::greater;
        if (x.isolated() && y.isolated()) {
            const Rational lo = std::max(x.lower(), y.lower());
            const Rational hi = std::min(x.upper(), y.upper());
            const Poly g = gcd(squarefree(x.charpoly()), squarefree(y.charpoly()));
            if (g.degree() >= 1 && count_roots(g, lo, hi) >= 1)
                return std::strong_ordering::equal;
        }
        if (bits >= budget_bits)
            throw Error(ErrorCode::UnresolvedComparison,
                        "rates " + to_decimal(x.approx()) + " and " + to_decimal(y.approx()) +
                            " not separated at " + std::to_string(bits) + " bits");
        bits = std::min(bits * 2, budget_bits);
    }
}

inline bool rates_equal(const AlgebraicRate& a, const AlgebraicRate& b) {
    return compare(a, b) == std::strong_ordering::equal;
}

/// (d, alpha): |sigma^n(a)| ~ c n^d alpha^n. Ordered by rate, then degree.
struct GrowthType {
    std::size_t degree = 0;
    AlgebraicRate rate = AlgebraicRate::zero();

    friend std::strong_ordering operator<=>(const GrowthType& g, const GrowthType& h) {
        if (auto c = compare(g.rate, h.rate); c != 0)
            return c;
        return g.degree <=> h.degree;
    }
    friend bool operator==(const GrowthType& g, const GrowthType& h) {
        return (g <=> h) == std::strong_ordering::equal;
    }

    bool polynomial() const { return rate.is_one(); }
};

inline std::string format_rate(const AlgebraicRate& r) {
    if (r.is_zero())
        return "0";
    if (r.is_one())
        return "1";
    if (auto k = r.exact_integer())
        return k->str();
    return to_decimal(r.approx(), 15);
}

inline std::string format(const GrowthType& g) {
    return "(" + std::to_string(g.degree) + ", " + format_rate(g.rate) + ")";
}

/// Letter graph of sigma with the positional labels of the path-counting automaton:
/// delta(a, i) = i-th letter of sigma(a).
struct GrowthGraph {
    Digraph edges;                       // a -> b with multiplicity |sigma(a)|_b
    std::vector<std::vector<Letter>> labeled;  // labeled[a][i-1] = delta(a, i)

    /// Number of length-n paths from a, i.e. |sigma^n(a)|.
    BigInt path_count(Letter a, std::size_t n) const {
        std::vector<BigInt> cur(edges.size(), BigInt(1));
        for (std::size_t step = 0; step < n; ++step) {
            std::vector<BigInt> nxt(edges.size(), BigInt(0));
            for (std::size_t v = 0; v < edges.size(); ++v)
                for (std::uint32_t w : edges[v])
                    nxt[v] += cur[w];
            cur = std::move(nxt);
        }
        return cur.at(a);
    }
};

inline GrowthGraph growth_automaton(const Substitution& sigma) {
    GrowthGraph g;
    g.edges = sigma.letter_graph();
    g.labeled = sigma.images();
    return g;
}

/// lcm of the periods of the non-zero communicating classes.
inline std::uint64_t regularization_power(const Substitution& sigma) {
    const Digraph g = sigma.letter_graph();
    const Sccs s = strongly_connected_components(g);
    std::uint64_t p = 1;
    for (std::uint32_t c = 0; c < s.count(); ++c)
        if (internal_edges(g, s, c) > 0)
            p = std::lcm(p, component_period(g, s, c));
    return p;
}

namespace detail {

struct ClassAnalysis {
    Sccs sccs;
    std::vector<AlgebraicRate> class_rate;
    std::vector<std::optional<std::size_t>> letter_rank;  // nullopt: mortal / zero growth
    std::vector<std::size_t> letter_degree;
    std::vector<AlgebraicRate> distinct;                  // ascending, Zero excluded
};

/// Rates per class and the condensation DP: for each vertex, the maximal class rate reachable
/// and the maximal number of classes of that rate along one path.
/// `m(i, j)` counts edges j -> i.
inline ClassAnalysis analyze_classes(const IntMatrix& m, unsigned bits) {
    const std::size_t n = m.rows();
    Digraph g(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (m(i, j) != 0)
                g[j].push_back(static_cast<std::uint32_t>(i));
    ClassAnalysis out;
    out.sccs = strongly_connected_components(g);
    const auto dag = condensation(g, out.sccs);
    const std::size_t nc = out.sccs.count();

    for (std::uint32_t c = 0; c < nc; ++c) {
        const auto& mem = out.sccs.members[c];
        IntMatrix block(mem.size(), mem.size());
        BigInt internal = 0;
        for (std::size_t i = 0; i < mem.size(); ++i)
            for (std::size_t j = 0; j < mem.size(); ++j) {
                block(i, j) = m(mem[i], mem[j]);
                internal += block(i, j);
            }
        if (internal == 0)
            out.class_rate.push_back(AlgebraicRate::zero());
        else if (internal == BigInt(mem.size()))
            out.class_rate.push_back(AlgebraicRate::one());  // a simple cycle
        else
            out.class_rate.push_back(AlgebraicRate::root(std::move(block), bits));
    }

    std::vector<std::optional<std::size_t>> rank(nc);
    for (std::uint32_t c = 0; c < nc; ++c) {
        const AlgebraicRate& r = out.class_rate[c];
        if (r.is_zero())
            continue;
        std::size_t pos = 0;
        bool found = false;
        for (; pos < out.distinct.size(); ++pos) {
            auto cmp = compare(r, out.distinct[pos]);
            if (cmp == 0) {
                found = true;
                break;
            }
            if (cmp < 0)
                break;
        }
        if (!found) {
            out.distinct.insert(out.distinct.begin() + static_cast<std::ptrdiff_t>(pos), r);
            for (auto& k : rank)
                if (k && *k >= pos)
                    ++*k;
        }
        rank[c] = pos;
    }

    std::vector<std::optional<std::size_t>> best_rank(nc);
    std::vector<std::size_t> best_count(nc, 0);
    for (std::uint32_t c = 0; c < nc; ++c) {  // successors have smaller ids
        std::optional<std::size_t> r;
        std::size_t cnt = 0;
        for (std::uint32_t d : dag[c]) {
            if (!best_rank[d])
                continue;
            if (!r || *best_rank[d] > *r) {
                r = best_rank[d];
                cnt = best_count[d];
            } else if (*best_rank[d] == *r) {
                cnt = std::max(cnt, best_count[d]);
            }
        }
        if (rank[c]) {
            if (!r || *rank[c] > *r) {
                r = rank[c];
                cnt = 1;
            } else if (*rank[c] == *r) {
                cnt += 1;
            }
        }
        best_rank[c] = r;
        best_count[c] = cnt;
    }
    out.letter_rank.resize(n);
    out.letter_degree.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const std::uint32_t c = out.sccs.component[v];
        out.letter_rank[v] = best_rank[c];
        if (best_rank[c])
            out.letter_degree[v] = best_count[c] - 1;
    }
    return out;
}

}  // namespace detail

struct Coefficient {
    Real value = 0;
    Real error = 0;
};

struct GrowthOptions {
    unsigned bits = kDefaultPrecisionBits;
    std::size_t coefficient_horizon = 30;  // n at which c(a) is extrapolated
};

/// Growth analysis of sigma^p, p the regularization power (every class block of sigma^p is
/// primitive or zero). Rates refer to sigma^p.
struct GrowthAnalysis {
    Substitution sigma;       // the input substitution
    std::uint64_t p = 1;
    IntMatrix matrix;         // incidence matrix of sigma^p
    std::vector<bool> mortal;
    std::vector<GrowthType> letters;  // mortal letters carry (0, Zero)
    std::vector<Coefficient> c;
    std::size_t D = 0;
    AlgebraicRate Theta = AlgebraicRate::zero();
    std::vector<Letter> A_max;
    std::size_t horizon = 30;

    GrowthType growth_type() const { return {D, Theta}; }
    bool in_A_max(Letter a) const { return std::find(A_max.begin(), A_max.end(), a) != A_max.end(); }

    /// |sigma^{p n}(a)| for every letter, exactly, via integer matrix-vector products.
    std::vector<BigInt> lengths(std::size_t n) const {
        std::vector<BigInt> row(matrix.rows(), BigInt(1));  // 1^T M^n
        for (std::size_t step = 0; step < n; ++step) {
            std::vector<BigInt> nxt(row.size(), BigInt(0));
            for (std::size_t j = 0; j < row.size(); ++j)
                for (std::size_t i = 0; i < row.size(); ++i)
                    if (matrix(i, j) != 0)
                        nxt[j] += row[i] * matrix(i, j);
            row = std::move(nxt);
        }
        return row;
    }
};

namespace detail {

inline Real growth_scale(std::size_t n, std::size_t d, const Real& rate) {
    using boost::multiprecision::pow;
    return pow(Real(n), static_cast<int>(d)) * pow(rate, static_cast<int>(n));
}

inline Real aitken(const Real& r0, const Real& r1, const Real& r2) {
    const Real denom = r2 - 2 * r1 + r0;
    if (abs(denom) < Real(1e-60))
        return r2;
    return r2 - (r2 - r1) * (r2 - r1) / denom;
}

}  // namespace detail

inline GrowthAnalysis letter_growth(const Substitution& sigma, GrowthOptions opt = {}) {
    GrowthAnalysis out;
    out.sigma = sigma;
    out.p = regularization_power(sigma);
    out.matrix = sigma.matrix().pow(out.p);
    out.horizon = std::max<std::size_t>(opt.coefficient_horizon, 4);
    const std::size_t n = sigma.size();
    const auto cls = detail::analyze_classes(out.matrix, opt.bits);

    out.mortal.assign(n, false);
    out.letters.resize(n);
    std::optional<std::size_t> top;
    for (Letter a = 0; a < n; ++a) {
        const auto& r = cls.letter_rank[a];
        if (!r) {
            out.mortal[a] = true;
            out.letters[a] = {0, AlgebraicRate::zero()};
            continue;
        }
        out.letters[a] = {cls.letter_degree[a], cls.distinct[*r]};
        if (!top || *r > *top)
            top = r;
    }
    if (top) {
        out.Theta = cls.distinct[*top];
        for (Letter a = 0; a < n; ++a)
            if (cls.letter_rank[a] == top)
                out.D = std::max(out.D, cls.letter_degree[a]);
        for (Letter a = 0; a < n; ++a)
            if (cls.letter_rank[a] == top && cls.letter_degree[a] == out.D)
                out.A_max.push_back(a);
    }

    // c(a): Aitken-extrapolated |sigma^n(a)| / (n^d alpha^n) at the horizon, with a heuristic
    // error bar (extrapolation step + drift of the extrapolant + rate uncertainty).
    out.c.assign(n, {});
    const std::size_t h = out.horizon;
    std::vector<std::vector<BigInt>> len;
    for (std::size_t k = h - 3; k <= h; ++k)
        len.push_back(out.lengths(k));
    for (Letter a = 0; a < n; ++a) {
        if (out.mortal[a])
            continue;
        const GrowthType& g = out.letters[a];
        const Real rate = g.rate.approx();
        std::vector<Real> r;
        for (std::size_t k = 0; k < 4; ++k)
            r.push_back(Real(len[k][a]) / detail::growth_scale(h - 3 + k, g.degree, rate));
        const Real cur = detail::aitken(r[1], r[2], r[3]);
        const Real prev = detail::aitken(r[0], r[1], r[2]);
        Real err = abs(r[3] - cur) + abs(cur - prev);
        if (rate > 0)
            err += abs(r[3]) * Real(h) * g.rate.error() / rate;
        out.c[a] = {cur, err};
    }
    return out;
}

inline GrowthType substitution_growth(const GrowthAnalysis& analysis) { return analysis.growth_type(); }

/// lambda_sigma(u) = sum of c(u_i) over letters of maximal growth, with summed error bars.
inline Coefficient lambda(const GrowthAnalysis& analysis, const Word& u) {
    Coefficient out;
    for (Letter a : u) {
        if (a >= analysis.letters.size())
            throw Error(ErrorCode::InvalidArgument, "letter outside the alphabet");
        if (analysis.in_A_max(a)) {
            out.value += analysis.c[a].value;
            out.error += analysis.c[a].error;
        }
    }
    return out;
}

/// Growth of the counting sequences n -> #{accepted words of length n from q} of a trim DFA.
struct AutomatonGrowth {
    std::vector<GrowthType> states;
    GrowthType system;

    /// Growth type of the substitution sigma_M read off the automaton: the same when the
    /// rate exceeds 1, (D + 1, 1) in the polynomial case.
    GrowthType associated_substitution() const {
        if (system.rate.is_one())
            return {system.degree + 1, AlgebraicRate::one()};
        return system;
    }
};

inline AutomatonGrowth automaton_growth(const Dfa& d, unsigned bits = kDefaultPrecisionBits) {
    if (!is_trim(d))
        throw Error(ErrorCode::NotTrim, "automaton growth needs a trim automaton");
    const auto cls = detail::analyze_classes(incidence_matrix(d), bits);
    AutomatonGrowth out;
    out.states.resize(d.state_count());
    for (State q = 0; q < d.state_count(); ++q) {
        const auto& r = cls.letter_rank[q];
        out.states[q] = r ? GrowthType{cls.letter_degree[q], cls.distinct[*r]}
                          : GrowthType{0, AlgebraicRate::zero()};
    }
    out.system = *std::max_element(out.states.begin(), out.states.end(),
                                   [](const GrowthType& a, const GrowthType& b) { return a < b; });
    return out;
}

}  // namespace synd
