#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synd/growth.hpp"
#include "synd/stream.hpp"
#include "synd/substitution.hpp"

namespace synd {

/// Letter-set membership over an alphabet of `size` letters.
using LetterSet = std::vector<bool>;

inline LetterSet letter_set(std::size_t size, const std::vector<Letter>& members) {
    LetterSet s(size, false);
    for (Letter a : members) {
        if (a >= size)
            throw Error(ErrorCode::InvalidArgument, "letter outside the alphabet");
        s[a] = true;
    }
    return s;
}

namespace detail {
inline bool member(const LetterSet& e, Letter a) { return a < e.size() && e[a]; }
}  // namespace detail

/// M(N): longest block of E-letters inside x_[0,N] (N + 1 symbols, fewer if x ends).
inline std::uint64_t max_uniform_block(SymbolStream x, const LetterSet& e, std::uint64_t n) {
    std::uint64_t best = 0, run = 0;
    for (std::uint64_t i = 0; i <= n; ++i) {
        auto a = x.try_next();
        if (!a)
            break;
        run = detail::member(e, *a) ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

/// gap(w): longest window of w whose image under phi avoids c.
inline std::uint64_t gap_of_word(const Word& w, const Morphism& phi, Letter c) {
    std::vector<bool> hits(phi.source().size(), false);
    for (Letter a = 0; a < phi.source().size(); ++a)
        for (Letter b : phi.image(a))
            hits[a] = hits[a] || b == c;
    std::uint64_t best = 0, run = 0;
    for (Letter a : w) {
        if (a >= hits.size())
            throw Error(ErrorCode::InvalidArgument, "letter outside the morphism's domain");
        run = hits[a] ? 0 : run + 1;
        best = std::max(best, run);
    }
    return best;
}

enum class GapVerdict { BoundedGaps, GrowingGaps, Inconclusive };

constexpr const char* to_string(GapVerdict v) noexcept {
    switch (v) {
        case GapVerdict::BoundedGaps: return "BoundedGaps";
        case GapVerdict::GrowingGaps: return "GrowingGaps";
        case GapVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct GapSample {
    std::uint64_t n = 0;        // checkpoint (prefix x_[0,n])
    std::uint64_t max_gap = 0;  // largest distance between consecutive occurrences so far
};

/// Gap statistics of a target on a finite prefix. Verdicts are heuristics on that prefix.
struct GapReport {
    std::string target;
    std::uint64_t prefix = 0;  // N; symbols x_0..x_N were requested
    std::uint64_t scanned = 0;
    std::uint64_t occurrences = 0;
    std::optional<std::uint64_t> first, last;
    std::uint64_t max_gap = 0;
    std::vector<GapSample> samples;
    GapVerdict verdict = GapVerdict::Inconclusive;
};

inline constexpr std::size_t kDefaultGapSamples = 12;

/// Checkpoints N / 2^(samples-1-i), i < samples, deduplicated, ascending, ending at N.
inline std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t n, std::size_t samples) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::size_t shift = samples - 1 - i;
        const std::uint64_t c = shift >= 64 ? 0 : n >> shift;
        if (c >= 1 && (out.empty() || out.back() != c))
            out.push_back(c);
    }
    if (out.empty() || out.back() != n)
        out.push_back(n);
    return out;
}

namespace detail {

inline GapVerdict gap_verdict(const GapReport& r) {
    if (r.occurrences < 2 || r.samples.size() < 2)
        return GapVerdict::Inconclusive;
    const auto& s = r.samples;
    const std::size_t half = s.size() / 2;
    bool stable = true;
    for (std::size_t i = half; i + 1 < s.size(); ++i)
        stable = stable && s[i].max_gap == s[i + 1].max_gap && s[i].max_gap > 0;
    if (stable)
        return GapVerdict::BoundedGaps;
    std::size_t rising = 1;
    for (std::size_t i = s.size() - 1; i > 0 && s[i - 1].max_gap < s[i].max_gap; --i)
        ++rising;
    return rising >= 3 ? GapVerdict::GrowingGaps : GapVerdict::Inconclusive;
}

}  // namespace detail

inline GapReport letter_gap_report(SymbolStream x, Letter c, std::uint64_t n,
                                   std::size_t samples = kDefaultGapSamples) {
    GapReport r;
    r.target = c < x.alphabet().size() ? x.alphabet().name(c) : std::to_string(c);
    r.prefix = n;
    const auto checkpoints = geometric_checkpoints(n, samples);
    std::size_t next_cp = 0;
    for (std::uint64_t i = 0; i <= n; ++i) {
        auto a = x.try_next();
        if (!a)
            break;
        ++r.scanned;
        if (*a == c) {
            if (r.last)
                r.max_gap = std::max(r.max_gap, i - *r.last);
            else
                r.first = i;
            r.last = i;
            ++r.occurrences;
        }
        while (next_cp < checkpoints.size() && checkpoints[next_cp] == i) {
            r.samples.push_back({i, r.max_gap});
            ++next_cp;
        }
    }
    r.verdict = detail::gap_verdict(r);
    return r;
}

/// Gaps of the factor u, through the indicator stream t_i = [x_[i,i+|u|) = u].
inline GapReport factor_gap_report(SymbolStream x, const Word& u, std::uint64_t n,
                                   std::size_t samples = kDefaultGapSamples) {
    const std::string name = x.alphabet().format(u);
    GapReport r = letter_gap_report(occurrence_stream(std::move(x), u), 1, n, samples);
    r.target = name;
    return r;
}

// ---------------------------------------------------------------------------------------------
// Scaling of M(N) against the five regimes.

struct ScalingParams {
    double d = 0, dp = 0;          // degrees of sigma and of the maximal letter of E'
    double alpha = 1, alpha_p = 1;  // rates of sigma and of the maximal letter of E'
};

struct ScalingSample {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
};

struct ScalingFit {
    int model = 0;                 // 1..5
    double exponent = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double correction = 0;          // known exponent of log N removed before the fit (cases 2, 3)
    double lo = 0, hi = 0;          // admissible exponent interval
    double tolerance = 0.1;
    std::string predictor;          // "log N" or "log log N"
    std::vector<ScalingSample> samples;
    std::size_t fitted_from = 0;    // index of the first sample used by the regression
    bool pass = false;
};

inline constexpr double kDefaultTolerance = 0.1;

namespace detail {

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

inline std::pair<double, double> least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / den;
    return {slope, (sy - slope * sx) / n};
}

}  // namespace detail

/// Regresses M(2^i), 2 <= 2^i <= n_max, over the upper half of the samples (the asymptotic
/// regime). Cases 1, 2, 3, 5 fit the exponent of N after removing the known log N correction;
/// case 4 fits log M against log log N. Throws CaseMismatch when the parameters violate the
/// declared case.
inline ScalingFit scaling_fit(SymbolStream x, const LetterSet& e, int model, ScalingParams p,
                              std::uint64_t n_max, double tolerance = kDefaultTolerance) {
    using detail::near;
    auto mismatch = [&](const char* why) {
        throw Error(ErrorCode::CaseMismatch, "case " + std::to_string(model) + ": " + why);
    };
    ScalingFit fit;
    fit.model = model;
    fit.tolerance = tolerance;
    fit.predictor = "log N";
    switch (model) {
        case 1:
            if (!near(p.alpha, p.alpha_p) || !near(p.d, p.dp))
                mismatch("needs (alpha', d') = (alpha, d)");
            fit.lo = fit.hi = 1;
            break;
        case 2:
            if (!near(p.alpha, p.alpha_p) || !(p.alpha > 1) || !(p.dp < p.d))
                mismatch("needs alpha = alpha' > 1 and d' < d");
            fit.lo = fit.hi = 1;
            fit.correction = p.dp - p.d;
            break;
        case 3:
            if (!(p.alpha > p.alpha_p) || !(p.alpha_p > 1) || near(p.alpha, p.alpha_p))
                mismatch("needs alpha > alpha' > 1");
            fit.lo = fit.hi = std::log(p.alpha_p) / std::log(p.alpha);
            fit.correction = p.dp - p.d * fit.lo;
            break;
        case 4:
            if (!(p.alpha > 1) || !near(p.alpha_p, 1))
                mismatch("needs alpha > alpha' = 1");
            fit.lo = p.dp;
            fit.hi = p.dp + 1;
            fit.predictor = "log log N";
            break;
        case 5:
            if (!near(p.alpha, 1) || !near(p.alpha_p, 1) || !(p.dp < p.d))
                mismatch("needs alpha = alpha' = 1 and d' < d");
            fit.lo = p.dp / p.d;
            fit.hi = (p.dp + 1) / p.d;
            break;
        default:
            throw Error(ErrorCode::InvalidArgument, "scaling case must be 1..5");
    }

    std::uint64_t next = 2, best = 0, run = 0;
    for (std::uint64_t i = 0; i <= n_max && next <= n_max; ++i) {
        auto a = x.try_next();
        if (!a)
            break;
        run = detail::member(e, *a) ? run + 1 : 0;
        best = std::max(best, run);
        if (i == next) {
            fit.samples.push_back({i, best});
            next *= 2;
        }
    }

    std::vector<double> xs, ys;
    fit.fitted_from = fit.samples.size() / 2;
    for (std::size_t i = fit.fitted_from; i < fit.samples.size(); ++i) {
        const auto& s = fit.samples[i];
        if (s.m == 0)
            continue;
        const double ln = std::log(static_cast<double>(s.n));
        const double lm = std::log(static_cast<double>(s.m));
        if (model == 4) {
            xs.push_back(std::log(ln));
            ys.push_back(lm);
        } else {
            xs.push_back(ln);
            ys.push_back(lm - fit.correction * std::log(ln));
        }
    }
    if (xs.size() >= 2) {
        std::tie(fit.exponent, fit.intercept) = detail::least_squares(xs, ys);
        fit.pass = fit.exponent >= fit.lo - tolerance && fit.exponent <= fit.hi + tolerance;
    }
    return fit;
}

/// The regime read off a growth analysis: E' = {e : sigma(e) in E*}, (d', alpha') the maximal
/// growth type on E', (d, alpha) that of sigma. Rates refer to the regularized power, which
/// leaves every exponent of the five regimes unchanged.
struct ScalingRegime {
    int model = 0;
    ScalingParams params;
    std::vector<Letter> e_prime;
};

inline ScalingRegime infer_scaling_regime(const GrowthAnalysis& g, const LetterSet& e) {
    ScalingRegime r;
    const Substitution& sigma = g.sigma;
    std::optional<GrowthType> best;
    for (Letter a = 0; a < sigma.size(); ++a) {
        const Word& img = sigma.image(a);
        if (!std::all_of(img.begin(), img.end(), [&](Letter b) { return detail::member(e, b); }))
            continue;
        r.e_prime.push_back(a);
        if (!best || *best < g.letters[a])
            best = g.letters[a];
    }
    if (!best)
        throw Error(ErrorCode::CaseMismatch, "no letter e with sigma(e) in E*");
    const GrowthType top = g.growth_type();
    if (best->rate.is_zero() || top.rate.is_zero())
        throw Error(ErrorCode::CaseMismatch, "mortal letters have no scaling regime");
    r.params.d = static_cast<double>(top.degree);
    r.params.dp = static_cast<double>(best->degree);
    r.params.alpha = top.rate.to_double();
    r.params.alpha_p = best->rate.to_double();
    const auto cmp = compare(best->rate, top.rate);
    if (cmp == 0 && best->degree == top.degree)
        r.model = 1;
    else if (cmp == 0 && top.rate.is_root())
        r.model = 2;
    else if (cmp < 0 && best->rate.is_root())
        r.model = 3;
    else if (cmp < 0)
        r.model = 4;
    else
        r.model = 5;
    if (r.model == 4)
        r.params.alpha_p = 1;
    if (r.model == 5)
        r.params.alpha = r.params.alpha_p = 1;
    return r;
}

// ---------------------------------------------------------------------------------------------
// The K' bound on gap(sigma^n(a)).

struct KPrimeReport {
    Letter target = 0;
    std::vector<Letter> avoiding;  // A(c): c is absent from phi(sigma^n(a)) for infinitely many n
    std::size_t dp = 0;            // d'
    double alpha_p = 1;            // alpha' (of sigma itself)
    std::size_t n_max = 0;
    std::vector<std::vector<std::uint64_t>> gaps;  // gaps[n-1][a] = gap(sigma^n(a))
    std::vector<double> max_ratio;                 // max_a gaps / bound(n)
    double k_prime = 0;
    bool ratio_non_increasing = false;             // over the last 5 values of n
};

inline constexpr std::size_t kKPrimeLengthLimit = 50'000'000;

namespace detail {

/// a in A(c) iff c is missing from phi(sigma^n(a)) for infinitely many n. The letter sets
/// Delta(sigma^n(a)) are eventually periodic, so it suffices to scan one period.
inline std::vector<Letter> avoiding_letters(const Substitution& sigma, const Morphism& phi, Letter c) {
    const std::size_t k = sigma.size();
    std::vector<bool> shows(k, false);
    for (Letter a = 0; a < k; ++a) {
        const Word& img = phi.image(a);
        shows[a] = std::find(img.begin(), img.end(), c) != img.end();
    }
    std::vector<Letter> out;
    for (Letter a = 0; a < k; ++a) {
        std::map<std::vector<bool>, std::size_t> seen;
        std::vector<std::vector<bool>> orbit;
        std::vector<bool> cur(k, false);
        cur[a] = true;
        while (seen.emplace(cur, orbit.size()).second) {
            orbit.push_back(cur);
            std::vector<bool> next(k, false);
            for (Letter b = 0; b < k; ++b)
                if (cur[b])
                    for (Letter x : sigma.image(b))
                        next[x] = true;
            cur = std::move(next);
        }
        for (std::size_t i = seen.at(cur); i < orbit.size(); ++i) {
            bool clean = true;
            for (Letter b = 0; b < k && clean; ++b)
                clean = !(orbit[i][b] && shows[b]);
            if (clean) {
                out.push_back(a);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// gap(sigma^n(a)) against n^d' alpha'^n (alpha' > 1) or n^(d'+1) (alpha' = 1), n = 1..n_max.
/// (d', alpha') is the maximal growth type on A(c); its rate is brought back from sigma^p.
inline KPrimeReport kprime_check(const Substitution& sigma, const Morphism& phi, Letter c, std::size_t n_max) {
    if (phi.source().size() != sigma.size())
        throw Error(ErrorCode::AlphabetMismatch, "morphism domain differs from the substitution alphabet");
    const GrowthAnalysis g = letter_growth(sigma);
    KPrimeReport r;
    r.target = c;
    r.n_max = n_max;
    r.avoiding = detail::avoiding_letters(sigma, phi, c);
    std::optional<GrowthType> best;
    for (Letter a : r.avoiding)
        if (!g.mortal[a] && (!best || *best < g.letters[a]))
            best = g.letters[a];
    if (best && best->rate.is_root()) {
        r.dp = best->degree;
        r.alpha_p = std::pow(best->rate.to_double(), 1.0 / static_cast<double>(g.p));
    } else if (best) {
        r.dp = best->degree;
    }
    const bool exponential = best && best->rate.is_root();

    std::vector<Word> cur;
    for (Letter a = 0; a < sigma.size(); ++a)
        cur.push_back({a});
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<std::uint64_t> row;
        for (Word& w : cur) {
            w = sigma.apply(w);
            if (w.size() > kKPrimeLengthLimit)
                throw Error(ErrorCode::InvalidArgument, "iterated image exceeds the expansion limit");
            row.push_back(gap_of_word(w, phi, c));
        }
        const double dn = static_cast<double>(n);
        const double bound = exponential ? std::pow(dn, static_cast<double>(r.dp)) * std::pow(r.alpha_p, dn)
                                         : std::pow(dn, static_cast<double>(r.dp + 1));
        double m = 0;
        for (std::uint64_t v : row)
            m = std::max(m, static_cast<double>(v) / bound);
        r.gaps.push_back(std::move(row));
        r.max_ratio.push_back(m);
        r.k_prime = std::max(r.k_prime, m);
    }
    const std::size_t tail = std::min<std::size_t>(5, r.max_ratio.size());
    r.ratio_non_increasing = tail >= 2;
    for (std::size_t i = r.max_ratio.size() - tail; i + 1 < r.max_ratio.size() && tail >= 2; ++i)
        r.ratio_non_increasing = r.ratio_non_increasing && r.max_ratio[i + 1] <= r.max_ratio[i] + 1e-12;
    return r;
}

}  // namespace synd
