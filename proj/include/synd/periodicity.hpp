#pragma once

#include <optional>
#include <string>
#include <vector>

#include "synd/gaps.hpp"
#include "synd/growth.hpp"
#include "synd/independence.hpp"
#include "synd/substitution.hpp"

namespace synd {

struct RejectedPeriod {
    std::uint64_t period = 0;
    std::uint64_t mismatch = 0;  // largest i with x_i != x_{i+period}
};

/// Outcome of ultimate-period detection on a finite prefix; "verified on prefix", never proved.
struct PeriodVerdict {
    bool periodic = false;
    std::uint64_t preperiod = 0;
    std::uint64_t period = 0;
    std::uint64_t max_period = 0;  // effective bound (clamped to prefix / 4)
    std::uint64_t prefix = 0;      // symbols actually scanned
    std::vector<RejectedPeriod> rejected;
};

/// Smallest period p <= max_period, then smallest preperiod l <= prefix / 2, such that
/// x_i = x_{i+p} for l <= i < prefix - p.
inline PeriodVerdict detect_ultimate_period(const Word& w, std::uint64_t max_period) {
    PeriodVerdict v;
    const std::uint64_t n = w.size();
    v.prefix = n;
    v.max_period = std::min<std::uint64_t>(max_period, n / 4);
    for (std::uint64_t p = 1; p <= v.max_period; ++p) {
        std::uint64_t l = 0;
        for (std::uint64_t i = n - p; i-- > 0;)
            if (w[i] != w[i + p]) {
                l = i + 1;
                break;
            }
        if (l <= n / 2) {
            v.periodic = true;
            v.preperiod = l;
            v.period = p;
            return v;
        }
        v.rejected.push_back({p, l - 1});
    }
    return v;
}

inline PeriodVerdict detect_ultimate_period(SymbolStream x, std::uint64_t prefix, std::uint64_t max_period) {
    return detect_ultimate_period(x.take(prefix), max_period);
}

struct PowerWord {
    Word u;
    std::uint64_t exponent = 0;  // u^exponent occurs at `position`
    std::uint64_t position = 0;
};

/// Shortest u (|u| <= max_len) with an occurrence of u^3 in the prefix; among those of that
/// length, maximal exponent, then genealogically least u, then earliest position.
inline std::optional<PowerWord> power_word_scan(const Word& w, std::size_t max_len) {
    const std::size_t n = w.size();
    std::vector<std::uint64_t> run;
    for (std::size_t len = 1; len <= max_len && 3 * len <= n; ++len) {
        // run[i]: length of the longest stretch starting at i with w_k = w_{k+len}.
        run.assign(n - len + 1, 0);
        for (std::size_t i = n - len; i-- > 0;)
            run[i] = w[i] == w[i + len] ? run[i + 1] + 1 : 0;
        std::optional<PowerWord> best;
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::uint64_t e = (run[i] + len) / len;
            if (e < 3)
                continue;
            Word u(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + len));
            if (!best || e > best->exponent || (e == best->exponent && u < best->u))
                best = PowerWord{std::move(u), e, i};
        }
        if (best) {
            for (std::uint64_t j = 0; j < best->exponent * len; ++j)
                if (w[best->position + j] != best->u[j % len])
                    throw Error(ErrorCode::InvalidArgument, "power-word re-verification failed");
            return best;
        }
    }
    return std::nullopt;
}

inline std::optional<PowerWord> power_word_scan(SymbolStream x, std::uint64_t prefix, std::size_t max_len) {
    return power_word_scan(x.take(prefix), max_len);
}

/// x restricted to each letter as a finite union of progressions {preperiod + r + k * period}
/// plus exceptional positions below the preperiod.
struct Progressions {
    std::uint64_t preperiod = 0;
    std::uint64_t period = 0;
    std::vector<std::vector<std::uint64_t>> residues;    // residues[a]: r in [0, period)
    std::vector<std::vector<std::uint64_t>> exceptions;  // exceptions[a]: positions < preperiod

    Word reconstruct(std::uint64_t n) const {
        Word out(n, 0);
        for (Letter a = 0; a < residues.size(); ++a) {
            for (std::uint64_t i : exceptions[a])
                if (i < n)
                    out[i] = a;
            for (std::uint64_t r : residues[a])
                for (std::uint64_t i = preperiod + r; i < n; i += period)
                    out[i] = a;
        }
        return out;
    }
};

inline Progressions progressions_of(const PeriodVerdict& v, const Word& w, std::size_t alphabet_size) {
    if (!v.periodic)
        throw Error(ErrorCode::InvalidArgument, "progressions need an ultimately periodic verdict");
    Progressions p;
    p.preperiod = v.preperiod;
    p.period = v.period;
    p.residues.resize(alphabet_size);
    p.exceptions.resize(alphabet_size);
    for (std::uint64_t i = 0; i < v.preperiod && i < w.size(); ++i)
        p.exceptions.at(w[i]).push_back(i);
    for (std::uint64_t r = 0; r < v.period && v.preperiod + r < w.size(); ++r)
        p.residues.at(w[v.preperiod + r]).push_back(r);
    return p;
}

// ---------------------------------------------------------------------------------------------

/// A substitutive presentation: x = phi(fixed point of sigma at seed).
struct SubstitutiveSource {
    Substitution sigma;
    Letter seed = 0;
    Morphism phi;

    SymbolStream stream() const { return project(phi, fixed_point(sigma, seed)); }
};

struct CobhamOptions {
    std::uint64_t prefix = 100'000;
    std::uint64_t max_period = 1000;
    ClassifyOptions classify;
    std::size_t gap_samples = kDefaultGapSamples;
    std::size_t factor_length = 2;  // factor reports for every factor of length 2..factor_length
};

struct CobhamReport {
    // (a)
    std::uint64_t agreed = 0;
    // (b)
    GrowthAnalysis growth1, growth2;
    IndependenceVerdict independence;
    bool theorem_case3 = false;  // one polynomial and one exponential growth type
    // (c)
    std::vector<GapReport> letter_gaps;
    std::vector<GapReport> factor_gaps;
    // (d)
    PeriodVerdict period;
    // (e)
    std::optional<Progressions> progressions;
    bool reconstruction_matches = false;
    std::vector<std::string> warnings;
};

inline CobhamReport cobham_check(const SubstitutiveSource& s1, const SubstitutiveSource& s2, CobhamOptions opt = {}) {
    CobhamReport r;
    if (!(s1.phi.target() == s2.phi.target()))
        throw Error(ErrorCode::AlphabetMismatch, "the two projections have different target alphabets");
    const Alphabet& out = s1.phi.target();

    Word w = s1.stream().take(opt.prefix);
    {
        SymbolStream y = s2.stream();
        for (std::uint64_t i = 0; i < w.size(); ++i) {
            auto b = y.try_next();
            if (!b || *b != w[i])
                throw Error(ErrorCode::StreamsDiffer,
                            "streams differ at position " + std::to_string(i) + ": '" + out.name(w[i]) +
                                "' vs '" + (b ? out.name(*b) : std::string("<end>")) + "'");
        }
        r.agreed = w.size();
    }

    r.growth1 = letter_growth(s1.sigma);
    r.growth2 = letter_growth(s2.sigma);
    r.independence = substitutions_independent(r.growth1, r.growth2, opt.classify);
    r.theorem_case3 = r.independence.status == IndependenceStatus::IndependentCase3 &&
                      r.independence.polynomial_exponential;
    if (r.independence.outside_theorem_scope)
        r.warnings.push_back("OutsideTheoremScope: both growth types are polynomial");
    if (!r.independence.independent())
        r.warnings.push_back("hypotheses not met: the substitutions are not independent");

    const std::uint64_t n = w.empty() ? 0 : w.size() - 1;
    auto word_stream = [&] { return periodic_stream(out, w, {}); };
    for (Letter a = 0; a < out.size(); ++a)
        r.letter_gaps.push_back(letter_gap_report(word_stream(), a, n, opt.gap_samples));
    for (std::size_t len = 2; len <= opt.factor_length; ++len) {
        std::vector<Word> seen;
        for (std::size_t i = 0; i + len <= w.size() && i < 4096; ++i) {
            Word u(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + len));
            if (std::find(seen.begin(), seen.end(), u) == seen.end())
                seen.push_back(std::move(u));
        }
        std::sort(seen.begin(), seen.end());
        for (const Word& u : seen)
            r.factor_gaps.push_back(factor_gap_report(word_stream(), u, n, opt.gap_samples));
    }

    r.period = detect_ultimate_period(w, opt.max_period);
    if (r.period.periodic) {
        r.progressions = progressions_of(r.period, w, out.size());
        r.reconstruction_matches = r.progressions->reconstruct(w.size()) == w;
    }
    return r;
}

}  // namespace synd
