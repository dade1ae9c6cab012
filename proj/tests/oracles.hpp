#pragma once

// Independent reference implementations. None of these call into the library algorithms they
// check; they trade efficiency for obviousness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "synd/automata.hpp"
#include "synd/substitution.hpp"

#ifndef SYND_DATA_DIR
#define SYND_DATA_DIR "data"
#endif

namespace oracle {

using synd::Dfa;
using synd::Letter;
using synd::State;
using synd::Word;

inline std::string data(const std::string& name) { return std::string(SYND_DATA_DIR) + "/" + name; }

/// Every word of A^n in lexicographic order.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
    std::vector<Word> out;
    Word w(n, 0);
    for (;;) {
        out.push_back(w);
        std::size_t i = n;
        while (i > 0 && w[i - 1] + 1 == k)
            w[--i] = 0;
        if (i == 0)
            break;
        ++w[i - 1];
    }
    return out;
}

inline bool accepts(const Dfa& d, const Word& w) {
    State q = d.initial();
    for (Letter a : w) {
        q = d.next(q, a);
        if (q == synd::kNoState)
            return false;
    }
    return d.is_final(q);
}

/// L(d) restricted to lengths <= max_len, in genealogical order.
inline std::vector<Word> language(const Dfa& d, std::size_t max_len) {
    std::vector<Word> out;
    for (std::size_t n = 0; n <= max_len; ++n)
        for (const Word& w : all_words(d.alphabet().size(), n))
            if (accepts(d, w))
                out.push_back(w);
    return out;
}

inline std::uint64_t count(const Dfa& d, std::size_t n) {
    std::uint64_t c = 0;
    for (const Word& w : all_words(d.alphabet().size(), n))
        c += accepts(d, w);
    return c;
}

/// Number of Myhill-Nerode classes with a non-empty future, by Moore refinement on the completed
/// automaton (the sink class is dropped), i.e. the size of the trim minimal automaton.
inline std::size_t minimal_trim_size(const Dfa& d) {
    const std::size_t n = d.state_count(), k = d.alphabet().size();
    const std::size_t sink = n;
    auto step = [&](std::size_t q, Letter a) -> std::size_t {
        if (q == sink)
            return sink;
        State t = d.next(static_cast<State>(q), a);
        return t == synd::kNoState ? sink : t;
    };
    std::vector<bool> seen(n + 1, false);
    std::vector<std::size_t> stack{d.initial()};
    seen[d.initial()] = true;
    while (!stack.empty()) {
        std::size_t q = stack.back();
        stack.pop_back();
        for (Letter a = 0; a < k; ++a)
            if (std::size_t t = step(q, a); !seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<std::size_t> cls(n + 1);
    for (std::size_t q = 0; q <= n; ++q)
        cls[q] = q < n && d.is_final(static_cast<State>(q)) ? 1 : 0;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> ids;
        std::vector<std::size_t> next(n + 1);
        for (std::size_t q = 0; q <= n; ++q) {
            std::vector<std::size_t> sig{cls[q]};
            for (Letter a = 0; a < k; ++a)
                sig.push_back(cls[step(q, a)]);
            next[q] = ids.emplace(sig, ids.size()).first->second;
        }
        const bool stable = ids.size() == std::set<std::size_t>(cls.begin(), cls.end()).size();
        cls = std::move(next);
        if (stable)
            break;
    }
    std::set<std::size_t> live;
    for (std::size_t q = 0; q <= n; ++q)
        if (seen[q] && cls[q] != cls[sink])
            live.insert(cls[q]);
    return live.size();
}

/// sigma^n(w) by repeated rewriting.
inline Word expand(const synd::Substitution& s, Word w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        Word next;
        for (Letter a : w)
            for (Letter b : s.image(a))
                next.push_back(b);
        w = std::move(next);
    }
    return w;
}

/// Longest all-E block in w[0..n] by checking every window.
inline std::uint64_t brute_max_block(const Word& w, const std::vector<bool>& e, std::uint64_t n) {
    std::uint64_t best = 0;
    const std::uint64_t end = std::min<std::uint64_t>(n + 1, w.size());
    for (std::uint64_t i = 0; i < end; ++i)
        for (std::uint64_t j = i; j < end; ++j) {
            bool all = true;
            for (std::uint64_t t = i; t <= j && all; ++t)
                all = w[t] < e.size() && e[w[t]];
            if (all)
                best = std::max(best, j - i + 1);
        }
    return best;
}

/// Largest distance between consecutive occurrences of c in w (first occurrence counts from -1).
inline std::uint64_t max_return(const Word& w, Letter c) {
    std::int64_t last = -1;
    std::uint64_t best = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] == c) {
            best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(static_cast<std::int64_t>(i) - last));
            last = static_cast<std::int64_t>(i);
        }
    return best;
}

inline bool is_triangular(std::uint64_t n) {
    const auto t = static_cast<std::uint64_t>(std::floor((std::sqrt(8.0 * static_cast<double>(n) + 1) - 1) / 2));
    for (std::uint64_t s = t > 0 ? t - 1 : 0; s <= t + 1; ++s)
        if (s * (s + 1) / 2 == n)
            return true;
    return false;
}

/// Samples {alpha^n n^d / (beta^m m^e) : 1 <= n, m <= limit} and reports whether every target
/// is met within eps. Work in logarithms to stay in range.
inline bool density_probe_hits_all(int d, int alpha, int e, int beta, int limit = 40,
                                   const std::vector<double>& targets = {0.5, 1.7, 3.14}, double eps = 0.3) {
    std::vector<bool> hit(targets.size(), false);
    for (int n = 1; n <= limit; ++n)
        for (int m = 1; m <= limit; ++m) {
            const double lv = n * std::log(alpha) + d * std::log(n) - m * std::log(beta) - e * std::log(m);
            if (lv > 3 || lv < -3)
                continue;
            const double v = std::exp(lv);
            for (std::size_t t = 0; t < targets.size(); ++t)
                if (std::abs(v - targets[t]) < eps)
                    hit[t] = true;
        }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

/// Smallest p, then smallest l, with w_i = w_{i+p} for all l <= i < |w| - p, l <= |w| / 2;
/// {0, 0} if none up to max_p.
inline std::pair<std::uint64_t, std::uint64_t> naive_period(const Word& w, std::uint64_t max_p) {
    const std::uint64_t n = w.size();
    for (std::uint64_t p = 1; p <= max_p && p < n; ++p)
        for (std::uint64_t l = 0; l <= n / 2; ++l) {
            bool ok = true;
            for (std::uint64_t i = l; i + p < n && ok; ++i)
                ok = w[i] == w[i + p];
            if (ok)
                return {p, l};
        }
    return {0, 0};
}

/// Dominant eigenvalue by floating power iteration on a column-stochastic-free integer matrix.
inline double power_iteration(const std::vector<std::vector<double>>& m, int steps = 2000) {
    const std::size_t n = m.size();
    std::vector<double> v(n, 1.0);
    double lambda = 0;
    for (int s = 0; s < steps; ++s) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                w[i] += m[i][j] * v[j];
        double norm = 0;
        for (double x : w)
            norm = std::max(norm, std::abs(x));
        lambda = norm / std::max(1e-300, *std::max_element(v.begin(), v.end()));
        for (auto& x : w)
            x /= norm;
        v = std::move(w);
    }
    return lambda;
}

}  // namespace oracle
