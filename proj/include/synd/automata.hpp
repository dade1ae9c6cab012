#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "synd/error.hpp"
#include "synd/numeric.hpp"
#include "synd/word.hpp"

namespace synd {

using State = std::uint32_t;
inline constexpr State kNoState = std::numeric_limits<State>::max();

/// Deterministic, possibly partial, finite automaton over a totally ordered alphabet.
/// States are dense indices; names are kept for I/O only. Immutable once built.
class Dfa {
public:
    Dfa() = default;

    Dfa(Alphabet alphabet, std::vector<std::string> state_names, State initial,
        std::vector<bool> finals, std::vector<std::vector<State>> delta)
        : alphabet_(std::move(alphabet)), names_(std::move(state_names)), initial_(initial),
          finals_(std::move(finals)), delta_(std::move(delta)) {
        const std::size_t n = names_.size();
        if (n == 0)
            throw Error(ErrorCode::EmptyLanguage, "automaton without states");
        if (initial_ >= n)
            throw Error(ErrorCode::InvalidArgument, "initial state out of range");
        if (finals_.size() != n || delta_.size() != n)
            throw Error(ErrorCode::InvalidArgument, "state table size mismatch");
        for (const auto& row : delta_) {
            if (row.size() != alphabet_.size())
                throw Error(ErrorCode::InvalidArgument, "transition row size mismatch");
            for (State t : row)
                if (t != kNoState && t >= n)
                    throw Error(ErrorCode::InvalidArgument, "transition target out of range");
        }
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t state_count() const noexcept { return names_.size(); }
    State initial() const noexcept { return initial_; }
    bool is_final(State q) const { return finals_.at(q); }
    const std::string& state_name(State q) const { return names_.at(q); }
    const std::vector<std::string>& state_names() const noexcept { return names_; }

    /// Target of (q, a), or kNoState when undefined.
    State next(State q, Letter a) const { return delta_[q][a]; }

    std::optional<State> find_state(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return static_cast<State>(i);
        return std::nullopt;
    }

    State run(State from, const Word& w) const {
        State q = from;
        for (Letter a : w) {
            if (q == kNoState)
                break;
            q = next(q, a);
        }
        return q;
    }

    bool accepts(const Word& w) const {
        State q = run(initial_, w);
        return q != kNoState && finals_[q];
    }

    bool is_complete() const {
        for (const auto& row : delta_)
            for (State t : row)
                if (t == kNoState)
                    return false;
        return true;
    }

private:
    Alphabet alphabet_;
    std::vector<std::string> names_;
    State initial_ = 0;
    std::vector<bool> finals_;
    std::vector<std::vector<State>> delta_;
};

/// Incremental construction used by the parsers; rejects duplicate transitions.
class DfaBuilder {
public:
    explicit DfaBuilder(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    State state(const std::string& name) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name)
                return static_cast<State>(i);
        names_.push_back(name);
        finals_.push_back(false);
        delta_.emplace_back(alphabet_.size(), kNoState);
        return static_cast<State>(names_.size() - 1);
    }

    void set_initial(State q) { initial_ = q; }
    void set_final(State q) { finals_.at(q) = true; }

    /// Returns false if (from, a) already has a transition.
    bool add(State from, Letter a, State to) {
        State& slot = delta_.at(from).at(a);
        if (slot != kNoState)
            return false;
        slot = to;
        return true;
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }

    Dfa build() const {
        if (!initial_)
            throw Error(ErrorCode::InvalidArgument, "no initial state");
        return Dfa(alphabet_, names_, *initial_, finals_, delta_);
    }

private:
    Alphabet alphabet_;
    std::vector<std::string> names_;
    std::optional<State> initial_;
    std::vector<bool> finals_;
    std::vector<std::vector<State>> delta_;
};

/// Onto map Phi from the states of one automaton to the states of another.
struct StateMap {
    std::vector<State> mapping;
    std::size_t target_states = 0;

    State operator()(State q) const { return mapping.at(q); }

    bool onto() const {
        std::vector<bool> hit(target_states, false);
        for (State t : mapping)
            if (t < target_states)
                hit[t] = true;
        return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    }

    friend bool operator==(const StateMap&, const StateMap&) = default;
};

namespace detail {

inline std::vector<bool> forward_reach(const Dfa& d) {
    std::vector<bool> seen(d.state_count(), false);
    std::vector<State> stack{d.initial()};
    seen[d.initial()] = true;
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (Letter a = 0; a < d.alphabet().size(); ++a) {
            State t = d.next(q, a);
            if (t != kNoState && !seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return seen;
}

inline std::vector<bool> backward_reach(const Dfa& d) {
    const std::size_t n = d.state_count();
    std::vector<std::vector<State>> pred(n);
    for (State q = 0; q < n; ++q)
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState)
                pred[t].push_back(q);
    std::vector<bool> seen(n, false);
    std::vector<State> stack;
    for (State q = 0; q < n; ++q)
        if (d.is_final(q)) {
            seen[q] = true;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        for (State p : pred[q])
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
    }
    return seen;
}

/// Restriction of d to `keep`, renumbered in increasing original index.
inline Dfa restrict_to(const Dfa& d, const std::vector<bool>& keep) {
    std::vector<State> renum(d.state_count(), kNoState);
    std::vector<std::string> names;
    std::vector<bool> finals;
    for (State q = 0; q < d.state_count(); ++q)
        if (keep[q]) {
            renum[q] = static_cast<State>(names.size());
            names.push_back(d.state_name(q));
            finals.push_back(d.is_final(q));
        }
    std::vector<std::vector<State>> delta(names.size(),
                                          std::vector<State>(d.alphabet().size(), kNoState));
    for (State q = 0; q < d.state_count(); ++q) {
        if (!keep[q])
            continue;
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState && keep[t])
                delta[renum[q]][a] = renum[t];
    }
    return Dfa(d.alphabet(), std::move(names), renum[d.initial()], std::move(finals),
               std::move(delta));
}

/// BFS numbering from the initial state, visiting symbols in alphabet order.
inline std::vector<State> bfs_order(const Dfa& d) {
    std::vector<State> order(d.state_count(), kNoState);
    std::queue<State> queue;
    State next_id = 0;
    order[d.initial()] = next_id++;
    queue.push(d.initial());
    while (!queue.empty()) {
        State q = queue.front();
        queue.pop();
        for (Letter a = 0; a < d.alphabet().size(); ++a) {
            State t = d.next(q, a);
            if (t != kNoState && order[t] == kNoState) {
                order[t] = next_id++;
                queue.push(t);
            }
        }
    }
    return order;
}

}  // namespace detail

inline bool is_trim(const Dfa& d) {
    auto fwd = detail::forward_reach(d);
    auto bwd = detail::backward_reach(d);
    for (State q = 0; q < d.state_count(); ++q)
        if (!fwd[q] || !bwd[q])
            return false;
    return true;
}

/// Accessible and co-accessible part; the accepted language is unchanged.
inline Dfa trim(const Dfa& d) {
    auto fwd = detail::forward_reach(d);
    auto bwd = detail::backward_reach(d);
    if (!bwd[d.initial()])
        throw Error(ErrorCode::EmptyLanguage, "no final state is reachable from the initial state");
    std::vector<bool> keep(d.state_count());
    for (State q = 0; q < d.state_count(); ++q)
        keep[q] = fwd[q] && bwd[q];
    return detail::restrict_to(d, keep);
}

/// Adds a non-final sink receiving every undefined transition. No-op if already complete.
inline Dfa complete(const Dfa& d, const std::string& sink_name = "__sink") {
    if (d.is_complete())
        return d;
    std::vector<std::string> names = d.state_names();
    if (d.find_state(sink_name))
        throw Error(ErrorCode::SymbolClash, "sink name '" + sink_name + "' already used");
    const State sink = static_cast<State>(names.size());
    names.push_back(sink_name);
    std::vector<bool> finals(names.size(), false);
    std::vector<std::vector<State>> delta(names.size(),
                                          std::vector<State>(d.alphabet().size(), sink));
    for (State q = 0; q < d.state_count(); ++q) {
        finals[q] = d.is_final(q);
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState)
                delta[q][a] = t;
    }
    return Dfa(d.alphabet(), std::move(names), d.initial(), std::move(finals), std::move(delta));
}

/// Canonical automaton (trim + minimal) of the language of d, by Moore partition refinement.
/// States are numbered in BFS order over the ordered alphabet; each class keeps the name of
/// its lowest-indexed member.
inline Dfa minimize(const Dfa& input) {
    const Dfa d = trim(input);
    const std::size_t n = d.state_count();
    const std::size_t k = d.alphabet().size();
    std::vector<std::size_t> cls(n);
    for (State q = 0; q < n; ++q)
        cls[q] = d.is_final(q) ? 1 : 0;
    std::size_t classes = 0;
    for (;;) {
        std::map<std::vector<std::size_t>, std::size_t> sig_ids;
        std::vector<std::size_t> next(n);
        for (State q = 0; q < n; ++q) {
            std::vector<std::size_t> sig;
            sig.reserve(k + 1);
            sig.push_back(cls[q]);
            for (Letter a = 0; a < k; ++a) {
                State t = d.next(q, a);
                sig.push_back(t == kNoState ? std::numeric_limits<std::size_t>::max() : cls[t]);
            }
            auto [it, inserted] = sig_ids.emplace(std::move(sig), sig_ids.size());
            next[q] = it->second;
        }
        const std::size_t count = sig_ids.size();
        cls = std::move(next);
        if (count == classes)
            break;
        classes = count;
    }

    std::vector<State> rep(classes, kNoState);
    for (State q = 0; q < n; ++q)
        if (rep[cls[q]] == kNoState)
            rep[cls[q]] = q;
    std::vector<std::string> names(classes);
    std::vector<bool> finals(classes);
    std::vector<std::vector<State>> delta(classes, std::vector<State>(k, kNoState));
    for (std::size_t c = 0; c < classes; ++c) {
        State q = rep[c];
        names[c] = d.state_name(q);
        finals[c] = d.is_final(q);
        for (Letter a = 0; a < k; ++a)
            if (State t = d.next(q, a); t != kNoState)
                delta[c][a] = static_cast<State>(cls[t]);
    }
    Dfa quotient(d.alphabet(), names, static_cast<State>(cls[d.initial()]), finals, delta);

    auto order = detail::bfs_order(quotient);
    std::vector<std::string> onames(classes);
    std::vector<bool> ofinals(classes);
    std::vector<std::vector<State>> odelta(classes, std::vector<State>(k, kNoState));
    for (State q = 0; q < classes; ++q) {
        onames[order[q]] = quotient.state_name(q);
        ofinals[order[q]] = quotient.is_final(q);
        for (Letter a = 0; a < k; ++a)
            if (State t = quotient.next(q, a); t != kNoState)
                odelta[order[q]][a] = order[t];
    }
    return Dfa(d.alphabet(), std::move(onames), 0, std::move(ofinals), std::move(odelta));
}

/// Structural isomorphism of two accessible automata (state names ignored).
inline bool isomorphic(const Dfa& x, const Dfa& y) {
    if (!(x.alphabet() == y.alphabet()) || x.state_count() != y.state_count())
        return false;
    auto ox = detail::bfs_order(x);
    auto oy = detail::bfs_order(y);
    if (std::count(ox.begin(), ox.end(), kNoState) || std::count(oy.begin(), oy.end(), kNoState))
        return false;
    std::vector<State> inv_y(y.state_count());
    for (State q = 0; q < y.state_count(); ++q)
        inv_y[oy[q]] = q;
    for (State q = 0; q < x.state_count(); ++q) {
        State p = inv_y[ox[q]];
        if (x.is_final(q) != y.is_final(p))
            return false;
        for (Letter a = 0; a < x.alphabet().size(); ++a) {
            State tx = x.next(q, a);
            State ty = y.next(p, a);
            if ((tx == kNoState) != (ty == kNoState))
                return false;
            if (tx != kNoState && ox[tx] != oy[ty])
                return false;
        }
    }
    return true;
}

/// Product of the canonical automaton of L with a complete, accessible automaton m.
/// States are all pairs (q', r), indexed q' * |Q_m| + r; a transition exists exactly when the
/// canonical side defines one. The returned map is the first projection.
inline std::pair<Dfa, StateMap> product_L_automaton(const Dfa& m, const Dfa& canonical) {
    if (!(m.alphabet() == canonical.alphabet()))
        throw Error(ErrorCode::AlphabetMismatch, "product operands use different ordered alphabets");
    if (!m.is_complete())
        throw Error(ErrorCode::NotComplete, "recognizer must be complete");
    const std::size_t nq = m.state_count();
    const std::size_t nc = canonical.state_count();
    const std::size_t k = m.alphabet().size();
    auto id = [nq](State qc, State r) { return static_cast<State>(qc * nq + r); };

    std::vector<std::string> names(nc * nq);
    std::vector<bool> finals(nc * nq);
    std::vector<std::vector<State>> delta(nc * nq, std::vector<State>(k, kNoState));
    StateMap phi{std::vector<State>(nc * nq), nc};
    for (State qc = 0; qc < nc; ++qc)
        for (State r = 0; r < nq; ++r) {
            const State p = id(qc, r);
            names[p] = "(" + canonical.state_name(qc) + "," + m.state_name(r) + ")";
            finals[p] = canonical.is_final(qc) && m.is_final(r);
            phi.mapping[p] = qc;
            for (Letter a = 0; a < k; ++a)
                if (State tc = canonical.next(qc, a); tc != kNoState)
                    delta[p][a] = id(tc, m.next(r, a));
        }
    Dfa product(m.alphabet(), std::move(names), id(canonical.initial(), m.initial()),
                std::move(finals), std::move(delta));
    return {std::move(product), std::move(phi)};
}

/// Searches the map Phi making m an L-automaton over `canonical`. Phi is forced on states
/// accessible in m; on inaccessible states the least compatible choice is taken.
inline std::optional<StateMap> check_L_automaton(const Dfa& m, const Dfa& canonical) {
    if (!(m.alphabet() == canonical.alphabet()))
        return std::nullopt;
    const std::size_t n = m.state_count();
    const std::size_t nc = canonical.state_count();
    const std::size_t k = m.alphabet().size();

    // Greatest compatibility relation: same definedness pattern, finals into finals,
    // closed under transitions.
    std::vector<std::vector<bool>> rel(n, std::vector<bool>(nc, false));
    for (State q = 0; q < n; ++q)
        for (State c = 0; c < nc; ++c) {
            bool ok = !m.is_final(q) || canonical.is_final(c);
            for (Letter a = 0; ok && a < k; ++a)
                ok = (m.next(q, a) == kNoState) == (canonical.next(c, a) == kNoState);
            rel[q][c] = ok;
        }
    for (bool changed = true; changed;) {
        changed = false;
        for (State q = 0; q < n; ++q)
            for (State c = 0; c < nc; ++c) {
                if (!rel[q][c])
                    continue;
                for (Letter a = 0; a < k; ++a) {
                    State t = m.next(q, a);
                    if (t != kNoState && !rel[t][canonical.next(c, a)]) {
                        rel[q][c] = false;
                        changed = true;
                        break;
                    }
                }
            }
    }

    std::vector<State> phi(n, kNoState);
    // Assigns q -> c and propagates; returns the states newly assigned, or nullopt on conflict
    // (in which case nothing remains assigned).
    auto assign = [&](State q, State c) -> std::optional<std::vector<State>> {
        std::vector<State> touched;
        std::vector<std::pair<State, State>> work{{q, c}};
        while (!work.empty()) {
            auto [s, t] = work.back();
            work.pop_back();
            if (phi[s] != kNoState) {
                if (phi[s] != t) {
                    for (State u : touched)
                        phi[u] = kNoState;
                    return std::nullopt;
                }
                continue;
            }
            if (!rel[s][t]) {
                for (State u : touched)
                    phi[u] = kNoState;
                return std::nullopt;
            }
            phi[s] = t;
            touched.push_back(s);
            for (Letter a = 0; a < k; ++a)
                if (State u = m.next(s, a); u != kNoState)
                    work.emplace_back(u, canonical.next(t, a));
        }
        return touched;
    };

    if (!assign(m.initial(), canonical.initial()))
        return std::nullopt;

    std::function<bool(State)> solve = [&](State from) -> bool {
        State q = from;
        while (q < n && phi[q] != kNoState)
            ++q;
        if (q == n) {
            StateMap map{phi, nc};
            return map.onto();
        }
        for (State c = 0; c < nc; ++c) {
            if (!rel[q][c])
                continue;
            if (auto touched = assign(q, c)) {
                if (solve(q + 1))
                    return true;
                for (State u : *touched)
                    phi[u] = kNoState;
            }
        }
        return false;
    };
    if (!solve(0))
        return std::nullopt;

    StateMap map{phi, nc};
    for (State q = 0; q < n; ++q) {
        if (m.is_final(q) && !canonical.is_final(map(q)))
            return std::nullopt;
        for (Letter a = 0; a < k; ++a) {
            State t = m.next(q, a);
            State tc = canonical.next(map(q), a);
            if ((t == kNoState) != (tc == kNoState))
                return std::nullopt;
            if (t != kNoState && map(t) != tc)
                return std::nullopt;
        }
    }
    return map;
}

/// Exact counts u_q(n) of accepted words of length n read from q, memoized per instance.
/// Not synchronized: share the automaton, not the counter, across threads.
class WordCounter {
public:
    explicit WordCounter(Dfa d) : dfa_(std::move(d)) {
        std::vector<BigInt> base(dfa_.state_count());
        for (State q = 0; q < dfa_.state_count(); ++q)
            base[q] = dfa_.is_final(q) ? 1 : 0;
        table_.push_back(std::move(base));
    }

    const Dfa& dfa() const noexcept { return dfa_; }

    const BigInt& count(State q, std::size_t n) {
        extend(n);
        return table_[n][q];
    }

    const BigInt& count(std::size_t n) { return count(dfa_.initial(), n); }

    void extend(std::size_t n) {
        while (table_.size() <= n) {
            const auto& prev = table_.back();
            std::vector<BigInt> row(dfa_.state_count());
            for (State q = 0; q < dfa_.state_count(); ++q)
                for (Letter a = 0; a < dfa_.alphabet().size(); ++a)
                    if (State t = dfa_.next(q, a); t != kNoState)
                        row[q] += prev[t];
            table_.push_back(std::move(row));
        }
    }

private:
    Dfa dfa_;
    std::vector<std::vector<BigInt>> table_;
};

inline BigInt count_words(const Dfa& d, State q, std::size_t n) {
    WordCounter counter(d);
    return counter.count(q, n);
}

/// Entry (i, j) counts the symbols a with delta(j, a) = i.
inline IntMatrix incidence_matrix(const Dfa& d) {
    IntMatrix m(d.state_count(), d.state_count());
    for (State j = 0; j < d.state_count(); ++j)
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State i = d.next(j, a); i != kNoState)
                m(i, j) += 1;
    return m;
}

/// True when the trim part of d has a cycle, i.e. the language is infinite.
inline bool accepts_infinite_language(const Dfa& d) {
    const Dfa t = trim(d);
    const std::size_t n = t.state_count();
    std::vector<int> color(n, 0);
    std::function<bool(State)> dfs = [&](State q) -> bool {
        color[q] = 1;
        for (Letter a = 0; a < t.alphabet().size(); ++a) {
            State s = t.next(q, a);
            if (s == kNoState)
                continue;
            if (color[s] == 1)
                return true;
            if (color[s] == 0 && dfs(s))
                return true;
        }
        color[q] = 2;
        return false;
    };
    for (State q = 0; q < n; ++q)
        if (color[q] == 0 && dfs(q))
            return true;
    return false;
}

}  // namespace synd
