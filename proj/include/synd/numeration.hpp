#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "synd/automata.hpp"
#include "synd/stream.hpp"

namespace synd {

namespace detail {

class CountMemo {
public:
    explicit CountMemo(const Dfa& d) : counter_(d) {}

    BigInt count(State q, std::size_t n) {
        std::lock_guard lock(mutex_);
        return counter_.count(q, n);
    }

    /// u_q(j) for every state, rows 0..n.
    std::vector<std::vector<BigInt>> rows(std::size_t n) {
        std::lock_guard lock(mutex_);
        std::vector<std::vector<BigInt>> out(n + 1);
        const std::size_t states = counter_.dfa().state_count();
        for (std::size_t j = 0; j <= n; ++j) {
            out[j].resize(states);
            for (State q = 0; q < states; ++q)
                out[j][q] = counter_.count(q, j);
        }
        return out;
    }

private:
    std::mutex mutex_;
    WordCounter counter_;
};

}  // namespace detail

/// S = (L, A, <) for an infinite regular language L, held through its canonical automaton.
class AbstractNumerationSystem {
public:
    explicit AbstractNumerationSystem(const Dfa& any)
        : canonical_(minimize(any)), memo_(std::make_shared<detail::CountMemo>(canonical_)) {
        if (!accepts_infinite_language(canonical_))
            throw Error(ErrorCode::FiniteLanguage, "an abstract numeration system needs an infinite language");
    }

    const Dfa& canonical() const noexcept { return canonical_; }
    const Alphabet& alphabet() const noexcept { return canonical_.alphabet(); }

    /// Number of words of L of length n read from q (exact, memoized, thread-safe).
    BigInt count(State q, std::size_t n) const { return memo_->count(q, n); }
    BigInt count(std::size_t n) const { return count(canonical_.initial(), n); }

private:
    Dfa canonical_;
    std::shared_ptr<detail::CountMemo> memo_;
};

/// Walks the words of a regular language in genealogical order.
class GenealogicalCursor {
public:
    explicit GenealogicalCursor(Dfa d) : dfa_(std::move(d)) {
        live_.push_back(std::vector<bool>(dfa_.state_count()));
        for (State q = 0; q < dfa_.state_count(); ++q)
            live_[0][q] = dfa_.is_final(q);
    }

    /// Advances to the next word; returns the first position that changed, or nullopt when the
    /// language has no further words within `max_length`.
    std::optional<std::size_t> advance(std::size_t max_length = 1u << 20) {
        if (!started_) {
            started_ = true;
            return start_length(0, max_length);
        }
        const std::size_t len = word_.size();
        for (std::size_t i = len; i-- > 0;) {
            const State q = path_[i];
            for (Letter a = word_[i] + 1; a < dfa_.alphabet().size(); ++a) {
                State t = dfa_.next(q, a);
                if (t != kNoState && live(len - i - 1, t)) {
                    word_[i] = a;
                    path_[i + 1] = t;
                    fill_smallest(i + 1);
                    return i;
                }
            }
        }
        return start_length(len + 1, max_length);
    }

    const Word& word() const noexcept { return word_; }

private:
    bool live(std::size_t r, State q) {
        while (live_.size() <= r) {
            const auto& prev = live_.back();
            std::vector<bool> row(dfa_.state_count(), false);
            for (State p = 0; p < dfa_.state_count(); ++p)
                for (Letter a = 0; a < dfa_.alphabet().size() && !row[p]; ++a)
                    if (State t = dfa_.next(p, a); t != kNoState && prev[t])
                        row[p] = true;
            live_.push_back(std::move(row));
        }
        return live_[r][q];
    }

    std::optional<std::size_t> start_length(std::size_t from, std::size_t max_length) {
        for (std::size_t len = from; len <= max_length; ++len) {
            if (!live(len, dfa_.initial()))
                continue;
            word_.assign(len, 0);
            path_.assign(len + 1, kNoState);
            path_[0] = dfa_.initial();
            fill_smallest(0);
            return 0;
        }
        return std::nullopt;
    }

    // Positions [from, len) get the smallest letters that still reach acceptance.
    void fill_smallest(std::size_t from) {
        const std::size_t len = word_.size();
        for (std::size_t i = from; i < len; ++i) {
            const State q = path_[i];
            for (Letter a = 0; a < dfa_.alphabet().size(); ++a) {
                State t = dfa_.next(q, a);
                if (t != kNoState && live(len - i - 1, t)) {
                    word_[i] = a;
                    path_[i + 1] = t;
                    break;
                }
            }
        }
    }

    Dfa dfa_;
    std::vector<std::vector<bool>> live_;
    Word word_;
    std::vector<State> path_;
    bool started_ = false;
};

/// First `count` words of L in genealogical order.
inline std::vector<Word> enumerate(const AbstractNumerationSystem& s, std::size_t count) {
    std::vector<Word> out;
    out.reserve(count);
    GenealogicalCursor cursor(s.canonical());
    while (out.size() < count && cursor.advance())
        out.push_back(cursor.word());
    return out;
}

/// rep_S(n): the (n+1)-th word of L, by length skipping then digit-by-digit descent.
inline Word rep(const AbstractNumerationSystem& s, const BigInt& n) {
    const Dfa& d = s.canonical();
    BigInt remaining = n;
    std::size_t len = 0;
    for (;; ++len) {
        BigInt c = s.count(len);
        if (remaining < c)
            break;
        remaining -= c;
    }
    Word w;
    w.reserve(len);
    State q = d.initial();
    for (std::size_t i = 0; i < len; ++i) {
        for (Letter a = 0; a < d.alphabet().size(); ++a) {
            State t = d.next(q, a);
            if (t == kNoState)
                continue;
            BigInt c = s.count(t, len - i - 1);
            if (remaining < c) {
                w.push_back(a);
                q = t;
                break;
            }
            remaining -= c;
        }
    }
    return w;
}

inline Word rep(const AbstractNumerationSystem& s, std::uint64_t n) { return rep(s, BigInt(n)); }

/// val_S(w) = rep_S^{-1}(w). Throws NotInLanguage for w outside L.
inline BigInt val(const AbstractNumerationSystem& s, const Word& w) {
    const Dfa& d = s.canonical();
    for (Letter a : w)
        if (a >= d.alphabet().size())
            throw Error(ErrorCode::NotInLanguage, "letter outside the alphabet");
    if (!d.accepts(w))
        throw Error(ErrorCode::NotInLanguage, "'" + d.alphabet().format(w) + "' is not in L");
    BigInt v = 0;
    for (std::size_t j = 0; j < w.size(); ++j)
        v += s.count(j);
    State q = d.initial();
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (Letter a = 0; a < w[i]; ++a)
            if (State t = d.next(q, a); t != kNoState)
                v += s.count(t, w.size() - i - 1);
        q = d.next(q, w[i]);
    }
    return v;
}

/// E subset of N given by a complete recognizer of rep_S(E), over the system's alphabet.
class RecognizableSet {
public:
    RecognizableSet(AbstractNumerationSystem system, Dfa recognizer)
        : system_(std::move(system)), recognizer_(std::move(recognizer)) {
        if (!(recognizer_.alphabet() == system_.alphabet()))
            throw Error(ErrorCode::AlphabetMismatch, "recognizer alphabet differs from the system alphabet");
        if (!recognizer_.is_complete())
            throw Error(ErrorCode::NotComplete, "recognizer must be complete");
    }

    const AbstractNumerationSystem& system() const noexcept { return system_; }
    const Dfa& recognizer() const noexcept { return recognizer_; }

    bool contains(const BigInt& n) const { return recognizer_.accepts(rep(system_, n)); }

private:
    AbstractNumerationSystem system_;
    Dfa recognizer_;
};

namespace detail {

class CharacteristicSource final : public StreamSource {
public:
    CharacteristicSource(const Dfa& language, Dfa recognizer)
        : cursor_(language), recognizer_(std::move(recognizer)) {}

    std::optional<Letter> next() override {
        auto changed = cursor_.advance();
        if (!changed)
            return std::nullopt;
        const Word& w = cursor_.word();
        states_.resize(w.size() + 1);
        states_[0] = recognizer_.initial();
        for (std::size_t i = *changed; i < w.size(); ++i)
            states_[i + 1] = recognizer_.next(states_[i], w[i]);
        return recognizer_.is_final(states_[w.size()]) ? 1u : 0u;
    }

    std::unique_ptr<StreamSource> clone() const override {
        return std::make_unique<CharacteristicSource>(*this);
    }

private:
    GenealogicalCursor cursor_;
    Dfa recognizer_;
    std::vector<State> states_;
};

}  // namespace detail

/// chi_E over {0,1}: symbol i is 1 iff rep_S(i) is accepted by the recognizer.
inline SymbolStream characteristic_stream(const RecognizableSet& r) {
    return SymbolStream(binary_alphabet(), std::make_unique<detail::CharacteristicSource>(
                                               r.system().canonical(), r.recognizer()));
}

}  // namespace synd
