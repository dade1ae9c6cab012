#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "synd/error.hpp"
#include "synd/word.hpp"

namespace synd {

/// Generator behind a SymbolStream. `next` returns nullopt once a finite source is exhausted.
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual std::optional<Letter> next() = 0;
    virtual std::unique_ptr<StreamSource> clone() const = 0;
};

/// Single-consumer cursor over a (usually infinite) sequence. Copying clones the cursor;
/// the copy continues from the same position and yields identical symbols.
class SymbolStream {
public:
    SymbolStream(Alphabet alphabet, std::unique_ptr<StreamSource> source)
        : alphabet_(std::move(alphabet)), source_(std::move(source)) {}

    SymbolStream(const SymbolStream& other)
        : alphabet_(other.alphabet_), source_(other.source_->clone()), position_(other.position_) {}
    SymbolStream& operator=(const SymbolStream& other) {
        if (this != &other) {
            alphabet_ = other.alphabet_;
            source_ = other.source_->clone();
            position_ = other.position_;
        }
        return *this;
    }
    SymbolStream(SymbolStream&&) noexcept = default;
    SymbolStream& operator=(SymbolStream&&) noexcept = default;

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::uint64_t position() const noexcept { return position_; }

    std::optional<Letter> try_next() {
        auto a = source_->next();
        if (a)
            ++position_;
        return a;
    }

    Letter next() {
        if (auto a = try_next())
            return *a;
        throw Error(ErrorCode::StreamExhausted, "stream ended at position " + std::to_string(position_));
    }

    /// Up to n further symbols (fewer only if the stream is finite).
    Word take(std::size_t n) {
        Word w;
        w.reserve(n);
        while (w.size() < n) {
            auto a = try_next();
            if (!a)
                break;
            w.push_back(*a);
        }
        return w;
    }

private:
    Alphabet alphabet_;
    std::unique_ptr<StreamSource> source_;
    std::uint64_t position_ = 0;
};

namespace detail {

class PeriodicSource final : public StreamSource {
public:
    PeriodicSource(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {}
    std::optional<Letter> next() override {
        if (i_ < prefix_.size())
            return prefix_[i_++];
        if (period_.empty())
            return std::nullopt;
        Letter a = period_[(i_ - prefix_.size()) % period_.size()];
        ++i_;
        return a;
    }
    std::unique_ptr<StreamSource> clone() const override { return std::make_unique<PeriodicSource>(*this); }

private:
    Word prefix_;
    Word period_;
    std::uint64_t i_ = 0;
};

class FunctionSource final : public StreamSource {
public:
    explicit FunctionSource(std::function<Letter(std::uint64_t)> f) : f_(std::move(f)) {}
    std::optional<Letter> next() override { return f_(i_++); }
    std::unique_ptr<StreamSource> clone() const override { return std::make_unique<FunctionSource>(*this); }

private:
    std::function<Letter(std::uint64_t)> f_;
    std::uint64_t i_ = 0;
};

/// t_i = 1 iff the window of |u| symbols starting at i equals u.
class WindowIndicatorSource final : public StreamSource {
public:
    WindowIndicatorSource(SymbolStream inner, Word u) : inner_(std::move(inner)), u_(std::move(u)) {}
    std::optional<Letter> next() override {
        while (window_.size() < u_.size()) {
            auto a = inner_.try_next();
            if (!a)
                return std::nullopt;
            window_.push_back(*a);
        }
        // window_ is a ring of |u| symbols starting at head_.
        bool match = true;
        for (std::size_t j = 0; j < u_.size() && match; ++j)
            match = window_[(head_ + j) % u_.size()] == u_[j];
        auto a = inner_.try_next();
        if (a) {
            window_[head_] = *a;
            head_ = (head_ + 1) % u_.size();
        } else {
            window_.pop_back();  // forces exhaustion on the next call
        }
        return match ? 1u : 0u;
    }
    std::unique_ptr<StreamSource> clone() const override {
        return std::make_unique<WindowIndicatorSource>(*this);
    }

private:
    SymbolStream inner_;
    Word u_;
    Word window_;
    std::size_t head_ = 0;
};

}  // namespace detail

inline Alphabet binary_alphabet() { return Alphabet({"0", "1"}); }

/// prefix * period^omega (finite when period is empty).
inline SymbolStream periodic_stream(const Alphabet& alphabet, Word prefix, Word period) {
    return SymbolStream(alphabet, std::make_unique<detail::PeriodicSource>(std::move(prefix), std::move(period)));
}

inline SymbolStream function_stream(const Alphabet& alphabet, std::function<Letter(std::uint64_t)> f) {
    return SymbolStream(alphabet, std::make_unique<detail::FunctionSource>(std::move(f)));
}

/// Indicator stream of occurrences of u in x, over {0,1}.
inline SymbolStream occurrence_stream(SymbolStream x, Word u) {
    if (u.empty())
        throw Error(ErrorCode::InvalidArgument, "factor must be non-empty");
    return SymbolStream(binary_alphabet(),
                        std::make_unique<detail::WindowIndicatorSource>(std::move(x), std::move(u)));
}

}  // namespace synd
