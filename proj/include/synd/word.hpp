#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synd/error.hpp"

namespace synd {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// Totally ordered finite alphabet; the order is the index order.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty())
                throw Error(ErrorCode::InvalidArgument, "empty letter name");
            if (!index_.emplace(names_[i], static_cast<Letter>(i)).second)
                throw Error(ErrorCode::InvalidArgument, "duplicate letter '" + names_[i] + "'");
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::string& name(Letter a) const { return names_.at(a); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<Letter> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    Letter at(std::string_view name) const {
        if (auto a = find(name))
            return *a;
        throw Error(ErrorCode::InvalidArgument, "unknown letter '" + std::string(name) + "'");
    }

    /// True when every name is a single character, so words print without separators.
    bool compact() const {
        return std::all_of(names_.begin(), names_.end(),
                           [](const std::string& n) { return n.size() == 1; });
    }

    std::string format(const Word& w) const {
        std::string out;
        const bool tight = compact();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!tight && i)
                out += ' ';
            out += name(w[i]);
        }
        return out;
    }

    /// Parses a word: whitespace-separated tokens if any whitespace, else one letter per character.
    Word parse(std::string_view text) const {
        Word w;
        const bool spaced = text.find_first_of(" \t") != std::string_view::npos;
        if (spaced) {
            std::size_t i = 0;
            while (i < text.size()) {
                while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
                    ++i;
                std::size_t j = i;
                while (j < text.size() && text[j] != ' ' && text[j] != '\t')
                    ++j;
                if (j > i)
                    w.push_back(at(text.substr(i, j - i)));
                i = j;
            }
        } else {
            for (char c : text)
                w.push_back(at(std::string_view(&c, 1)));
        }
        return w;
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Letter> index_;
};

/// Genealogical (radix) order: shorter first, then lexicographic in letter order.
inline bool genealogically_less(const Word& u, const Word& v) {
    if (u.size() != v.size())
        return u.size() < v.size();
    return u < v;
}

}  // namespace synd
