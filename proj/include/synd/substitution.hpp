#pragma once

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "synd/automata.hpp"
#include "synd/graph.hpp"
#include "synd/numeration.hpp"
#include "synd/stream.hpp"

namespace synd {

/// Morphism from words over `source` to words over `target`; images may be empty.
class Morphism {
public:
    Morphism() = default;
    Morphism(Alphabet source, Alphabet target, std::vector<Word> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
        if (images_.size() != source_.size())
            throw Error(ErrorCode::InvalidMap, "morphism must give an image for every source letter");
        for (const Word& w : images_)
            for (Letter b : w)
                if (b >= target_.size())
                    throw Error(ErrorCode::InvalidMap, "image letter outside the target alphabet");
    }

    static Morphism identity(const Alphabet& a) {
        std::vector<Word> images(a.size());
        for (Letter x = 0; x < a.size(); ++x)
            images[x] = {x};
        return Morphism(a, a, std::move(images));
    }

    const Alphabet& source() const noexcept { return source_; }
    const Alphabet& target() const noexcept { return target_; }
    const Word& image(Letter a) const { return images_.at(a); }
    const std::vector<Word>& images() const noexcept { return images_; }

    bool letter_to_letter() const {
        return std::all_of(images_.begin(), images_.end(), [](const Word& w) { return w.size() == 1; });
    }

    Word apply(const Word& w) const {
        Word out;
        for (Letter a : w) {
            const Word& img = images_.at(a);
            out.insert(out.end(), img.begin(), img.end());
        }
        return out;
    }

    friend bool operator==(const Morphism& a, const Morphism& b) {
        return a.source_ == b.source_ && a.target_ == b.target_ && a.images_ == b.images_;
    }

private:
    Alphabet source_;
    Alphabet target_;
    std::vector<Word> images_;
};

/// Endomorphism of A*; erasing images are allowed.
class Substitution {
public:
    Substitution() = default;
    Substitution(Alphabet alphabet, std::vector<Word> images)
        : alphabet_(std::move(alphabet)), images_(std::move(images)) {
        if (images_.size() != alphabet_.size())
            throw Error(ErrorCode::InvalidMap, "substitution must give an image for every letter");
        for (const Word& w : images_)
            for (Letter b : w)
                if (b >= alphabet_.size())
                    throw Error(ErrorCode::InvalidMap, "image letter outside the alphabet");
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return alphabet_.size(); }
    const Word& image(Letter a) const { return images_.at(a); }
    const std::vector<Word>& images() const noexcept { return images_; }

    bool erasing() const {
        return std::any_of(images_.begin(), images_.end(), [](const Word& w) { return w.empty(); });
    }

    Word apply(const Word& w) const {
        Word out;
        for (Letter a : w) {
            const Word& img = images_[a];
            out.insert(out.end(), img.begin(), img.end());
        }
        return out;
    }

    Word iterate(const Word& w, std::size_t n) const {
        Word cur = w;
        for (std::size_t i = 0; i < n; ++i)
            cur = apply(cur);
        return cur;
    }

    Morphism as_morphism() const { return Morphism(alphabet_, alphabet_, images_); }

    /// a -> b edge for every occurrence of b in sigma(a).
    Digraph letter_graph() const {
        Digraph g(size());
        for (Letter a = 0; a < size(); ++a)
            for (Letter b : images_[a])
                g[a].push_back(b);
        return g;
    }

    /// Incidence matrix: entry (b, a) = |sigma(a)|_b.
    IntMatrix matrix() const {
        IntMatrix m(size(), size());
        for (Letter a = 0; a < size(); ++a)
            for (Letter b : images_[a])
                m(b, a) += 1;
        return m;
    }

    friend bool operator==(const Substitution& a, const Substitution& b) {
        return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> images_;
};

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (Letter a : w) {
            h ^= a + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Exact combinatorial boundedness of |sigma^n(a)| read off the letter graph.
struct LetterDynamics {
    std::vector<bool> mortal;     // sigma^n(a) is eventually empty
    std::vector<bool> unbounded;  // |sigma^n(a)| -> infinity
};

inline LetterDynamics letter_dynamics(const Substitution& sigma) {
    const Digraph g = sigma.letter_graph();
    const Sccs sccs = strongly_connected_components(g);
    const auto dag = condensation(g, sccs);
    const std::size_t nc = sccs.count();
    std::vector<bool> nonmortal(nc, false), unbounded(nc, false);
    for (std::uint32_t c = 0; c < nc; ++c) {  // successors have smaller ids
        const std::size_t e = internal_edges(g, sccs, c);
        const bool cyclic = e > 0;
        const bool expanding = e > sccs.members[c].size();
        bool succ_nonmortal = false, succ_unbounded = false;
        for (std::uint32_t d : dag[c]) {
            succ_nonmortal = succ_nonmortal || nonmortal[d];
            succ_unbounded = succ_unbounded || unbounded[d];
        }
        nonmortal[c] = cyclic || succ_nonmortal;
        unbounded[c] = expanding || succ_unbounded || (cyclic && succ_nonmortal);
    }
    LetterDynamics out;
    out.mortal.resize(sigma.size());
    out.unbounded.resize(sigma.size());
    for (Letter a = 0; a < sigma.size(); ++a) {
        out.mortal[a] = !nonmortal[sccs.component[a]];
        out.unbounded[a] = unbounded[sccs.component[a]];
    }
    return out;
}

/// Every letter occurs in the fixed point seeded at a (reachability from a).
inline bool is_proper_seed(const Substitution& sigma, Letter a) {
    std::vector<bool> seen(sigma.size(), false);
    std::vector<Letter> stack{a};
    seen[a] = true;
    while (!stack.empty()) {
        Letter b = stack.back();
        stack.pop_back();
        for (Letter c : sigma.image(b))
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

/// sigma_M over {s} u Q: letter 0 is the fresh letter s, letter q+1 is state q.
inline Substitution canonical_substitution(const Dfa& d, const std::string& fresh = "s") {
    if (d.find_state(fresh))
        throw Error(ErrorCode::SymbolClash, "fresh letter '" + fresh + "' is already a state name");
    std::vector<std::string> names{fresh};
    for (const auto& n : d.state_names())
        names.push_back(n);
    std::vector<Word> images(names.size());
    images[0] = {0, d.initial() + 1};
    for (State q = 0; q < d.state_count(); ++q)
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState)
                images[q + 1].push_back(t + 1);
    return Substitution(Alphabet(std::move(names)), std::move(images));
}

/// f : {s} u Q -> {0,1}*, with s -> eps, q -> 1 on F, q -> 0 on Phi^{-1}(F') \ F, eps elsewhere.
/// The source alphabet is that of canonical_substitution(m, fresh).
inline Morphism char_morphism(const Dfa& m, const StateMap& phi, const Dfa& canonical,
                              const std::string& fresh = "s") {
    if (phi.mapping.size() != m.state_count() || phi.target_states != canonical.state_count())
        throw Error(ErrorCode::InvalidMap, "state map does not match the automata");
    for (State q = 0; q < m.state_count(); ++q) {
        if (phi(q) >= canonical.state_count())
            throw Error(ErrorCode::InvalidMap, "state map target out of range");
        for (Letter a = 0; a < m.alphabet().size(); ++a) {
            State t = m.next(q, a);
            State tc = canonical.next(phi(q), a);
            if ((t == kNoState) != (tc == kNoState) || (t != kNoState && phi(t) != tc))
                throw Error(ErrorCode::InvalidMap, "state map is not transition-compatible");
        }
    }
    if (phi(m.initial()) != canonical.initial() || !phi.onto())
        throw Error(ErrorCode::InvalidMap, "state map is not an L-automaton map");

    const Substitution sigma = canonical_substitution(m, fresh);
    std::vector<Word> images(sigma.size());
    for (State q = 0; q < m.state_count(); ++q) {
        if (m.is_final(q))
            images[q + 1] = {1};
        else if (canonical.is_final(phi(q)))
            images[q + 1] = {0};
    }
    return Morphism(sigma.alphabet(), binary_alphabet(), std::move(images));
}

namespace detail {

class FixedPointSource final : public StreamSource {
public:
    FixedPointSource(std::vector<Word> images, Letter seed) : images_(std::move(images)) {
        buffer_ = images_[seed];
        expand_ = 1;
    }

    std::optional<Letter> next() override {
        while (pos_ >= base_ + buffer_.size()) {
            if (expand_ >= base_ + buffer_.size())
                return std::nullopt;
            const Word& img = images_[buffer_[expand_ - base_]];
            buffer_.insert(buffer_.end(), img.begin(), img.end());
            ++expand_;
        }
        Letter a = buffer_[pos_ - base_];
        ++pos_;
        const std::uint64_t keep_from = std::min(pos_, expand_);
        if (keep_from - base_ > (1u << 16) && keep_from - base_ > buffer_.size() / 2) {
            buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(keep_from - base_));
            base_ = keep_from;
        }
        return a;
    }

    std::unique_ptr<StreamSource> clone() const override { return std::make_unique<FixedPointSource>(*this); }

private:
    std::vector<Word> images_;
    Word buffer_;
    std::uint64_t base_ = 0;    // absolute index of buffer_[0]
    std::uint64_t expand_ = 0;  // absolute index of the next letter to expand
    std::uint64_t pos_ = 0;     // absolute index of the next output
};

class ProjectionSource final : public StreamSource {
public:
    ProjectionSource(std::vector<Word> images, SymbolStream inner, std::uint64_t stall_bound)
        : images_(std::move(images)), inner_(std::move(inner)), stall_bound_(stall_bound) {}

    std::optional<Letter> next() override {
        std::uint64_t erased = 0;
        while (pending_at_ >= pending_.size()) {
            auto a = inner_.try_next();
            if (!a)
                return std::nullopt;
            pending_ = images_.at(*a);
            pending_at_ = 0;
            if (pending_.empty() && ++erased >= stall_bound_)
                throw Error(ErrorCode::Stalled, std::to_string(erased) +
                                                    " consecutive input symbols produced no output");
        }
        return pending_[pending_at_++];
    }

    std::unique_ptr<StreamSource> clone() const override { return std::make_unique<ProjectionSource>(*this); }

private:
    std::vector<Word> images_;
    SymbolStream inner_;
    std::uint64_t stall_bound_;
    Word pending_;
    std::size_t pending_at_ = 0;
};

}  // namespace detail

/// x = lim sigma^n(a), generated by on-demand expansion of the frontier.
inline SymbolStream fixed_point(const Substitution& sigma, Letter a) {
    if (a >= sigma.size())
        throw Error(ErrorCode::InvalidArgument, "seed outside the alphabet");
    if (sigma.image(a).empty() || sigma.image(a).front() != a)
        throw Error(ErrorCode::NotProlongable,
                    "image of '" + sigma.alphabet().name(a) + "' does not start with it");
    if (!letter_dynamics(sigma).unbounded[a])
        throw Error(ErrorCode::NotGrowing,
                    "|sigma^n(" + sigma.alphabet().name(a) + ")| stays bounded");
    return SymbolStream(sigma.alphabet(), std::make_unique<detail::FixedPointSource>(sigma.images(), a));
}

inline constexpr std::uint64_t kDefaultStallBound = 1'000'000;

/// m(x); raises Stalled once `stall_bound` consecutive input symbols are erased.
inline SymbolStream project(const Morphism& m, SymbolStream x, std::uint64_t stall_bound = kDefaultStallBound) {
    if (x.alphabet().size() > m.source().size())
        throw Error(ErrorCode::AlphabetMismatch, "morphism source does not cover the stream alphabet");
    return SymbolStream(m.target(), std::make_unique<detail::ProjectionSource>(m.images(), std::move(x), stall_bound));
}

/// sigma^k (k >= 1), by repeated squaring of the image table.
inline Substitution power(const Substitution& sigma, std::uint64_t k) {
    if (k == 0)
        throw Error(ErrorCode::InvalidArgument, "power exponent must be at least 1");
    std::vector<Word> result;
    bool have_result = false;
    std::vector<Word> base = sigma.images();
    auto compose = [&](const std::vector<Word>& outer, const std::vector<Word>& inner) {
        // (outer o inner)(a) = outer(inner(a))
        std::vector<Word> out(inner.size());
        for (std::size_t a = 0; a < inner.size(); ++a)
            for (Letter b : inner[a])
                out[a].insert(out[a].end(), outer[b].begin(), outer[b].end());
        return out;
    };
    while (k) {
        if (k & 1) {
            result = have_result ? compose(base, result) : base;
            have_result = true;
        }
        k >>= 1;
        if (k)
            base = compose(base, base);
    }
    return Substitution(sigma.alphabet(), std::move(result));
}

struct MortalLetters {
    std::vector<Letter> letters;  // ascending
    std::size_t depth = 0;        // least l with sigma^l(b) = eps for every mortal b
};

inline MortalLetters mortal_letters(const Substitution& sigma) {
    std::vector<bool> dead(sigma.size(), false);
    std::size_t depth = 0;
    for (;;) {
        std::vector<bool> next(sigma.size(), false);
        bool grew = false;
        for (Letter a = 0; a < sigma.size(); ++a) {
            const Word& img = sigma.image(a);
            next[a] = std::all_of(img.begin(), img.end(), [&](Letter b) { return dead[b]; });
            grew = grew || (next[a] && !dead[a]);
        }
        if (!grew)
            break;
        dead = std::move(next);
        ++depth;
    }
    MortalLetters out;
    out.depth = depth;
    for (Letter a = 0; a < sigma.size(); ++a)
        if (dead[a])
            out.letters.push_back(a);
    return out;
}

struct ErasingElimination {
    Substitution tau;  // over the non-mortal letters, original order kept
    Morphism zeta;     // A -> (A \ B)*, erasing B
    Letter seed;       // image of the seed in tau's alphabet
    std::size_t depth; // l from mortal_letters
};

/// tau(c) = zeta(sigma^l(c)) on surviving letters (sigma itself when nothing is mortal).
inline ErasingElimination eliminate_erasing(const Substitution& sigma, Letter a) {
    const MortalLetters mortal = mortal_letters(sigma);
    std::vector<bool> dead(sigma.size(), false);
    for (Letter b : mortal.letters)
        dead[b] = true;
    if (dead.at(a))
        throw Error(ErrorCode::SeedMortal, "seed '" + sigma.alphabet().name(a) + "' is mortal");
    if (sigma.image(a).empty() || sigma.image(a).front() != a)
        throw Error(ErrorCode::NotProlongable,
                    "image of '" + sigma.alphabet().name(a) + "' does not start with it");

    std::vector<Letter> renum(sigma.size(), kNoState);
    std::vector<std::string> names;
    for (Letter b = 0; b < sigma.size(); ++b)
        if (!dead[b]) {
            renum[b] = static_cast<Letter>(names.size());
            names.push_back(sigma.alphabet().name(b));
        }
    Alphabet survivors(names);
    std::vector<Word> zeta_images(sigma.size());
    for (Letter b = 0; b < sigma.size(); ++b)
        if (!dead[b])
            zeta_images[b] = {renum[b]};
    Morphism zeta(sigma.alphabet(), survivors, zeta_images);

    const Substitution step = power(sigma, std::max<std::size_t>(mortal.depth, 1));
    std::vector<Word> tau_images;
    for (Letter b = 0; b < sigma.size(); ++b)
        if (!dead[b])
            tau_images.push_back(zeta.apply(step.image(b)));
    return {Substitution(survivors, std::move(tau_images)), std::move(zeta), renum[a], mortal.depth};
}

/// Least N, a multiple of the lcm of the per-letter eventual periods of n -> Delta(sigma^n(a)),
/// with Delta((sigma^N)^n(a)) = Delta(sigma^N(a)) for every a and n >= 1.
/// Runs on the letter-set abstraction only.
inline std::uint64_t stabilization_power(const Substitution& sigma) {
    if (sigma.erasing())
        throw Error(ErrorCode::Erasing, "stabilization needs a non-erasing substitution");
    using Set = std::vector<bool>;
    const std::size_t k = sigma.size();
    std::vector<Set> delta1(k, Set(k, false));
    for (Letter a = 0; a < k; ++a)
        for (Letter b : sigma.image(a))
            delta1[a][b] = true;
    auto step = [&](const Set& s) {
        Set out(k, false);
        for (Letter b = 0; b < k; ++b)
            if (s[b])
                for (Letter c = 0; c < k; ++c)
                    if (delta1[b][c])
                        out[c] = true;
        return out;
    };

    struct Orbit {
        std::vector<Set> seq;  // seq[i] = Delta(sigma^{i+1}(a))
        std::uint64_t pre;     // periodic from index pre (1-based exponent pre+1)
        std::uint64_t period;
        const Set& at(std::uint64_t n) const {  // n >= 1
            std::uint64_t i = n - 1;
            if (i >= pre)
                i = pre + (i - pre) % period;
            return seq[i];
        }
    };
    std::vector<Orbit> orbits;
    std::uint64_t lcm = 1;
    std::uint64_t max_pre = 0;
    for (Letter a = 0; a < k; ++a) {
        Orbit o;
        std::map<Set, std::uint64_t> seen;
        Set cur = delta1[a];
        for (std::uint64_t i = 0;; ++i) {
            auto [it, fresh] = seen.emplace(cur, i);
            if (!fresh) {
                o.pre = it->second;
                o.period = i - it->second;
                break;
            }
            o.seq.push_back(cur);
            cur = step(cur);
        }
        lcm = std::lcm(lcm, o.period);
        max_pre = std::max(max_pre, o.pre + 1);
        orbits.push_back(std::move(o));
    }
    for (std::uint64_t mult = 1;; ++mult) {
        const std::uint64_t n = mult * lcm;
        bool ok = true;
        for (const Orbit& o : orbits) {
            const Set& base = o.at(n);
            for (std::uint64_t j = 2; ok; ++j) {
                ok = o.at(j * n) == base;
                if (j * n >= o.pre + 1 + n)
                    break;
            }
            if (!ok)
                break;
        }
        if (ok)
            return n;
        if (n > max_pre + lcm)
            throw Error(ErrorCode::InvalidArgument, "stabilization search did not terminate");
    }
}

struct BlockSubstitution {
    Substitution sigma_n;          // over the length-n factors reachable from x's first block
    Morphism rho;                  // block -> its first letter
    std::vector<Word> blocks;      // blocks[i] is letter i of sigma_n
    Letter seed = 0;               // the block x_[0,n)
};

inline constexpr std::uint64_t kDefaultBlockScanBound = 1'000'000;

/// sigma_n((a_1..a_n)) = (b_1..b_n)(b_2..b_{n+1})...(b_{|sigma(a_1)|}..b_{|sigma(a_1)|+n-1}).
/// Every discovered block is checked to occur in x within `scan_bound` symbols.
inline BlockSubstitution block_substitution(const Substitution& sigma, SymbolStream x, std::size_t n,
                                            std::uint64_t scan_bound = kDefaultBlockScanBound) {
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "block length must be at least 1");
    if (sigma.erasing())
        throw Error(ErrorCode::Erasing, "block substitution needs a non-erasing substitution");

    Word window = x.take(n);
    if (window.size() < n)
        throw Error(ErrorCode::StreamExhausted, "stream shorter than the block length");
    std::unordered_set<Word, WordHash> factors{window};
    std::uint64_t scanned = n;
    auto occurs = [&](const Word& b) {
        while (!factors.count(b)) {
            if (scanned >= scan_bound)
                return false;
            auto a = x.try_next();
            if (!a)
                return false;
            ++scanned;
            window.erase(window.begin());
            window.push_back(*a);
            factors.insert(window);
        }
        return true;
    };

    std::vector<Word> blocks{window};
    std::map<Word, Letter> id{{window, 0}};
    std::vector<Word> images;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Word blk = blocks[i];
        const Word img = sigma.apply(blk);
        const std::size_t first = sigma.image(blk.front()).size();
        Word out;
        for (std::size_t j = 0; j < first; ++j) {
            Word b(img.begin() + static_cast<std::ptrdiff_t>(j), img.begin() + static_cast<std::ptrdiff_t>(j + n));
            auto it = id.find(b);
            if (it == id.end()) {
                if (!occurs(b))
                    throw Error(ErrorCode::BlockNotInFixedPoint,
                                "block '" + sigma.alphabet().format(b) + "' not found within the scan bound");
                it = id.emplace(b, static_cast<Letter>(blocks.size())).first;
                blocks.push_back(b);
            }
            out.push_back(it->second);
        }
        images.push_back(std::move(out));
    }

    std::vector<std::string> names;
    const bool tight = sigma.alphabet().compact();
    for (const Word& b : blocks) {
        if (tight) {
            names.push_back(sigma.alphabet().format(b));
        } else {
            std::string s = "(";
            for (std::size_t j = 0; j < b.size(); ++j)
                s += (j ? "," : "") + sigma.alphabet().name(b[j]);
            names.push_back(s + ")");
        }
    }
    Alphabet block_alphabet(names);
    std::vector<Word> rho_images;
    for (const Word& b : blocks)
        rho_images.push_back({b.front()});
    return {Substitution(block_alphabet, std::move(images)),
            Morphism(block_alphabet, sigma.alphabet(), std::move(rho_images)), std::move(blocks), 0};
}

/// rho(sigma_n(B)) = sigma(rho(B)) for every block letter B.
inline bool intertwines(const Substitution& sigma, const BlockSubstitution& bs) {
    for (Letter b = 0; b < bs.sigma_n.size(); ++b)
        if (bs.rho.apply(bs.sigma_n.image(b)) != sigma.apply(bs.rho.image(b)))
            return false;
    return true;
}

/// Substitutive presentation of a recognizable set: chi_E = f(fixed point of sigma at seed).
struct SubstitutivePresentation {
    Dfa l_automaton;  // accessible part of the product with the canonical automaton
    StateMap phi;
    Substitution sigma;
    Letter seed = 0;
    Morphism f;
};

inline SubstitutivePresentation substitutive_presentation(const RecognizableSet& r) {
    const Dfa& canonical = r.system().canonical();
    auto [product, phi] = product_L_automaton(r.recognizer(), canonical);
    const auto reach = detail::forward_reach(product);
    Dfa accessible = detail::restrict_to(product, reach);
    StateMap accessible_phi{{}, phi.target_states};
    for (State q = 0; q < product.state_count(); ++q)
        if (reach[q])
            accessible_phi.mapping.push_back(phi(q));
    std::string fresh = "s";
    while (accessible.find_state(fresh))
        fresh += "'";
    Substitution sigma = canonical_substitution(accessible, fresh);
    Morphism f = char_morphism(accessible, accessible_phi, canonical, fresh);
    return {std::move(accessible), std::move(accessible_phi), std::move(sigma), 0, std::move(f)};
}

}  // namespace synd
