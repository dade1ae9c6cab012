#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "synd/growth.hpp"
#include "synd/io.hpp"

using namespace synd;

namespace {

Substitution rules(const char* file) { return load_rules(oracle::data(file)); }

const double kPhi = (1 + std::sqrt(5.0)) / 2;

Substitution random_substitution(std::mt19937& rng, std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i)
        names.push_back(std::string(1, static_cast<char>('a' + i)));
    std::uniform_int_distribution<std::size_t> len(0, 3);
    std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(k - 1));
    std::vector<Word> images(k);
    for (auto& w : images) {
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i)
            w.push_back(letter(rng));
    }
    return Substitution(Alphabet(names), images);
}

bool is_one(const GrowthType& g, std::size_t d) { return g.rate.is_one() && g.degree == d; }

}  // namespace

TEST(GrowthGraph, TauEdges) {
    const auto g = growth_automaton(rules("tau.rules"));
    EXPECT_EQ(g.edges[0], (std::vector<std::uint32_t>{0, 0, 0, 1}));
    EXPECT_EQ(g.edges[1], (std::vector<std::uint32_t>{1, 2}));
    EXPECT_EQ(g.edges[2], (std::vector<std::uint32_t>{1}));
    EXPECT_EQ(g.labeled[0], (Word{0, 0, 0, 1}));
}

TEST(GrowthGraph, ErasingLetterHasNoEdges) {
    EXPECT_TRUE(growth_automaton(rules("erasing.rules")).edges[1].empty());
}

TEST(GrowthGraph, PathCountsAreImageLengths) {
    std::mt19937 rng(7);
    for (int t = 0; t < 5; ++t) {
        const Substitution s = random_substitution(rng, 4);
        const auto g = growth_automaton(s);
        for (Letter a = 0; a < s.size(); ++a)
            EXPECT_EQ(g.path_count(a, 3), BigInt(oracle::expand(s, {a}, 3).size()));
    }
}

TEST(Regularization, Examples) {
    EXPECT_EQ(regularization_power(rules("doubling.rules")), 2u);
    EXPECT_EQ(regularization_power(rules("thue_morse.rules")), 1u);
    EXPECT_EQ(regularization_power(rules("tau.rules")), 1u);
    EXPECT_EQ(regularization_power(parse_rules("a -> b\nb -> c\nc -> aa\n")), 3u);
}

TEST(LetterGrowth, Tau) {
    const auto g = letter_growth(rules("tau.rules"));
    ASSERT_TRUE(g.letters[0].rate.exact_integer().has_value());
    EXPECT_EQ(*g.letters[0].rate.exact_integer(), 3);
    EXPECT_EQ(g.letters[0].degree, 0u);
    for (Letter a : {1u, 2u}) {
        EXPECT_EQ(g.letters[a].degree, 0u);
        EXPECT_NEAR(g.letters[a].rate.to_double(), 1.6180339887, 1e-9);
        EXPECT_LT(g.letters[a].rate.error(), Real(1e-30));
    }
    EXPECT_EQ(g.D, 0u);
    EXPECT_EQ(format_rate(g.Theta), "3");
    EXPECT_EQ(g.A_max, (std::vector<Letter>{0}));
}

TEST(LetterGrowth, PhiMatchesIndependentOracles) {
    const auto g = letter_growth(rules("tau.rules"));
    // Fibonacci ratio from exact lengths |sigma^n(b)|.
    const auto l40 = g.lengths(40), l39 = g.lengths(39);
    const double ratio = static_cast<double>(l40[1]) / static_cast<double>(l39[1]);
    EXPECT_NEAR(ratio, kPhi, 1e-12);
    EXPECT_NEAR(oracle::power_iteration({{1, 1}, {1, 0}}), kPhi, 1e-12);
    EXPECT_NEAR(g.letters[1].rate.to_double(), kPhi, 1e-12);
}

TEST(LetterGrowth, Triangular) {
    const auto g = letter_growth(rules("triangular.rules"));
    EXPECT_TRUE(is_one(g.letters[0], 2));
    EXPECT_TRUE(is_one(g.letters[1], 1));
    EXPECT_TRUE(is_one(g.letters[2], 0));
    EXPECT_TRUE(is_one(g.growth_type(), 2));
    EXPECT_EQ(g.A_max, (std::vector<Letter>{0}));
    // |sigma^n(A)| = n + 1 and |sigma^n(s)| = 1 + (n+1)(n+2)/2 - 1.
    for (std::size_t n = 0; n <= 20; ++n) {
        const auto len = g.lengths(n);
        EXPECT_EQ(len[1], BigInt(n + 1));
        EXPECT_EQ(len[0], BigInt(oracle::expand(g.sigma, {0}, n).size()));
    }
}

TEST(LetterGrowth, ThueMorse) {
    const auto g = letter_growth(rules("thue_morse.rules"));
    for (Letter a : {0u, 1u}) {
        EXPECT_EQ(g.letters[a].degree, 0u);
        EXPECT_EQ(*g.letters[a].rate.exact_integer(), 2);
    }
    EXPECT_EQ(g.A_max, (std::vector<Letter>{0, 1}));
}

TEST(LetterGrowth, MortalLettersFlagged) {
    const auto g = letter_growth(rules("erasing.rules"));
    EXPECT_TRUE(g.mortal[1]);
    EXPECT_FALSE(g.mortal[0]);
    EXPECT_TRUE(is_one(g.letters[0], 1));
    EXPECT_TRUE(is_one(g.letters[2], 0));
}

TEST(LetterGrowth, RegularizedRatesArePowers) {
    const auto g = letter_growth(rules("doubling.rules"));
    EXPECT_EQ(g.p, 2u);
    EXPECT_EQ(*g.Theta.exact_integer(), 4);
}

TEST(SubstitutionGrowth, PowersOfSigma) {
    for (const char* f : {"tau.rules", "thue_morse.rules", "triangular.rules", "fibonacci.rules"}) {
        const auto g = letter_growth(rules(f));
        for (std::uint64_t k : {2u, 3u}) {
            const auto gk = letter_growth(power(rules(f), k));
            EXPECT_EQ(gk.D, g.D) << f;
            EXPECT_TRUE(rates_equal(gk.Theta, g.Theta.pow(k))) << f << " k=" << k;
            // interval containment both ways at working precision
            if (g.Theta.is_root()) {
                const auto tk = g.Theta.pow(k);
                EXPECT_LE(gk.Theta.lower(), tk.upper());
                EXPECT_LE(tk.lower(), gk.Theta.upper());
            }
        }
    }
}

TEST(Lambda, Basics) {
    const auto g = letter_growth(rules("thue_morse.rules"));
    EXPECT_EQ(lambda(g, {}).value, 0);
    const auto l = lambda(g, {0, 1});
    EXPECT_LT(abs(l.value - 2), Real(1e-20));
}

TEST(Lambda, MatchesDirectIteration) {
    std::mt19937 rng(11);
    for (const char* f : {"tau.rules", "thue_morse.rules", "fibonacci.rules"}) {
        const auto g = letter_growth(rules(f));
        std::uniform_int_distribution<Letter> letter(0, static_cast<Letter>(g.sigma.size() - 1));
        for (int t = 0; t < 5; ++t) {
            Word u;
            for (int i = 0; i < 6; ++i)
                u.push_back(letter(rng));
            const auto l = lambda(g, u);
            const std::size_t n = 30;
            const auto len = g.lengths(n);
            Real total = 0;
            for (Letter a : u)
                total += Real(len[a]);
            const Real scaled = total / (pow(Real(n), Real(g.D)) * pow(g.Theta.approx(), Real(n)));
            EXPECT_LE(abs(scaled - l.value), l.error + Real(1e-6)) << f;
        }
    }
}

TEST(Lambda, Additive) {
    const auto g = letter_growth(rules("tau.rules"));
    const Word uv{0, 1, 2, 0, 0, 2, 1};
    for (std::size_t cut = 0; cut <= uv.size(); ++cut) {
        const Word u(uv.begin(), uv.begin() + static_cast<std::ptrdiff_t>(cut));
        const Word v(uv.begin() + static_cast<std::ptrdiff_t>(cut), uv.end());
        EXPECT_LT(abs(lambda(g, uv).value - lambda(g, u).value - lambda(g, v).value), Real(1e-60));
    }
}

TEST(AutomatonGrowth, AstarBstar) {
    const auto g = automaton_growth(minimize(load_dfa(oracle::data("astarbstar.dfa"))));
    EXPECT_TRUE(is_one(g.system, 1));
    EXPECT_TRUE(is_one(g.associated_substitution(), 2));
    EXPECT_TRUE(is_one(letter_growth(rules("triangular.rules")).growth_type(), 2));
}

TEST(AutomatonGrowth, Kary) {
    for (int k : {2, 3}) {
        const std::string f = "kary" + std::to_string(k) + ".dfa";
        const auto g = automaton_growth(minimize(load_dfa(oracle::data(f))));
        EXPECT_EQ(g.system.degree, 0u);
        ASSERT_TRUE(g.system.rate.exact_integer().has_value());
        EXPECT_EQ(*g.system.rate.exact_integer(), k);
        EXPECT_EQ(count_words(load_dfa(oracle::data(f)), 0, 5), BigInt((k - 1) * static_cast<int>(std::pow(k, 4))));
    }
}

TEST(AutomatonGrowth, FibonacciLanguage) {
    const auto g = automaton_growth(load_dfa(oracle::data("fibonacci.dfa")));
    EXPECT_EQ(g.system.degree, 0u);
    EXPECT_NEAR(g.system.rate.to_double(), kPhi, 1e-12);
}

TEST(AutomatonGrowth, NotTrim) {
    const Dfa d = parse_dfa_text("alphabet: a\ninitial: A\nfinals: A\ntrans: A a A\ntrans: B a B\n");
    try {
        automaton_growth(d);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotTrim);
    }
}

TEST(Compare, OrderAndCertificate) {
    const auto phi = AlgebraicRate::root(IntMatrix::from_rows({{1, 1}, {1, 0}}));
    const auto phi2 = AlgebraicRate::root(IntMatrix::from_rows({{2, 1}, {1, 1}}));
    EXPECT_EQ(compare(phi.pow(2), phi2), std::strong_ordering::equal);
    EXPECT_EQ(compare(phi, phi2), std::strong_ordering::less);
    EXPECT_EQ(compare(AlgebraicRate::one(), phi), std::strong_ordering::less);
    EXPECT_EQ(compare(AlgebraicRate::zero(), AlgebraicRate::one()), std::strong_ordering::less);
    const auto s2 = AlgebraicRate::root(IntMatrix::from_rows({{0, 2}, {1, 0}}));  // sqrt 2
    EXPECT_EQ(compare(s2.pow(2), AlgebraicRate::integer(2)), std::strong_ordering::equal);
}

TEST(Compare, RefinementShrinksError) {
    const auto r = AlgebraicRate::root(IntMatrix::from_rows({{1, 1}, {1, 0}}), 64);
    const auto fine = r.refined(200);
    EXPECT_LT(fine.error(), r.error());
    EXPECT_LT(fine.error(), pow(Real(2), Real(-199)));
    EXPECT_GE(fine.approx(), Real(1) - fine.error());
}

TEST(Growth, PolynomialHasBoundedLetter) {
    for (const char* f : {"triangular.rules", "aab.rules", "erasing.rules"}) {
        const auto g = letter_growth(rules(f));
        if (!g.Theta.is_one())
            continue;
        std::size_t least = SIZE_MAX;
        for (Letter a = 0; a < g.sigma.size(); ++a)
            if (!g.mortal[a])
                least = std::min(least, g.letters[a].degree);
        EXPECT_EQ(least, 0u) << f;
    }
}
