#include <gtest/gtest.h>

#include "oracles.hpp"
#include "synd/io.hpp"
#include "synd/numeration.hpp"
#include "synd/substitution.hpp"

using namespace synd;

namespace {

Substitution rules(const char* file) { return load_rules(oracle::data(file)); }

std::string image_text(const Substitution& s, const std::string& letter) {
    const Word& w = s.image(s.alphabet().at(letter));
    return w.empty() ? "." : s.alphabet().format(w);
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Parse;  // sentinel: nothing thrown
}

}  // namespace

TEST(Canonical, AstarBstar) {
    const Substitution s = canonical_substitution(minimize(load_dfa(oracle::data("astarbstar.dfa"))));
    EXPECT_EQ(s, rules("triangular.rules"));
    EXPECT_EQ(write_rules(s), "alphabet: s < A < B\ns -> sA\nA -> AB\nB -> B\n");
}

TEST(Canonical, StateWithoutTransitionsIsErased) {
    const Dfa d = parse_dfa_text("alphabet: a\ninitial: P\nfinals: Q\ntrans: P a Q\n");
    const Substitution s = canonical_substitution(d);
    EXPECT_EQ(image_text(s, "Q"), ".");
    EXPECT_TRUE(s.erasing());
}

TEST(Canonical, BinaryAutomaton) {
    // Only the 1-transition leaves the initial state, so I maps to a single J.
    const Dfa m = minimize(load_dfa(oracle::data("kary2.dfa")));
    const Substitution s = canonical_substitution(m);
    const std::string I = m.state_name(m.initial());
    const std::string J = m.state_name(m.next(m.initial(), 1));
    EXPECT_EQ(image_text(s, "s"), "s" + I);
    EXPECT_EQ(image_text(s, I), J);
    EXPECT_EQ(image_text(s, J), J + J);
}

TEST(Canonical, FreshSymbolClash) {
    const Dfa d = parse_dfa_text("alphabet: a\ninitial: s\nfinals: s\ntrans: s a s\n");
    EXPECT_EQ(code_of([&] { canonical_substitution(d); }), ErrorCode::SymbolClash);
}

TEST(CharMorphism, AstarInsideAstarBstar) {
    const Dfa canonical = minimize(load_dfa(oracle::data("astarbstar.dfa")));
    DfaBuilder b(canonical.alphabet());
    for (State q = 0; q < canonical.state_count(); ++q)
        b.state(canonical.state_name(q));
    b.set_initial(canonical.initial());
    b.set_final(canonical.initial());
    for (State q = 0; q < canonical.state_count(); ++q)
        for (Letter a = 0; a < 2; ++a)
            if (State t = canonical.next(q, a); t != kNoState)
                b.add(q, a, t);
    const Dfa m = b.build();
    const auto phi = check_L_automaton(m, canonical);
    ASSERT_TRUE(phi.has_value());
    const Morphism f = char_morphism(m, *phi, canonical);
    EXPECT_EQ(write_morphism(f), "target: 0 < 1\ns -> .\nA -> 1\nB -> 0\n");
}

TEST(CharMorphism, EqualFinalsProduceNoZero) {
    const Dfa canonical = minimize(load_dfa(oracle::data("astarbstar.dfa")));
    StateMap id{{0, 1}, 2};
    const Morphism f = char_morphism(canonical, id, canonical);
    for (const Word& w : f.images())
        EXPECT_TRUE(std::find(w.begin(), w.end(), 0u) == w.end());
}

TEST(CharMorphism, InvalidMapRejected) {
    const Dfa canonical = minimize(load_dfa(oracle::data("astarbstar.dfa")));
    StateMap swapped{{1, 0}, 2};
    EXPECT_EQ(code_of([&] { char_morphism(canonical, swapped, canonical); }), ErrorCode::InvalidMap);
}

TEST(CharMorphism, ProductPresentationMatchesCharacteristicStream) {
    AbstractNumerationSystem sys(load_dfa(oracle::data("astarbstar.dfa")));
    RecognizableSet r(sys, load_dfa(oracle::data("has_b.dfa")));
    const auto pres = substitutive_presentation(r);
    // Of the four product states only (A,N) and (B,Y) are accessible.
    EXPECT_EQ(pres.l_automaton.state_count(), 2u);
    EXPECT_EQ(pres.f.source().size(), 3u);
    const Word via_subst = project(pres.f, fixed_point(pres.sigma, pres.seed)).take(10'000);
    const Word direct = characteristic_stream(r).take(10'000);
    EXPECT_EQ(via_subst, direct);
}

TEST(FixedPoint, TriangularPrefix) {
    const Substitution s = rules("triangular.rules");
    EXPECT_EQ(s.alphabet().format(fixed_point(s, 0).take(22)), "sAABABBABBBABBBBABBBBB");
}

TEST(FixedPoint, ThueMorsePrefix) {
    const Substitution s = rules("thue_morse.rules");
    EXPECT_EQ(s.alphabet().format(fixed_point(s, 0).take(16)), "0110100110010110");
    EXPECT_EQ(fixed_point(s, 0).take(1024), oracle::expand(s, {0}, 10));
}

TEST(FixedPoint, Errors) {
    const Substitution ba = parse_rules("a -> ba\nb -> b\n");
    EXPECT_EQ(code_of([&] { fixed_point(ba, 0); }), ErrorCode::NotProlongable);
    const Substitution bounded = parse_rules("a -> ab\nb -> .\n");
    EXPECT_EQ(code_of([&] { fixed_point(bounded, 0); }), ErrorCode::NotGrowing);
}

TEST(FixedPoint, ClonedCursorsAgree) {
    SymbolStream x = fixed_point(rules("tau.rules"), 0);
    x.take(777);
    SymbolStream y = x;
    EXPECT_EQ(x.take(5000), y.take(5000));
}

TEST(Project, TriangularCharacteristicSequence) {
    const Substitution s = rules("triangular.rules");
    const Morphism f = parse_morphism(read_file(oracle::data("triangular_f.morphism")), s.alphabet());
    const Word y = project(f, fixed_point(s, 0)).take(15);
    EXPECT_EQ(f.target().format(y), "110100100010000");
}

TEST(Project, IdentityIsTransparent) {
    const Substitution s = rules("fibonacci.rules");
    EXPECT_EQ(project(Morphism::identity(s.alphabet()), fixed_point(s, 0)).take(3000), fixed_point(s, 0).take(3000));
}

TEST(Project, EraseEverythingStalls) {
    const Substitution s = rules("thue_morse.rules");
    const Morphism none(s.alphabet(), binary_alphabet(), {{}, {}});
    SymbolStream y = project(none, fixed_point(s, 0), 1000);
    EXPECT_EQ(code_of([&] { y.next(); }), ErrorCode::Stalled);
}

TEST(Power, ThueMorseSquared) {
    const Substitution s2 = power(rules("thue_morse.rules"), 2);
    EXPECT_EQ(image_text(s2, "0"), "0110");
    EXPECT_EQ(image_text(s2, "1"), "1001");
    EXPECT_EQ(power(rules("thue_morse.rules"), 1), rules("thue_morse.rules"));
}

TEST(Power, TauCubeLength) {
    // |tau^3(a)| by composition and by iterated rewriting; the length recurrence
    // (x_a, x_b, x_c) -> (3 x_a + x_b, x_b + x_c, x_b) gives 4, 14, 45.
    const Substitution t = rules("tau.rules");
    const std::size_t composed = power(t, 3).image(0).size();
    const std::size_t iterated = oracle::expand(t, {0}, 3).size();
    std::uint64_t a = 1, b = 1, c = 1;
    for (int i = 0; i < 3; ++i) {
        const std::uint64_t na = 3 * a + b, nb = b + c, nc = b;
        a = na, b = nb, c = nc;
    }
    EXPECT_EQ(composed, iterated);
    EXPECT_EQ(composed, a);
    EXPECT_EQ(composed, 45u);
}

TEST(Mortal, Examples) {
    const auto m1 = mortal_letters(rules("erasing.rules"));
    EXPECT_EQ(m1.letters, (std::vector<Letter>{1}));
    EXPECT_EQ(m1.depth, 1u);
    const auto m2 = mortal_letters(rules("thue_morse.rules"));
    EXPECT_TRUE(m2.letters.empty());
    EXPECT_EQ(m2.depth, 0u);
    const auto m3 = mortal_letters(parse_rules("a -> b\nb -> c\nc -> .\n"));
    EXPECT_EQ(m3.letters, (std::vector<Letter>{0, 1, 2}));
    EXPECT_EQ(m3.depth, 3u);
}

TEST(EliminateErasing, DropsMortalLetter) {
    const Substitution s = rules("erasing.rules");
    const auto e = eliminate_erasing(s, 0);
    EXPECT_EQ(write_rules(e.tau), "alphabet: a < c\na -> ac\nc -> c\n");
    const Word zx = e.zeta.apply(fixed_point(s, 0).take(200));
    EXPECT_EQ(e.tau.alphabet().format(Word(zx.begin(), zx.begin() + 3)), "acc");
    const Word tx = fixed_point(e.tau, e.seed).take(zx.size());
    EXPECT_EQ(zx, tx);
}

TEST(EliminateErasing, NonErasingIsIdentity) {
    const Substitution s = rules("tau.rules");
    const auto e = eliminate_erasing(s, 0);
    EXPECT_EQ(e.tau, s);
    EXPECT_EQ(e.zeta, Morphism::identity(s.alphabet()));
}

TEST(EliminateErasing, BoundedResultRejectedDownstream) {
    const auto e = eliminate_erasing(parse_rules("a -> ab\nb -> .\n"), 0);
    EXPECT_EQ(image_text(e.tau, "a"), "a");
    EXPECT_EQ(code_of([&] { fixed_point(e.tau, e.seed); }), ErrorCode::NotGrowing);
}

TEST(EliminateErasing, MortalSeed) {
    EXPECT_EQ(code_of([&] { eliminate_erasing(rules("erasing.rules"), 1); }), ErrorCode::SeedMortal);
}

TEST(Stabilization, Examples) {
    EXPECT_EQ(stabilization_power(parse_rules("a -> ab\nb -> c\nc -> b\n")), 2u);
    EXPECT_EQ(stabilization_power(rules("thue_morse.rules")), 1u);
    EXPECT_EQ(code_of([&] { stabilization_power(rules("erasing.rules")); }), ErrorCode::Erasing);
}

TEST(Stabilization, TriangularNeedsTwo) {
    // Delta(sigma(s)) = {s, A} but Delta(sigma^2(s)) = {s, A, B}, so N = 1 violates the condition.
    const Substitution s = eliminate_erasing(rules("triangular.rules"), 0).tau;
    EXPECT_EQ(stabilization_power(s), 2u);
}

TEST(Stabilization, ConditionHoldsOnExpandedWords) {
    for (const char* f : {"tau.rules", "triangular.rules", "fibonacci.rules", "doubling.rules", "aab.rules"}) {
        const Substitution s = rules(f);
        const std::uint64_t n = stabilization_power(s);
        for (Letter a = 0; a < s.size(); ++a) {
            auto support = [&](std::size_t k) {
                std::set<Letter> out;
                for (Letter b : oracle::expand(s, {a}, k))
                    out.insert(b);
                return out;
            };
            const auto base = support(n);
            for (std::size_t j = 2; j * n <= 8; ++j)
                EXPECT_EQ(support(j * n), base) << f;
        }
    }
}

TEST(Blocks, ThueMorsePairs) {
    const Substitution s = rules("thue_morse.rules");
    const auto bs = block_substitution(s, fixed_point(s, 0), 2);
    EXPECT_EQ(bs.sigma_n.size(), 4u);
    EXPECT_TRUE(intertwines(s, bs));
    std::set<std::string> names(bs.sigma_n.alphabet().names().begin(), bs.sigma_n.alphabet().names().end());
    EXPECT_EQ(names, (std::set<std::string>{"00", "01", "10", "11"}));
}

TEST(Blocks, LengthOneIsTheSubstitution) {
    const Substitution s = rules("tau.rules");
    const auto bs = block_substitution(s, fixed_point(s, 0), 1);
    EXPECT_EQ(bs.sigma_n.size(), s.size());
    for (Letter b = 0; b < bs.sigma_n.size(); ++b)
        EXPECT_EQ(bs.rho.apply(bs.sigma_n.image(b)), s.image(bs.rho.image(b)[0]));
}

TEST(Blocks, BlockStreamIsFixedPoint) {
    const Substitution s = rules("tau.rules");
    const Word x = fixed_point(s, 0).take(1003);
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto bs = block_substitution(s, fixed_point(s, 0), n);
        const Word y = fixed_point(bs.sigma_n, bs.seed).take(1000);
        for (std::size_t i = 0; i < y.size(); ++i)
            ASSERT_EQ(bs.blocks[y[i]], Word(x.begin() + static_cast<std::ptrdiff_t>(i),
                                            x.begin() + static_cast<std::ptrdiff_t>(i + n)))
                << "n=" << n << " i=" << i;
    }
}

TEST(Blocks, ScanBoundExceeded) {
    const Substitution s = rules("thue_morse.rules");
    EXPECT_EQ(code_of([&] { block_substitution(s, fixed_point(s, 0), 3, 4); }), ErrorCode::BlockNotInFixedPoint);
}

TEST(Rules, MalformedReportsLine) {
    try {
        load_rules(oracle::data("malformed.rules"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Rules, DuplicateRuleRejected) {
    EXPECT_THROW(parse_rules("a -> a\na -> aa\n"), ParseError);
}
