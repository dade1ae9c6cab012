#pragma once

#include <functional>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synd/gaps.hpp"
#include "synd/growth.hpp"
#include "synd/independence.hpp"
#include "synd/io.hpp"
#include "synd/numeration.hpp"
#include "synd/periodicity.hpp"
#include "synd/report.hpp"
#include "synd/substitution.hpp"

// Command-line front end. `run` is the whole program; main() only forwards argv.
// Exit status: 0 success, 1 domain error (stderr starts with the error code), 2 parse error.

namespace synd::cli {

inline constexpr std::uint64_t kDefaultPrefix = 100'000;

/// Library operation -> subcommand that exercises it.
inline const std::vector<std::pair<std::string, std::string>>& operation_coverage() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"trim", "dfa trim"},
        {"minimize", "dfa minimize"},
        {"product_L_automaton", "dfa product"},
        {"check_L_automaton", "dfa check"},
        {"count_words", "dfa count"},
        {"incidence_matrix", "dfa matrix"},
        {"enumerate", "ans enumerate"},
        {"rep", "ans rep"},
        {"val", "ans val"},
        {"characteristic_stream", "ans chi"},
        {"canonical_substitution", "subst from-dfa"},
        {"char_morphism", "subst presentation"},
        {"fixed_point", "subst fixpoint"},
        {"project", "subst project"},
        {"power", "subst power"},
        {"mortal_letters", "subst mortal"},
        {"eliminate_erasing", "subst eliminate-erasing"},
        {"stabilization_power", "subst stabilize"},
        {"block_substitution", "subst blocks"},
        {"growth_automaton", "growth graph"},
        {"regularization_power", "growth analyze"},
        {"letter_growth", "growth analyze"},
        {"substitution_growth", "growth analyze"},
        {"lambda", "growth lambda"},
        {"automaton_growth", "growth automaton"},
        {"multiplicatively_independent", "indep rates"},
        {"independent_growth_types", "indep classify"},
        {"substitutions_independent", "indep subst"},
        {"max_uniform_block", "gaps block"},
        {"gap_of_word", "gaps word"},
        {"letter_gap_report", "gaps letter"},
        {"factor_gap_report", "gaps factor"},
        {"scaling_fit", "gaps scaling"},
        {"kprime_check", "gaps kprime"},
        {"detect_ultimate_period", "period detect"},
        {"power_word_scan", "period powers"},
        {"progressions_of", "period detect"},
        {"cobham_check", "cobham check"},
    };
    return table;
}

namespace detail {

inline std::string show_word(const Alphabet& a, const Word& w) { return w.empty() ? "ε" : a.format(w); }

inline Word read_word(const Alphabet& a, const std::string& text) {
    if (text.empty() || text == "ε" || text == ".")
        return {};
    return a.parse(text);
}

inline Letter letter_or_first(const Alphabet& a, const std::string& name) {
    if (name.empty())
        return 0;
    return a.at(name);
}

inline Morphism projection(const Substitution& sigma, const std::string& path) {
    if (path.empty() || path == "id")
        return Morphism::identity(sigma.alphabet());
    return parse_morphism(read_file(path), sigma.alphabet());
}

inline unsigned precision(unsigned flag) { return flag ? flag : precision_bits_from_env(); }

inline std::vector<std::string> split_list(const std::string& s) { return synd::detail::split_order(s); }

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

/// Shared options for commands that read phi(fixed point of sigma at seed).
struct SourceOptions {
    std::string rules, seed, proj;
    std::uint64_t stall = kDefaultStallBound;

    void attach(CLI::App* c, bool positional_rules = true) {
        if (positional_rules)
            c->add_option("rules", rules, "substitution rules file")->required();
        c->add_option("--seed", seed, "seed letter (default: first letter)");
        c->add_option("--project", proj, "morphism file applied to the fixed point ('id' = identity)");
        c->add_option("--stall-bound", stall, "symbols consumed without output before Stalled");
    }

    Substitution sigma() const { return load_rules(rules); }

    SymbolStream stream() const {
        const Substitution s = sigma();
        const Letter a = letter_or_first(s.alphabet(), seed);
        SymbolStream x = fixed_point(s, a);
        if (proj.empty() || proj == "id")
            return x;
        return project(projection(s, proj), std::move(x), stall);
    }
};

/// "rules:seed:proj" with seed and proj optional.
inline SubstitutiveSource parse_source_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
        if (colon == std::string::npos)
            break;
        start = colon + 1;
    }
    if (parts.size() > 3 || parts[0].empty())
        throw Error(ErrorCode::InvalidArgument, "expected rules[:seed[:projection]], got '" + spec + "'");
    SubstitutiveSource s;
    s.sigma = load_rules(parts[0]);
    s.seed = letter_or_first(s.sigma.alphabet(), parts.size() > 1 ? parts[1] : "");
    s.phi = projection(s.sigma, parts.size() > 2 ? parts[2] : "");
    return s;
}

/// "d,alpha" with alpha an integer, "d,rules-file" (rate of that file), or "rules-file".
inline GrowthType parse_growth_spec(const std::string& spec, unsigned bits) {
    const std::size_t comma = spec.rfind(',');
    auto from_file = [&](const std::string& path) {
        return letter_growth(load_rules(path), {bits, 30}).growth_type();
    };
    if (comma == std::string::npos)
        return from_file(spec);
    const std::string ds = spec.substr(0, comma), rs = spec.substr(comma + 1);
    std::size_t d = 0;
    try {
        std::size_t used = 0;
        d = std::stoul(ds, &used);
        if (used != ds.size())
            throw std::invalid_argument("degree");
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad degree in growth type '" + spec + "'");
    }
    if (!rs.empty() && std::all_of(rs.begin(), rs.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return {d, AlgebraicRate::integer(BigInt(rs))};
    return {d, from_file(rs).rate};
}

inline void check_format(const std::string& f) {
    if (f != "json" && f != "csv" && f != "text")
        throw Error(ErrorCode::InvalidArgument, "output format must be json, csv or text");
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace synd::detail;
    using namespace synd::cli::detail;

    CLI::App app{"Abstract numeration systems, substitutions, growth types and gap statistics", "synd"};
    app.require_subcommand(1);
    unsigned bits_flag = 0;
    app.add_option("--precision-bits", bits_flag, "working precision (default 128, or SYND_PRECISION_BITS)");
    std::function<void()> action;
    bool json = false;
    std::string out_format = "text";

    auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help) {
        CLI::App* c = group->add_subcommand(name, help);
        c->add_flag("--json", json, "emit a JSON report");
        return c;
    };

    // ---- dfa ------------------------------------------------------------------------------
    CLI::App* dfa = app.add_subcommand("dfa", "automaton utilities");
    dfa->require_subcommand(1);
    std::string path1, path2;
    std::size_t length = 10;
    {
        auto* c = leaf(dfa, "trim", "trim part of an automaton");
        c->add_option("dfa", path1)->required();
        c->callback([&] { action = [&] {
            const Dfa d = trim(load_dfa(path1));
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"dfa", dfa_to_json(d)}});
            else out << write_dfa_text(d);
        }; });
    }
    {
        auto* c = leaf(dfa, "minimize", "canonical (trim minimal) automaton");
        c->add_option("dfa", path1)->required();
        c->callback([&] { action = [&] {
            const Dfa d = minimize(load_dfa(path1));
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"dfa", dfa_to_json(d)}});
            else out << write_dfa_text(d);
        }; });
    }
    {
        auto* c = leaf(dfa, "product", "L-automaton M x M_L of a complete recognizer and a system");
        c->add_option("recognizer", path1)->required();
        c->add_option("system", path2)->required();
        c->callback([&] { action = [&] {
            const Dfa canonical = minimize(load_dfa(path2));
            auto [p, phi] = product_L_automaton(load_dfa(path1), canonical);
            if (json) {
                Json m = Json::object();
                for (State q = 0; q < p.state_count(); ++q)
                    m[p.state_name(q)] = canonical.state_name(phi(q));
                emit(out, Json{{"schema", kSchemaVersion}, {"dfa", dfa_to_json(p)}, {"phi", m}});
            } else {
                out << write_dfa_text(p);
            }
        }; });
    }
    {
        auto* c = leaf(dfa, "check", "decide whether an automaton is an L-automaton of a system");
        c->add_option("automaton", path1)->required();
        c->add_option("system", path2)->required();
        c->callback([&] { action = [&] {
            const Dfa m = load_dfa(path1);
            const Dfa canonical = minimize(load_dfa(path2));
            const auto phi = check_L_automaton(m, canonical);
            if (json) {
                Json j{{"schema", kSchemaVersion}, {"l_automaton", phi.has_value()}};
                if (phi) {
                    Json map = Json::object();
                    for (State q = 0; q < m.state_count(); ++q)
                        map[m.state_name(q)] = canonical.state_name((*phi)(q));
                    j["phi"] = map;
                }
                emit(out, j);
            } else if (phi) {
                for (State q = 0; q < m.state_count(); ++q)
                    out << m.state_name(q) << " -> " << canonical.state_name((*phi)(q)) << '\n';
            } else {
                out << "not an L-automaton\n";
            }
        }; });
    }
    {
        auto* c = leaf(dfa, "count", "number of accepted words of each length from the initial state");
        c->add_option("dfa", path1)->required();
        c->add_option("--length", length, "largest length (default 10)");
        c->callback([&] { action = [&] {
            const Dfa d = load_dfa(path1);
            WordCounter counter(d);
            Json rows = Json::array();
            for (std::size_t n = 0; n <= length; ++n) {
                const BigInt v = counter.count(d.initial(), n);
                if (json) rows.push_back(v.str());
                else out << n << ',' << v << '\n';
            }
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"counts", rows}});
        }; });
    }
    {
        auto* c = leaf(dfa, "matrix", "incidence matrix: entry (i, j) = #{a : delta(j, a) = i}");
        c->add_option("dfa", path1)->required();
        c->callback([&] { action = [&] {
            const Dfa d = load_dfa(path1);
            const IntMatrix m = incidence_matrix(d);
            Json rows = Json::array();
            for (std::size_t i = 0; i < m.rows(); ++i) {
                Json row = Json::array();
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    row.push_back(m(i, j).str());
                    if (!json) out << (j ? " " : "") << m(i, j);
                }
                if (!json) out << '\n';
                rows.push_back(row);
            }
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"states", d.state_names()}, {"matrix", rows}});
        }; });
    }

    // ---- ans ------------------------------------------------------------------------------
    CLI::App* ans = app.add_subcommand("ans", "abstract numeration systems");
    ans->require_subcommand(1);
    std::size_t count = 10;
    std::string number, word;
    std::uint64_t prefix = kDefaultPrefix;
    bool via_subst = false;
    {
        auto* c = leaf(ans, "enumerate", "first words of L in genealogical order");
        c->add_option("system", path1)->required();
        c->add_option("--count", count, "number of words (default 10)");
        c->callback([&] { action = [&] {
            const AbstractNumerationSystem s(load_dfa(path1));
            const auto words = enumerate(s, count);
            Json arr = Json::array();
            for (const Word& w : words) {
                if (json) arr.push_back(s.alphabet().format(w));
                else out << show_word(s.alphabet(), w) << '\n';
            }
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"words", arr}});
        }; });
    }
    {
        auto* c = leaf(ans, "rep", "rep_S(n): the (n+1)-th word of L");
        c->add_option("system", path1)->required();
        c->add_option("n", number)->required();
        c->callback([&] { action = [&] {
            const AbstractNumerationSystem s(load_dfa(path1));
            BigInt n;
            try {
                n = BigInt(number);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidArgument, "not a natural number: '" + number + "'");
            }
            if (n < 0)
                throw Error(ErrorCode::InvalidArgument, "not a natural number: '" + number + "'");
            const Word w = rep(s, n);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"n", number}, {"rep", s.alphabet().format(w)}});
            else out << show_word(s.alphabet(), w) << '\n';
        }; });
    }
    {
        auto* c = leaf(ans, "val", "val_S(w): position of w in L");
        c->add_option("system", path1)->required();
        c->add_option("word", word, "word of L ('ε' or '.' for the empty word)")->required();
        c->callback([&] { action = [&] {
            const AbstractNumerationSystem s(load_dfa(path1));
            Word w;
            try {
                w = read_word(s.alphabet(), word);
            } catch (const Error& e) {
                throw Error(ErrorCode::NotInLanguage, e.what());
            }
            const BigInt v = val(s, w);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"word", word}, {"val", v.str()}});
            else out << v << '\n';
        }; });
    }
    {
        auto* c = leaf(ans, "chi", "characteristic sequence of a recognizable set (CSV columns: index,bit)");
        c->add_option("system", path1)->required();
        c->add_option("recognizer", path2)->required();
        c->add_option("--prefix", prefix, "number of symbols (default 100000)");
        c->add_option("--out", out_format, "csv | json | text");
        c->add_flag("--via-substitution", via_subst, "compute through the canonical substitution of the L-automaton");
        c->callback([&] { action = [&] {
            check_format(out_format);
            const RecognizableSet r(AbstractNumerationSystem(load_dfa(path1)), load_dfa(path2));
            Word bits;
            if (via_subst) {
                const auto p = substitutive_presentation(r);
                bits = project(p.f, fixed_point(p.sigma, p.seed)).take(prefix);
            } else {
                bits = characteristic_stream(r).take(prefix);
            }
            if (out_format == "json" || json) {
                Json ones = Json::array();
                for (std::size_t i = 0; i < bits.size(); ++i)
                    if (bits[i]) ones.push_back(i);
                emit(out, Json{{"schema", kSchemaVersion}, {"prefix", bits.size()},
                               {"bits", binary_alphabet().format(bits)}, {"ones", ones}});
            } else if (out_format == "csv") {
                out << "index,bit\n";
                for (std::size_t i = 0; i < bits.size(); ++i) out << i << ',' << bits[i] << '\n';
            } else {
                out << binary_alphabet().format(bits) << '\n';
            }
        }; });
    }

    // ---- subst ----------------------------------------------------------------------------
    CLI::App* sub = app.add_subcommand("subst", "substitutions and fixed points");
    sub->require_subcommand(1);
    SourceOptions src;
    std::string fresh = "s";
    std::size_t block_n = 2;
    std::uint64_t power_k = 2;
    {
        auto* c = leaf(sub, "from-dfa", "canonical substitution sigma_M of an automaton");
        c->add_option("dfa", path1)->required();
        c->add_option("--seed,--fresh", fresh, "name of the fresh prolongation letter (default s)");
        c->callback([&] { action = [&] {
            const Substitution s = canonical_substitution(load_dfa(path1), fresh);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"rules", write_rules(s)}, {"seed", fresh}});
            else out << write_rules(s);
        }; });
    }
    {
        auto* c = leaf(sub, "presentation", "substitutive presentation chi_E = f(fixed point of sigma)");
        c->add_option("system", path1)->required();
        c->add_option("recognizer", path2)->required();
        c->callback([&] { action = [&] {
            const RecognizableSet r(AbstractNumerationSystem(load_dfa(path1)), load_dfa(path2));
            const auto p = substitutive_presentation(r);
            if (json) {
                emit(out, Json{{"schema", kSchemaVersion}, {"l_automaton", dfa_to_json(p.l_automaton)},
                               {"rules", write_rules(p.sigma)}, {"seed", p.sigma.alphabet().name(p.seed)},
                               {"morphism", write_morphism(p.f)}});
            } else {
                out << "# sigma, seed " << p.sigma.alphabet().name(p.seed) << '\n'
                    << write_rules(p.sigma) << "# f\n" << write_morphism(p.f);
            }
        }; });
    }
    {
        auto* c = leaf(sub, "fixpoint", "prefix of the fixed point at the seed");
        src.attach(c);
        c->add_option("--prefix", prefix, "number of symbols (default 100000)");
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const Word w = fixed_point(s, letter_or_first(s.alphabet(), src.seed)).take(prefix);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"prefix", s.alphabet().format(w)}});
            else if (!w.empty()) out << s.alphabet().format(w) << '\n';
        }; });
    }
    {
        auto* c = leaf(sub, "project", "prefix of phi(fixed point)");
        c->add_option("rules", src.rules)->required();
        c->add_option("morphism", src.proj)->required();
        c->add_option("--seed", src.seed, "seed letter (default: first letter)");
        c->add_option("--stall-bound", src.stall, "symbols consumed without output before Stalled");
        c->add_option("--prefix", prefix, "number of symbols (default 100000)");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            const Word w = x.take(prefix);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"prefix", x.alphabet().format(w)}});
            else if (!w.empty()) out << x.alphabet().format(w) << '\n';
        }; });
    }
    {
        auto* c = leaf(sub, "power", "sigma^k");
        c->add_option("rules", src.rules)->required();
        c->add_option("--k", power_k, "exponent (default 2)");
        c->callback([&] { action = [&] {
            const Substitution s = power(src.sigma(), power_k);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"rules", write_rules(s)}});
            else out << write_rules(s);
        }; });
    }
    {
        auto* c = leaf(sub, "mortal", "mortal letters and the depth l with sigma^l(b) empty");
        c->add_option("rules", src.rules)->required();
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const auto m = mortal_letters(s);
            Json names = Json::array();
            for (Letter a : m.letters) names.push_back(s.alphabet().name(a));
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"mortal", names}, {"depth", m.depth}});
            else {
                out << "mortal:";
                for (Letter a : m.letters) out << ' ' << s.alphabet().name(a);
                out << "\ndepth: " << m.depth << '\n';
            }
        }; });
    }
    {
        auto* c = leaf(sub, "eliminate-erasing", "non-erasing tau and letter-to-letter zeta with zeta(fix tau) = fix sigma");
        c->add_option("rules", src.rules)->required();
        c->add_option("--seed", src.seed, "seed letter (default: first letter)");
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const auto e = eliminate_erasing(s, letter_or_first(s.alphabet(), src.seed));
            if (json) {
                emit(out, Json{{"schema", kSchemaVersion}, {"rules", write_rules(e.tau)},
                               {"morphism", write_morphism(e.zeta)}, {"seed", e.tau.alphabet().name(e.seed)},
                               {"depth", e.depth}});
            } else {
                out << "# tau, seed " << e.tau.alphabet().name(e.seed) << '\n'
                    << write_rules(e.tau) << "# zeta\n" << write_morphism(e.zeta);
            }
        }; });
    }
    {
        auto* c = leaf(sub, "stabilize", "least k with sigma^k stable on letter sets");
        c->add_option("rules", src.rules)->required();
        c->callback([&] { action = [&] {
            const std::uint64_t k = stabilization_power(src.sigma());
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"k", k}});
            else out << k << '\n';
        }; });
    }
    {
        auto* c = leaf(sub, "blocks", "block substitution sigma_n on the length-n factors of the fixed point");
        c->add_option("rules", src.rules)->required();
        c->add_option("--seed", src.seed, "seed letter (default: first letter)");
        c->add_option("--n", block_n, "block length (default 2)");
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const auto b = block_substitution(s, fixed_point(s, letter_or_first(s.alphabet(), src.seed)), block_n);
            const bool ok = intertwines(s, b);
            if (json) {
                emit(out, Json{{"schema", kSchemaVersion}, {"rules", write_rules(b.sigma_n)},
                               {"rho", write_morphism(b.rho)}, {"intertwines", ok}});
            } else {
                out << write_rules(b.sigma_n) << "# rho\n" << write_morphism(b.rho)
                    << "# intertwines: " << (ok ? "yes" : "no") << '\n';
            }
        }; });
    }

    // ---- growth ---------------------------------------------------------------------------
    CLI::App* gr = app.add_subcommand("growth", "growth types");
    gr->require_subcommand(1);
    bool trim_first = false;
    std::size_t graph_n = 5;
    {
        auto* c = leaf(gr, "analyze", "per-letter growth types, (D, Theta), A_max and p");
        c->add_option("rules", src.rules)->required();
        c->callback([&] { action = [&] {
            const auto a = letter_growth(src.sigma(), {precision(bits_flag), 30});
            if (json) {
                emit(out, analysis_json(a));
                return;
            }
            const Alphabet& al = a.sigma.alphabet();
            out << "p: " << a.p << '\n';
            for (Letter x = 0; x < al.size(); ++x)
                out << al.name(x) << ": " << (a.mortal[x] ? std::string("mortal") : format(a.letters[x])) << '\n';
            out << "growth type: " << format(a.growth_type()) << "\nA_max:";
            for (Letter x : a.A_max) out << ' ' << al.name(x);
            out << '\n';
        }; });
    }
    {
        auto* c = leaf(gr, "graph", "letter graph a -> b with multiplicity |sigma(a)|_b, and path counts");
        c->add_option("rules", src.rules)->required();
        c->add_option("--n", graph_n, "path length for the counts (default 5)");
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const GrowthGraph g = growth_automaton(s);
            Json edges = Json::array(), counts = Json::object();
            for (Letter a = 0; a < s.size(); ++a) {
                std::map<Letter, std::size_t> mult;
                for (auto b : g.edges[a]) ++mult[b];
                for (auto [b, m] : mult) {
                    if (json) edges.push_back(Json{{"from", s.alphabet().name(a)}, {"to", s.alphabet().name(b)}, {"multiplicity", m}});
                    else out << s.alphabet().name(a) << " -> " << s.alphabet().name(b) << " x" << m << '\n';
                }
                counts[s.alphabet().name(a)] = g.path_count(a, graph_n).str();
            }
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"edges", edges}, {"n", graph_n}, {"paths", counts}});
            else for (auto& [k, v] : counts.items()) out << "paths(" << k << ", " << graph_n << ") = " << v.get<std::string>() << '\n';
        }; });
    }
    {
        auto* c = leaf(gr, "lambda", "lambda(u) = sum of c(u_i) over letters of maximal growth");
        c->add_option("rules", src.rules)->required();
        c->add_option("--word", word, "word u")->required();
        c->callback([&] { action = [&] {
            const auto a = letter_growth(src.sigma(), {precision(bits_flag), 30});
            const auto l = lambda(a, read_word(a.sigma.alphabet(), word));
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"word", word}, {"value", to_decimal(l.value, 20)},
                                     {"error", to_decimal(l.error, 6)}, {"p", a.p}});
            else out << to_decimal(l.value, 20) << " +- " << to_decimal(l.error, 6) << '\n';
        }; });
    }
    {
        auto* c = leaf(gr, "automaton", "growth types of the counting sequences of a trim automaton");
        c->add_option("dfa", path1)->required();
        c->add_flag("--trim", trim_first, "trim the automaton first");
        c->callback([&] { action = [&] {
            Dfa d = load_dfa(path1);
            if (trim_first) d = trim(d);
            const auto g = automaton_growth(d, precision(bits_flag));
            if (json) {
                emit(out, automaton_growth_json(d, g));
                return;
            }
            for (State q = 0; q < d.state_count(); ++q) out << d.state_name(q) << ": " << format(g.states[q]) << '\n';
            out << "growth type: " << format(g.system) << "\nassociated substitution: "
                << format(g.associated_substitution()) << '\n';
        }; });
    }

    // ---- indep ----------------------------------------------------------------------------
    CLI::App* ind = app.add_subcommand("indep", "independence of growth types");
    ind->require_subcommand(1);
    std::string g1, g2;
    ClassifyOptions copt;
    {
        auto* c = leaf(ind, "classify", "classify two growth types by the density conditions");
        c->add_option("--g1", g1, "d,alpha with alpha an integer or a rules file")->required();
        c->add_option("--g2", g2, "e,beta")->required();
        c->add_option("--k-max", copt.k_max, "exponent bound for non-integer rates (default 24)");
        c->add_flag("--strict-paper", copt.strict_paper, "literal reading of conditions (1) and (3)");
        c->callback([&] { action = [&] {
            const unsigned bits = precision(bits_flag);
            const auto v = independent_growth_types(parse_growth_spec(g1, bits), parse_growth_spec(g2, bits), copt);
            if (json) { Json j = verdict_json(v); j["schema"] = kSchemaVersion; emit(out, j); }
            else out << to_string(v.status) << (v.status == IndependenceStatus::Dependent
                            ? " k=" + std::to_string(v.k) + " l=" + std::to_string(v.l) : std::string()) << '\n';
        }; });
    }
    {
        auto* c = leaf(ind, "rates", "multiplicative independence of two rates");
        c->add_option("--alpha", g1, "integer or rules file (its Theta)")->required();
        c->add_option("--beta", g2, "integer or rules file")->required();
        c->add_option("--k-max", copt.k_max, "exponent bound (default 24)");
        c->callback([&] { action = [&] {
            const unsigned bits = precision(bits_flag);
            const auto v = multiplicatively_independent(parse_growth_spec("0," + g1, bits).rate,
                                                        parse_growth_spec("0," + g2, bits).rate, copt.k_max);
            const bool dep = v.status == IndependenceStatus::Dependent;
            const char* s = dep ? "Dependent" : (v.status == IndependenceStatus::Unknown ? "Unknown" : "Independent");
            if (json) {
                Json j{{"schema", kSchemaVersion}, {"status", s}, {"exact", v.exact}};
                if (dep) j["witness"] = Json{{"k", v.k}, {"l", v.l}};
                if (v.bound) j["bound"] = *v.bound;
                emit(out, j);
            } else {
                out << s << (dep ? " k=" + std::to_string(v.k) + " l=" + std::to_string(v.l) : std::string()) << '\n';
            }
        }; });
    }
    {
        auto* c = leaf(ind, "subst", "independence of two substitutions");
        c->add_option("rules1", path1)->required();
        c->add_option("rules2", path2)->required();
        c->add_option("--k-max", copt.k_max, "exponent bound (default 24)");
        c->add_flag("--strict-paper", copt.strict_paper, "literal reading of conditions (1) and (3)");
        c->callback([&] { action = [&] {
            const GrowthOptions go{precision(bits_flag), 30};
            const auto a1 = letter_growth(load_rules(path1), go);
            const auto a2 = letter_growth(load_rules(path2), go);
            const auto v = substitutions_independent(a1, a2, copt);
            if (json) {
                Json j = verdict_json(v);
                j["schema"] = kSchemaVersion;
                j["g1"] = growth_type_json(a1.growth_type());
                j["g2"] = growth_type_json(a2.growth_type());
                emit(out, j);
            } else {
                out << format(a1.growth_type()) << " vs " << format(a2.growth_type()) << ": " << to_string(v.status) << '\n';
                if (v.outside_theorem_scope) out << "warning: OutsideTheoremScope\n";
            }
        }; });
    }

    // ---- gaps -----------------------------------------------------------------------------
    CLI::App* gp = app.add_subcommand("gaps", "gap statistics (CSV columns: checkpoint,max_gap)");
    gp->require_subcommand(1);
    std::string target, set;
    std::size_t samples = kDefaultGapSamples;
    int model = 0;
    std::string params;
    std::uint64_t n_max = 1u << 20;
    double tolerance = kDefaultTolerance;
    std::size_t kp_n = 12;
    auto gap_output = [&](const GapReport& r) {
        check_format(out_format);
        if (out_format == "csv") {
            out << "checkpoint,max_gap\n";
            for (const auto& s : r.samples) out << s.n << ',' << s.max_gap << '\n';
        } else if (out_format == "json" || json) {
            Json j = gap_report_json(r);
            j["schema"] = kSchemaVersion;
            emit(out, j);
        } else {
            out << r.target << ": " << to_string(r.verdict) << ", max gap " << r.max_gap << ", "
                << r.occurrences << " occurrences in " << r.scanned << " symbols\n";
        }
    };
    {
        auto* c = leaf(gp, "letter", "gaps between occurrences of a letter");
        src.attach(c);
        c->add_option("--target", target, "letter c")->required();
        c->add_option("--prefix", prefix, "N (default 100000)");
        c->add_option("--samples", samples, "geometric checkpoints (default 12)");
        c->add_option("--out", out_format, "json | csv | text");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            const Letter t = x.alphabet().at(target);
            gap_output(letter_gap_report(std::move(x), t, prefix, samples));
        }; });
    }
    {
        auto* c = leaf(gp, "factor", "gaps between occurrences of a factor");
        src.attach(c);
        c->add_option("--word", word, "factor u")->required();
        c->add_option("--prefix", prefix, "N (default 100000)");
        c->add_option("--samples", samples, "geometric checkpoints (default 12)");
        c->add_option("--out", out_format, "json | csv | text");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            const Word u = read_word(x.alphabet(), word);
            gap_output(factor_gap_report(std::move(x), u, prefix, samples));
        }; });
    }
    {
        auto* c = leaf(gp, "block", "M(N): longest block of letters of E in x_[0,N]");
        src.attach(c);
        c->add_option("--set", set, "letters of E, separated by spaces or commas")->required();
        c->add_option("--prefix", prefix, "N (default 100000)");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            std::vector<Letter> e;
            for (const auto& n : split_list(set)) e.push_back(x.alphabet().at(n));
            const LetterSet es = letter_set(x.alphabet().size(), e);
            const auto m = max_uniform_block(std::move(x), es, prefix);
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"N", prefix}, {"M", m}});
            else out << m << '\n';
        }; });
    }
    {
        auto* c = leaf(gp, "word", "gap(w): longest window whose image avoids c");
        c->add_option("rules", src.rules, "rules file giving the alphabet of w")->required();
        c->add_option("--project", src.proj, "morphism file ('id' = identity)");
        c->add_option("--word", word, "the word w")->required();
        c->add_option("--target", target, "letter c of the morphism's target")->required();
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const Morphism phi = projection(s, src.proj);
            const auto g = gap_of_word(read_word(s.alphabet(), word), phi, phi.target().at(target));
            if (json) emit(out, Json{{"schema", kSchemaVersion}, {"gap", g}});
            else out << g << '\n';
        }; });
    }
    {
        auto* c = leaf(gp, "scaling", "regression of M(N) against one of the five regimes");
        src.attach(c);
        c->add_option("--set", set, "letters of E")->required();
        c->add_option("--case", model, "regime 1..5 (default: inferred from the growth analysis)");
        c->add_option("--params", params, "d,d',alpha,alpha' (default: inferred)");
        c->add_option("--n-max", n_max, "largest N (default 2^20)");
        c->add_option("--tolerance", tolerance, "exponent tolerance (default 0.1)");
        c->add_option("--out", out_format, "json | csv | text");
        c->callback([&] { action = [&] {
            check_format(out_format);
            const Substitution s = src.sigma();
            SymbolStream x = src.stream();
            std::vector<Letter> e;
            for (const auto& n : split_list(set)) e.push_back(x.alphabet().at(n));
            const LetterSet es = letter_set(x.alphabet().size(), e);
            int k = model;
            ScalingParams p;
            if (!params.empty()) {
                const auto parts = split_list(params);
                if (parts.size() != 4)
                    throw Error(ErrorCode::InvalidArgument, "--params needs d,d',alpha,alpha'");
                p = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
            }
            if (k == 0 || params.empty()) {
                if (!(x.alphabet() == s.alphabet()))
                    throw Error(ErrorCode::InvalidArgument, "inferring the regime needs E over the substitution's alphabet");
                const auto regime = infer_scaling_regime(letter_growth(s, {precision(bits_flag), 30}), es);
                if (k == 0) k = regime.model;
                if (params.empty()) p = regime.params;
            }
            const ScalingFit f = scaling_fit(std::move(x), es, k, p, n_max, tolerance);
            if (out_format == "csv") {
                out << "N,M\n";
                for (const auto& smp : f.samples) out << smp.n << ',' << smp.m << '\n';
            } else if (out_format == "json" || json) {
                Json j = scaling_fit_json(f);
                j["schema"] = kSchemaVersion;
                j["params"] = Json{{"d", p.d}, {"dp", p.dp}, {"alpha", p.alpha}, {"alpha_p", p.alpha_p}};
                emit(out, j);
            } else {
                out << "case " << f.model << ": exponent " << f.exponent << " vs " << f.predictor << ", admissible ["
                    << f.lo << ", " << f.hi << "] +- " << f.tolerance << ": " << (f.pass ? "pass" : "fail") << '\n';
            }
        }; });
    }
    {
        auto* c = leaf(gp, "kprime", "smallest K' with gap(sigma^n(a)) <= K' bound(n), n <= n_max");
        c->add_option("rules", src.rules)->required();
        c->add_option("--project", src.proj, "morphism file ('id' = identity)");
        c->add_option("--target", target, "letter c")->required();
        c->add_option("--n-max", kp_n, "largest n (default 12)");
        c->callback([&] { action = [&] {
            const Substitution s = src.sigma();
            const Morphism phi = projection(s, src.proj);
            const auto r = kprime_check(s, phi, phi.target().at(target), kp_n);
            if (json) {
                Json avoid = Json::array();
                for (Letter a : r.avoiding) avoid.push_back(s.alphabet().name(a));
                emit(out, Json{{"schema", kSchemaVersion}, {"A_c", avoid}, {"dp", r.dp}, {"alpha_p", r.alpha_p},
                               {"k_prime", r.k_prime}, {"max_ratio", r.max_ratio},
                               {"ratio_non_increasing", r.ratio_non_increasing}});
            } else {
                out << "K' = " << r.k_prime << " (d' = " << r.dp << ", alpha' = " << r.alpha_p << ")\n";
            }
        }; });
    }

    // ---- period ---------------------------------------------------------------------------
    CLI::App* per = app.add_subcommand("period", "ultimate periodicity on a prefix");
    per->require_subcommand(1);
    std::uint64_t max_period = 1000;
    std::size_t max_len = 64;
    {
        auto* c = leaf(per, "detect", "smallest period, then preperiod, verified on the prefix");
        src.attach(c);
        c->add_option("--prefix", prefix, "scanned symbols (default 100000)");
        c->add_option("--max-period", max_period, "largest period tried (default 1000)");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            const Alphabet al = x.alphabet();
            const Word w = x.take(prefix);
            const auto v = detect_ultimate_period(w, max_period);
            if (json) {
                Json j{{"schema", kSchemaVersion}, {"period", period_json(v)}};
                if (v.periodic) j["progressions"] = progressions_json(progressions_of(v, w, al.size()), al);
                emit(out, j);
            } else if (v.periodic) {
                out << "UltimatelyPeriodic preperiod " << v.preperiod << " period " << v.period
                    << " (verified on prefix " << v.prefix << ")\n";
            } else {
                out << "NoPeriodUpTo " << v.max_period << " (prefix " << v.prefix << ")\n";
            }
        }; });
    }
    {
        auto* c = leaf(per, "powers", "shortest word with a cube occurrence and its largest exponent");
        src.attach(c);
        c->add_option("--prefix", prefix, "scanned symbols (default 100000)");
        c->add_option("--max-len", max_len, "longest word tried (default 64)");
        c->callback([&] { action = [&] {
            SymbolStream x = src.stream();
            const Alphabet al = x.alphabet();
            const auto p = power_word_scan(x.take(prefix), max_len);
            if (json) {
                Json j{{"schema", kSchemaVersion}, {"found", p.has_value()}};
                if (p) { j["word"] = al.format(p->u); j["exponent"] = p->exponent; j["position"] = p->position; }
                emit(out, j);
            } else if (p) {
                out << al.format(p->u) << " ^" << p->exponent << " at " << p->position << '\n';
            } else {
                out << "none\n";
            }
        }; });
    }

    // ---- cobham ---------------------------------------------------------------------------
    CLI::App* cob = app.add_subcommand("cobham", "Cobham-style pipeline");
    cob->require_subcommand(1);
    std::string s1, s2;
    {
        auto* c = leaf(cob, "check", "agreement, independence, gaps, periodicity and progressions");
        c->add_option("--s1", s1, "rules[:seed[:projection]]")->required();
        c->add_option("--s2", s2, "rules[:seed[:projection]]")->required();
        c->add_option("--prefix", prefix, "compared symbols (default 100000)");
        c->add_option("--max-period", max_period, "largest period tried (default 1000)");
        c->add_option("--k-max", copt.k_max, "exponent bound (default 24)");
        c->add_flag("--strict-paper", copt.strict_paper, "literal reading of conditions (1) and (3)");
        c->callback([&] { action = [&] {
            CobhamOptions o;
            o.prefix = prefix;
            o.max_period = max_period;
            o.classify = copt;
            const auto a = parse_source_spec(s1), b = parse_source_spec(s2);
            const auto r = cobham_check(a, b, o);
            const Alphabet& al = a.phi.target();
            if (json) {
                Json j;
                j["schema"] = kSchemaVersion;
                j["a"] = Json{{"agreed", r.agreed}};
                Json ind = verdict_json(r.independence);
                ind["g1"] = growth_type_json(r.growth1.growth_type());
                ind["g2"] = growth_type_json(r.growth2.growth_type());
                ind["theorem_case3"] = r.theorem_case3;
                j["b"] = ind;
                Json gl = Json::array(), gf = Json::array();
                for (const auto& g : r.letter_gaps) gl.push_back(gap_report_json(g));
                for (const auto& g : r.factor_gaps) gf.push_back(gap_report_json(g));
                j["c"] = Json{{"letters", gl}, {"factors", gf}};
                j["d"] = period_json(r.period);
                if (r.progressions) {
                    Json e = progressions_json(*r.progressions, al);
                    e["reconstruction_matches"] = r.reconstruction_matches;
                    j["e"] = e;
                } else {
                    j["e"] = nullptr;
                }
                j["warnings"] = r.warnings;
                emit(out, j);
                return;
            }
            out << "(a) streams agree on " << r.agreed << " symbols\n"
                << "(b) " << format(r.growth1.growth_type()) << " vs " << format(r.growth2.growth_type()) << ": "
                << to_string(r.independence.status) << '\n';
            for (const auto& g : r.letter_gaps)
                out << "(c) letter " << g.target << ": " << to_string(g.verdict) << ", max gap " << g.max_gap << '\n';
            for (const auto& g : r.factor_gaps)
                out << "(c) factor " << g.target << ": " << to_string(g.verdict) << ", max gap " << g.max_gap << '\n';
            if (r.period.periodic)
                out << "(d) UltimatelyPeriodic preperiod " << r.period.preperiod << " period " << r.period.period << '\n';
            else
                out << "(d) NoPeriodUpTo " << r.period.max_period << '\n';
            if (r.progressions)
                for (Letter x = 0; x < al.size(); ++x)
                    for (auto res : r.progressions->residues[x])
                        out << "(e) " << res << " mod " << r.progressions->period << " (from " << r.progressions->preperiod
                            << ") -> " << al.name(x) << '\n';
            for (const auto& w : r.warnings) out << "warning: " << w << '\n';
        }; });
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }
    try {
        if (action)
            action();
        return 0;
    } catch (const ParseError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "InvalidArgument: " << e.what() << '\n';
        return 1;
    }
}

/// Leaf subcommand paths ("group name") of the application, for coverage checks.
inline std::vector<std::string> subcommand_paths() {
    std::ostringstream out, err;
    std::vector<std::string> paths;
    const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
        {"dfa", {"trim", "minimize", "product", "check", "count", "matrix"}},
        {"ans", {"enumerate", "rep", "val", "chi"}},
        {"subst", {"from-dfa", "presentation", "fixpoint", "project", "power", "mortal", "eliminate-erasing",
                   "stabilize", "blocks"}},
        {"growth", {"analyze", "graph", "lambda", "automaton"}},
        {"indep", {"classify", "rates", "subst"}},
        {"gaps", {"letter", "factor", "block", "word", "scaling", "kprime"}},
        {"period", {"detect", "powers"}},
        {"cobham", {"check"}},
    };
    for (const auto& [g, leaves] : groups)
        for (const auto& l : leaves)
            if (run({g, l, "--help"}, out, err) == 0)
                paths.push_back(g + " " + l);
    return paths;
}

}  // namespace synd::cli
