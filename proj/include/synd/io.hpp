#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "synd/automata.hpp"
#include "synd/substitution.hpp"

// Text formats. '#' starts a comment; blank lines are ignored.
//
//   DFA:          alphabet: a < b          letters in order
//                 states: q0 q1            optional; fixes state order
//                 initial: q0
//                 finals: q0 q1            may be empty
//                 trans: q0 a q1           one transition per line
//
//   rules:        alphabet: a < b          optional; default is left-hand sides in order
//                 a -> aab                 '.' is the empty word
//
//   morphism:     target: 0 < 1            optional; default is image letters sorted by name
//                 s -> .
//
// Images are read one character per letter unless they contain whitespace.
// A DFA may also be given as JSON with the same keys and "trans": [["q0","a","q1"], ...].

namespace synd {

namespace detail {

inline std::string_view trim_view(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

/// "a < b < c" or "a b c".
inline std::vector<std::string> split_order(std::string_view s) {
    std::string t(s);
    for (char& c : t)
        if (c == '<' || c == ',')
            c = ' ';
    return split_ws(t);
}

struct Line {
    std::size_t number;
    std::string_view text;  // comment stripped, trimmed, non-empty
};

inline std::vector<Line> lines_of(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty() || number == 0) {
        ++number;
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim_view(line);
        if (!line.empty())
            out.push_back({number, line});
        if (eol == std::string_view::npos)
            break;
    }
    return out;
}

/// Splits "key: value"; nullopt when there is no key.
inline std::optional<std::pair<std::string_view, std::string_view>> keyed(std::string_view line) {
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
        return std::nullopt;
    std::string_view key = trim_view(line.substr(0, colon));
    if (key.empty() || key.find_first_of(" \t") != std::string_view::npos)
        return std::nullopt;
    return std::pair{key, trim_view(line.substr(colon + 1))};
}

inline Word parse_image(const Alphabet& alphabet, std::string_view text, std::size_t line) {
    text = trim_view(text);
    if (text.empty() || text == ".")
        return {};
    try {
        return alphabet.parse(text);
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------------------------
// DFA

inline Dfa parse_dfa_text(std::string_view text) {
    const auto lines = detail::lines_of(text);
    std::optional<DfaBuilder> b;
    bool have_initial = false;
    for (const auto& [number, line] : lines) {
        const auto kv = detail::keyed(line);
        if (!kv)
            throw ParseError("expected 'key: value'", number);
        const auto [key, value] = *kv;
        if (key == "alphabet") {
            if (b)
                throw ParseError("alphabet given twice", number);
            try {
                b.emplace(Alphabet(detail::split_order(value)));
            } catch (const Error& e) {
                throw ParseError(e.what(), number);
            }
            continue;
        }
        if (!b)
            throw ParseError("the alphabet must come first", number);
        const auto tokens = detail::split_ws(value);
        if (key == "states") {
            for (const auto& t : tokens)
                b->state(t);
        } else if (key == "initial") {
            if (tokens.size() != 1 || have_initial)
                throw ParseError("exactly one initial state expected", number);
            b->set_initial(b->state(tokens[0]));
            have_initial = true;
        } else if (key == "finals" || key == "final") {
            for (const auto& t : tokens)
                b->set_final(b->state(t));
        } else if (key == "trans") {
            if (tokens.size() != 3)
                throw ParseError("transition needs 'from letter to'", number);
            const auto a = b->alphabet().find(tokens[1]);
            if (!a)
                throw ParseError("unknown letter '" + tokens[1] + "'", number);
            const State from = b->state(tokens[0]);
            if (!b->add(from, *a, b->state(tokens[2])))
                throw ParseError("duplicate transition from '" + tokens[0] + "' on '" + tokens[1] + "'", number);
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", number);
        }
    }
    if (!b)
        throw ParseError("missing alphabet", lines.empty() ? 1 : lines.back().number);
    if (!have_initial)
        throw ParseError("missing initial state", lines.empty() ? 1 : lines.back().number);
    return b->build();
}

inline Dfa parse_dfa_json(const nlohmann::json& j) {
    try {
        std::vector<std::string> letters = j.at("alphabet").get<std::vector<std::string>>();
        DfaBuilder b{Alphabet(std::move(letters))};
        if (j.contains("states"))
            for (const auto& s : j.at("states"))
                b.state(s.get<std::string>());
        b.set_initial(b.state(j.at("initial").get<std::string>()));
        for (const auto& s : j.value("finals", nlohmann::json::array()))
            b.set_final(b.state(s.get<std::string>()));
        std::size_t index = 0;
        for (const auto& t : j.value("trans", nlohmann::json::array())) {
            ++index;
            if (!t.is_array() || t.size() != 3)
                throw ParseError("transition needs [from, letter, to]", index);
            const auto a = b.alphabet().find(t[1].get<std::string>());
            if (!a)
                throw ParseError("unknown letter '" + t[1].get<std::string>() + "'", index);
            const State from = b.state(t[0].get<std::string>());
            if (!b.add(from, *a, b.state(t[2].get<std::string>())))
                throw ParseError("duplicate transition", index);
        }
        return b.build();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what(), 0);
    }
}

/// Text or JSON, by the first significant character.
inline Dfa parse_dfa(std::string_view text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            const std::size_t line =
                static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(
                                                                      std::min(e.byte, text.size())),
                                                    '\n')) + 1;
            throw ParseError(e.what(), line);
        }
        return parse_dfa_json(j);
    }
    return parse_dfa_text(text);
}

inline Dfa load_dfa(const std::string& path) { return parse_dfa(read_file(path)); }

inline std::string write_dfa_text(const Dfa& d) {
    std::ostringstream out;
    const auto& names = d.alphabet().names();
    out << "alphabet:";
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? " < " : " ") << names[i];
    out << "\nstates:";
    for (State q = 0; q < d.state_count(); ++q)
        out << ' ' << d.state_name(q);
    out << "\ninitial: " << d.state_name(d.initial()) << "\nfinals:";
    for (State q = 0; q < d.state_count(); ++q)
        if (d.is_final(q))
            out << ' ' << d.state_name(q);
    out << '\n';
    for (State q = 0; q < d.state_count(); ++q)
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState)
                out << "trans: " << d.state_name(q) << ' ' << d.alphabet().name(a) << ' ' << d.state_name(t) << '\n';
    return out.str();
}

inline nlohmann::json dfa_to_json(const Dfa& d) {
    nlohmann::json j;
    j["alphabet"] = d.alphabet().names();
    j["states"] = d.state_names();
    j["initial"] = d.state_name(d.initial());
    j["finals"] = nlohmann::json::array();
    for (State q = 0; q < d.state_count(); ++q)
        if (d.is_final(q))
            j["finals"].push_back(d.state_name(q));
    j["trans"] = nlohmann::json::array();
    for (State q = 0; q < d.state_count(); ++q)
        for (Letter a = 0; a < d.alphabet().size(); ++a)
            if (State t = d.next(q, a); t != kNoState)
                j["trans"].push_back({d.state_name(q), d.alphabet().name(a), d.state_name(t)});
    return j;
}

// ---------------------------------------------------------------------------------------------
// Substitutions and morphisms

namespace detail {

struct Rule {
    std::size_t line;
    std::string lhs;
    std::string_view rhs;
};

inline std::vector<Rule> rules_of(const std::vector<Line>& lines, std::optional<std::string>& order,
                                  std::string_view order_key) {
    std::vector<Rule> out;
    for (const auto& [number, line] : lines) {
        const std::size_t arrow = line.find("->");
        if (arrow == std::string_view::npos) {
            const auto kv = keyed(line);
            if (kv && kv->first == order_key && !order) {
                order = std::string(kv->second);
                continue;
            }
            throw ParseError("expected 'letter -> image'", number);
        }
        const std::string lhs(trim_view(line.substr(0, arrow)));
        if (lhs.empty() || lhs.find_first_of(" \t") != std::string::npos)
            throw ParseError("left-hand side must be a single letter", number);
        for (const Rule& r : out)
            if (r.lhs == lhs)
                throw ParseError("second rule for '" + lhs + "'", number);
        out.push_back({number, lhs, line.substr(arrow + 2)});
    }
    return out;
}

}  // namespace detail

inline Substitution parse_rules(std::string_view text) {
    std::optional<std::string> order;
    const auto lines = detail::lines_of(text);
    const auto rules = detail::rules_of(lines, order, "alphabet");
    const std::size_t last = lines.empty() ? 1 : lines.back().number;
    if (rules.empty())
        throw ParseError("no rules", last);
    std::vector<std::string> names;
    if (order) {
        names = detail::split_order(*order);
    } else {
        for (const auto& r : rules)
            names.push_back(r.lhs);
    }
    Alphabet alphabet;
    try {
        alphabet = Alphabet(names);
    } catch (const Error& e) {
        throw ParseError(e.what(), last);
    }
    std::vector<std::optional<Word>> images(alphabet.size());
    for (const auto& r : rules) {
        const auto a = alphabet.find(r.lhs);
        if (!a)
            throw ParseError("letter '" + r.lhs + "' is not in the alphabet", r.line);
        images[*a] = detail::parse_image(alphabet, r.rhs, r.line);
    }
    std::vector<Word> out;
    for (Letter a = 0; a < alphabet.size(); ++a) {
        if (!images[a])
            throw ParseError("no rule for letter '" + alphabet.name(a) + "'", last);
        out.push_back(std::move(*images[a]));
    }
    return Substitution(std::move(alphabet), std::move(out));
}

inline Substitution load_rules(const std::string& path) { return parse_rules(read_file(path)); }

inline std::string write_rules(const Substitution& s) {
    std::ostringstream out;
    const auto& names = s.alphabet().names();
    out << "alphabet:";
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? " < " : " ") << names[i];
    out << '\n';
    for (Letter a = 0; a < s.size(); ++a) {
        const Word& img = s.image(a);
        out << s.alphabet().name(a) << " -> " << (img.empty() ? "." : s.alphabet().format(img)) << '\n';
    }
    return out.str();
}

/// A morphism from `source`; every source letter needs a rule.
inline Morphism parse_morphism(std::string_view text, const Alphabet& source) {
    std::optional<std::string> order;
    const auto lines = detail::lines_of(text);
    const auto rules = detail::rules_of(lines, order, "target");
    const std::size_t last = lines.empty() ? 1 : lines.back().number;
    std::vector<std::string> targets;
    if (order) {
        targets = detail::split_order(*order);
    } else {
        for (const auto& r : rules) {
            std::string_view rhs = detail::trim_view(r.rhs);
            if (rhs.empty() || rhs == ".")
                continue;
            std::vector<std::string> toks;
            if (rhs.find_first_of(" \t") != std::string_view::npos)
                toks = detail::split_ws(rhs);
            else
                for (char c : rhs)
                    toks.emplace_back(1, c);
            targets.insert(targets.end(), toks.begin(), toks.end());
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }
    Alphabet target;
    try {
        target = Alphabet(targets);
    } catch (const Error& e) {
        throw ParseError(e.what(), last);
    }
    std::vector<std::optional<Word>> images(source.size());
    for (const auto& r : rules) {
        const auto a = source.find(r.lhs);
        if (!a)
            throw ParseError("letter '" + r.lhs + "' is not in the source alphabet", r.line);
        images[*a] = detail::parse_image(target, r.rhs, r.line);
    }
    std::vector<Word> out;
    for (Letter a = 0; a < source.size(); ++a) {
        if (!images[a])
            throw ParseError("no image for letter '" + source.name(a) + "'", last);
        out.push_back(std::move(*images[a]));
    }
    return Morphism(source, std::move(target), std::move(out));
}

inline std::string write_morphism(const Morphism& m) {
    std::ostringstream out;
    const auto& names = m.target().names();
    out << "target:";
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? " < " : " ") << names[i];
    out << '\n';
    for (Letter a = 0; a < m.source().size(); ++a) {
        const Word& img = m.image(a);
        out << m.source().name(a) << " -> " << (img.empty() ? "." : m.target().format(img)) << '\n';
    }
    return out.str();
}

}  // namespace synd
