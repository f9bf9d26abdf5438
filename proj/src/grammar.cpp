#include "gevo/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace gevo {

namespace {

constexpr int kInfDepth = std::numeric_limits<int>::max() / 2;
constexpr std::string_view kRangePrefix = "GE_RANGE:";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Removes a trailing '#' comment, honouring quoted terminals: a '#' inside
// '...' or "..." is payload, not a comment marker.
std::string_view strip_comment(std::string_view line) {
    char quote = '\0';
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote != '\0') {
            if (c == quote) quote = '\0';
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

// A line like "<name> ::= ..." opens a new rule; anything else continues the
// previous one. Returns the non-terminal name when the line is a rule head.
std::optional<std::string> rule_head(std::string_view line) {
    std::string_view s = trim(line);
    if (s.empty() || s.front() != '<') return std::nullopt;
    auto close = s.find('>');
    if (close == std::string_view::npos) return std::nullopt;
    std::string_view name = s.substr(1, close - 1);
    if (name.empty() || name.find('<') != std::string_view::npos) return std::nullopt;
    std::string_view rest = trim(s.substr(close + 1));
    if (!rest.starts_with("::=")) return std::nullopt;
    return std::string(name);
}

struct RawToken {
    enum class Kind { non_terminal, terminal, bare, separator } kind;
    std::string text;
};

// Splits a rule body into tokens: <name>, quoted literals, bare words and the
// '|' separator. Bare words end at whitespace, quotes, '<' or '|'.
std::vector<RawToken> tokenize_body(std::string_view body, const std::string& lhs) {
    std::vector<RawToken> out;
    std::size_t i = 0;
    while (i < body.size()) {
        char c = body[i];
        if (is_space(c)) {
            ++i;
        } else if (c == '|') {
            out.push_back({RawToken::Kind::separator, "|"});
            ++i;
        } else if (c == '<') {
            auto close = body.find('>', i + 1);
            if (close == std::string_view::npos)
                throw GrammarError(GrammarError::Kind::malformed_rule,
                                   "unclosed '<' in rule <" + lhs + ">");
            std::string name(body.substr(i + 1, close - i - 1));
            if (name.empty())
                throw GrammarError(GrammarError::Kind::malformed_rule,
                                   "empty non-terminal in rule <" + lhs + ">");
            out.push_back({RawToken::Kind::non_terminal, std::move(name)});
            i = close + 1;
        } else if (c == '\'' || c == '"') {
            auto close = body.find(c, i + 1);
            if (close == std::string_view::npos)
                throw GrammarError(GrammarError::Kind::malformed_rule,
                                   "unterminated quote in rule <" + lhs + ">");
            out.push_back({RawToken::Kind::terminal, std::string(body.substr(i + 1, close - i - 1))});
            i = close + 1;
        } else {
            std::size_t j = i;
            while (j < body.size() && !is_space(body[j]) && body[j] != '|' && body[j] != '<' &&
                   body[j] != '\'' && body[j] != '"')
                ++j;
            out.push_back({RawToken::Kind::bare, std::string(body.substr(i, j - i))});
            i = j;
        }
    }
    return out;
}

std::vector<Production> parse_body(std::string_view body, const std::string& lhs,
                                   const GrammarContext& context) {
    std::vector<std::vector<RawToken>> alts(1);
    for (auto& tok : tokenize_body(body, lhs)) {
        if (tok.kind == RawToken::Kind::separator)
            alts.emplace_back();
        else
            alts.back().push_back(std::move(tok));
    }

    std::vector<Production> productions;
    for (const auto& alt : alts) {
        if (alt.empty())
            throw GrammarError(GrammarError::Kind::malformed_rule,
                               "empty alternative in rule <" + lhs +
                                   "> (use an explicit quoted '' for an empty terminal)");

        // GE_RANGE expands to one alternative per integer and must stand alone.
        bool has_range = std::any_of(alt.begin(), alt.end(), [](const RawToken& t) {
            return t.kind == RawToken::Kind::bare && t.text.starts_with(kRangePrefix);
        });
        if (has_range) {
            if (alt.size() != 1)
                throw GrammarError(GrammarError::Kind::malformed_rule,
                                   "GE_RANGE must be the only symbol of its alternative in rule <" +
                                       lhs + ">");
            for (auto& value : expand_ge_range(alt.front().text, context))
                productions.push_back({{{SymbolKind::terminal, std::move(value)}}, 0, false});
            continue;
        }

        Production p;
        for (const auto& tok : alt) {
            SymbolKind kind = tok.kind == RawToken::Kind::non_terminal ? SymbolKind::non_terminal
                                                                       : SymbolKind::terminal;
            p.symbols.push_back({kind, tok.text});
        }
        productions.push_back(std::move(p));
    }
    return productions;
}

// True when `name` can appear somewhere in a derivation starting from `from`.
// `reaches` maps each rule to the set of non-terminals reachable in one step.
bool reaches_transitively(const std::map<std::string, std::set<std::string>>& reaches,
                          const std::string& from, const std::string& name) {
    std::set<std::string> seen;
    std::vector<const std::string*> stack = {&from};
    while (!stack.empty()) {
        const std::string& cur = *stack.back();
        stack.pop_back();
        auto it = reaches.find(cur);
        if (it == reaches.end()) continue;
        for (const auto& next : it->second) {
            if (next == name) return true;
            if (seen.insert(next).second) stack.push_back(&next);
        }
    }
    return false;
}

// Quotes a terminal for printing. Prefers double quotes, falls back to single
// quotes when the payload itself contains a double quote.
std::string quote_terminal(const std::string& text) {
    if (text.find('"') == std::string::npos) return '"' + text + '"';
    if (text.find('\'') == std::string::npos) return '\'' + text + '\'';
    throw std::invalid_argument("terminal mixes both quote characters and cannot be printed: " +
                                text);
}

}  // namespace

const GrammarRule& Grammar::rule(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw GrammarError(GrammarError::Kind::undefined_non_terminal,
                           "undefined non-terminal <" + std::string(name) + ">");
    return rules[it->second];
}

void Grammar::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < rules.size(); ++i) index_.emplace(rules[i].lhs, i);
}

std::vector<std::string> expand_ge_range(std::string_view token, const GrammarContext& context) {
    if (!token.starts_with(kRangePrefix))
        throw GrammarError(GrammarError::Kind::malformed_rule,
                           "not a GE_RANGE token: " + std::string(token));
    std::string_view arg = token.substr(kRangePrefix.size());

    int n = 0;
    if (arg == "dataset_n_vars") {
        if (!context.dataset_n_vars)
            throw GrammarError(GrammarError::Kind::missing_dataset_context,
                               "GE_RANGE:dataset_n_vars used without a loaded dataset");
        n = *context.dataset_n_vars;
    } else {
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
        if (ec != std::errc{} || ptr != arg.data() + arg.size())
            throw GrammarError(GrammarError::Kind::malformed_rule,
                               "malformed GE_RANGE argument: " + std::string(arg));
    }
    if (n <= 0)
        throw GrammarError(GrammarError::Kind::non_positive_range,
                           "GE_RANGE needs a positive count, got " + std::to_string(n));

    std::vector<std::string> values;
    values.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) values.push_back(std::to_string(i));
    return values;
}

Grammar parse_bnf(std::string_view text, const GrammarContext& context) {
    // Gather rule chunks: a head line plus its continuation lines.
    std::vector<std::pair<std::string, std::string>> chunks;  // lhs, body
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = strip_comment(text.substr(pos, eol - pos));
        ++line_no;
        pos = eol + 1;

        std::string_view stripped = trim(line);
        if (stripped.empty()) continue;
        if (auto head = rule_head(stripped)) {
            std::string_view body = stripped.substr(stripped.find("::=") + 3);
            chunks.emplace_back(std::move(*head), std::string(trim(body)));
        } else {
            if (chunks.empty())
                throw GrammarError(GrammarError::Kind::malformed_rule,
                                   "line " + std::to_string(line_no) +
                                       ": expected '<name> ::= ...' before any other content");
            chunks.back().second += ' ';
            chunks.back().second += stripped;
        }
    }
    if (chunks.empty())
        throw GrammarError(GrammarError::Kind::empty_grammar, "grammar has no rules");

    Grammar g;
    for (auto& [lhs, body] : chunks) {
        bool duplicate = std::any_of(g.rules.begin(), g.rules.end(),
                                     [&](const GrammarRule& r) { return r.lhs == lhs; });
        if (duplicate)
            throw GrammarError(GrammarError::Kind::duplicate_rule,
                               "rule <" + lhs + "> is defined more than once");
        GrammarRule rule;
        rule.lhs = lhs;
        rule.choices = parse_body(body, lhs, context);
        g.rules.push_back(std::move(rule));
    }
    g.start = g.rules.front().lhs;
    g.rebuild_index();

    for (const auto& rule : g.rules) {
        g.non_terminals.insert(rule.lhs);
        for (const auto& prod : rule.choices)
            for (const auto& sym : prod.symbols) {
                if (sym.is_terminal()) {
                    g.terminals.insert(sym.text);
                } else if (!g.has_rule(sym.text)) {
                    throw GrammarError(GrammarError::Kind::undefined_non_terminal,
                                       "rule <" + rule.lhs + "> references undefined <" + sym.text +
                                           ">");
                }
            }
    }

    analyze(g);
    return g;
}

Grammar load_grammar(const std::string& path, const GrammarContext& context) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open grammar file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bnf(buf.str(), context);
}

void analyze(Grammar& grammar) {
    // Minimum derivation depth by fixed point. A production's depth is one
    // (its own node) plus the deepest of its non-terminal children; a rule
    // takes the cheapest of its alternatives. Unresolvable rules stay at the
    // infinity sentinel and have no finite derivation.
    for (auto& rule : grammar.rules) {
        rule.min_depth = kInfDepth;
        for (auto& prod : rule.choices) prod.min_depth = kInfDepth;
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& rule : grammar.rules) {
            for (auto& prod : rule.choices) {
                int depth = 1;
                for (const auto& sym : prod.symbols) {
                    if (sym.is_terminal()) continue;
                    int child = grammar.rule(sym.text).min_depth;
                    if (child >= kInfDepth) {
                        depth = kInfDepth;
                        break;
                    }
                    depth = std::max(depth, 1 + child);
                }
                if (depth != prod.min_depth) {
                    prod.min_depth = depth;
                    changed = true;
                }
            }
            int best = kInfDepth;
            for (const auto& prod : rule.choices) best = std::min(best, prod.min_depth);
            if (best != rule.min_depth) {
                rule.min_depth = best;
                changed = true;
            }
        }
    }
    for (const auto& rule : grammar.rules)
        if (rule.min_depth >= kInfDepth)
            throw GrammarError(GrammarError::Kind::non_terminating_rule,
                               "rule <" + rule.lhs + "> cannot derive any finite string");

    // Recursion: an alternative is recursive when one of its non-terminals is
    // the rule itself or can rederive it.
    std::map<std::string, std::set<std::string>> direct;
    for (const auto& rule : grammar.rules) {
        auto& refs = direct[rule.lhs];
        for (const auto& prod : rule.choices)
            for (const auto& sym : prod.symbols)
                if (!sym.is_terminal()) refs.insert(sym.text);
    }
    for (auto& rule : grammar.rules) {
        rule.recursive = false;
        for (auto& prod : rule.choices) {
            prod.recursive = false;
            for (const auto& sym : prod.symbols) {
                if (sym.is_terminal()) continue;
                if (sym.text == rule.lhs || reaches_transitively(direct, sym.text, rule.lhs)) {
                    prod.recursive = true;
                    break;
                }
            }
            rule.recursive = rule.recursive || prod.recursive;
        }
    }
}

std::string pretty_print(const Grammar& grammar) {
    std::ostringstream out;
    for (const auto& rule : grammar.rules) {
        out << '<' << rule.lhs << "> ::= ";
        for (std::size_t c = 0; c < rule.choices.size(); ++c) {
            if (c > 0) out << " | ";
            const auto& symbols = rule.choices[c].symbols;
            for (std::size_t s = 0; s < symbols.size(); ++s) {
                if (s > 0) out << ' ';
                if (symbols[s].is_terminal())
                    out << quote_terminal(symbols[s].text);
                else
                    out << '<' << symbols[s].text << '>';
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace gevo
