#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gevo/grammar.hpp>

#include <optional>
#include <set>
#include <string>

using namespace gevo;

namespace {

// Independent minimum-depth oracle: iterative deepening over derivations,
// no memoisation, no fixed point.  A terminal needs no further expansion;
// a non-terminal fits in `budget` levels if one alternative fits all its
// symbols in budget - 1.
bool completes_within(const Grammar& g, const GrammarSymbol& s, int budget) {
    if (s.is_terminal()) return true;
    if (budget < 1) return false;
    for (const auto& p : g.rule(s.text).choices) {
        bool ok = true;
        for (const auto& child : p.symbols) {
            if (!completes_within(g, child, budget - 1)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

int oracle_min_depth(const Grammar& g, const std::string& nt, int cap = 24) {
    GrammarSymbol s{SymbolKind::non_terminal, nt};
    for (int d = 1; d <= cap; ++d)
        if (completes_within(g, s, d)) return d;
    return -1;
}

// Independent recursion oracle: breadth-first reachability over direct
// non-terminal references.
std::set<std::string> reachable_from(const Grammar& g, const std::string& nt) {
    std::set<std::string> seen;
    std::vector<std::string> queue{nt};
    while (!queue.empty()) {
        std::string cur = queue.back();
        queue.pop_back();
        for (const auto& p : g.rule(cur).choices) {
            for (const auto& s : p.symbols) {
                if (s.is_terminal()) continue;
                if (seen.insert(s.text).second) queue.push_back(s.text);
            }
        }
    }
    return seen;
}

template <typename F>
std::optional<GrammarError::Kind> error_kind(F&& f) {
    try {
        f();
    } catch (const GrammarError& e) {
        return e.kind;
    }
    return std::nullopt;
}

void check_depths_against_oracle(const Grammar& g) {
    for (const auto& rule : g.rules) {
        CAPTURE(rule.lhs);
        CHECK(rule.min_depth == oracle_min_depth(g, rule.lhs));
        for (const auto& p : rule.choices) {
            int expect = 1;
            for (const auto& s : p.symbols)
                if (!s.is_terminal()) expect = std::max(expect, 1 + oracle_min_depth(g, s.text));
            CHECK(p.min_depth == expect);
        }
    }
}

void check_recursion_against_oracle(const Grammar& g) {
    for (const auto& rule : g.rules) {
        CAPTURE(rule.lhs);
        bool rule_rec = false;
        for (const auto& p : rule.choices) {
            bool prod_rec = false;
            for (const auto& s : p.symbols) {
                if (s.is_terminal()) continue;
                if (s.text == rule.lhs || reachable_from(g, s.text).contains(rule.lhs)) {
                    prod_rec = true;
                    break;
                }
            }
            CHECK(p.recursive == prod_rec);
            rule_rec = rule_rec || prod_rec;
        }
        CHECK(rule.recursive == rule_rec);
    }
}

}  // namespace

TEST_CASE("small grammar parses into the expected structure") {
    Grammar g = parse_bnf("<e> ::= <e> + <e> | <v>\n<v> ::= x | y\n");

    CHECK(g.start == "e");
    REQUIRE(g.rules.size() == 2);
    CHECK(g.rules[0].lhs == "e");
    CHECK(g.rules[1].lhs == "v");
    CHECK(g.rules[0].num_choices() == 2);
    CHECK(g.rules[1].num_choices() == 2);
    CHECK_FALSE(g.rules[0].is_unit());

    const auto& sum = g.rules[0].choices[0].symbols;
    REQUIRE(sum.size() == 3);
    CHECK(sum[0] == GrammarSymbol{SymbolKind::non_terminal, "e"});
    CHECK(sum[1] == GrammarSymbol{SymbolKind::terminal, "+"});
    CHECK(sum[2] == GrammarSymbol{SymbolKind::non_terminal, "e"});

    CHECK(g.non_terminals == std::set<std::string>{"e", "v"});
    CHECK(g.terminals == std::set<std::string>{"+", "x", "y"});
    CHECK(g.has_rule("e"));
    CHECK_FALSE(g.has_rule("q"));
    CHECK(error_kind([&] { g.rule("q"); }) == GrammarError::Kind::undefined_non_terminal);
}

TEST_CASE("minimum depths match the iterative-deepening oracle") {
    SUBCASE("expression grammar") {
        Grammar g = parse_bnf("<e> ::= <e> + <e> | <v>\n<v> ::= x | y\n");
        check_depths_against_oracle(g);
        CHECK(g.rule("e").min_depth == 2);
        CHECK(g.rule("v").min_depth == 1);
        CHECK(g.rule("e").choices[0].min_depth == 3);
        CHECK(g.rule("e").choices[1].min_depth == 2);
    }
    SUBCASE("chain of unit rules") {
        Grammar g = parse_bnf("<a> ::= <b>\n<b> ::= <c>\n<c> ::= x\n");
        check_depths_against_oracle(g);
        CHECK(g.rule("a").min_depth == 3);
    }
    SUBCASE("deep branch wins over shallow sibling") {
        Grammar g = parse_bnf(
            "<s> ::= <a> <b>\n"
            "<a> ::= <s> | x\n"
            "<b> ::= <b> y | <a> z\n");
        check_depths_against_oracle(g);
        CHECK(g.rule("s").min_depth == 3);
        CHECK(g.rule("b").min_depth == 2);
    }
    SUBCASE("fixture grammars") {
        GrammarContext ctx;
        ctx.dataset_n_vars = 5;
        for (const char* name :
             {"/grammars/letters.bnf", "/grammars/regression.bnf", "/grammars/quartic.bnf",
              "/grammars/classification.bnf", "/grammars/max_program.bnf"}) {
            CAPTURE(name);
            Grammar g = load_grammar(std::string(GEVO_ROOT) + name, ctx);
            check_depths_against_oracle(g);
        }
    }
}

TEST_CASE("recursion flags match the reachability oracle") {
    Grammar direct = parse_bnf("<e> ::= <e> + <e> | <v>\n<v> ::= x | y\n");
    check_recursion_against_oracle(direct);
    CHECK(direct.rule("e").recursive);
    CHECK(direct.rule("e").choices[0].recursive);
    CHECK_FALSE(direct.rule("e").choices[1].recursive);
    CHECK_FALSE(direct.rule("v").recursive);

    Grammar indirect = parse_bnf(
        "<a> ::= <b> | x\n"
        "<b> ::= <c> y\n"
        "<c> ::= <a> | z\n");
    check_recursion_against_oracle(indirect);
    CHECK(indirect.rule("a").recursive);
    CHECK(indirect.rule("b").recursive);
    CHECK(indirect.rule("c").recursive);

    Grammar flat = parse_bnf("<a> ::= <b> <b>\n<b> ::= x | y\n");
    check_recursion_against_oracle(flat);
    CHECK_FALSE(flat.rule("a").recursive);
    CHECK_FALSE(flat.rule("b").recursive);
}

TEST_CASE("quoted terminals keep spacing, specials and quote characters") {
    Grammar g = parse_bnf(
        "<s> ::= 'v = ' <x> ' | ' | \"don't\" | '#not a comment' | ''\n"
        "<x> ::= y\n");

    REQUIRE(g.rules[0].num_choices() == 4);
    const auto& c0 = g.rules[0].choices[0].symbols;
    REQUIRE(c0.size() == 3);
    CHECK(c0[0].text == "v = ");
    CHECK(c0[2].text == " | ");
    CHECK(g.rules[0].choices[1].symbols[0].text == "don't");
    CHECK(g.rules[0].choices[2].symbols[0].text == "#not a comment");
    CHECK(g.rules[0].choices[3].symbols[0].text == "");
}

TEST_CASE("comments, blank lines and continuations are ignored") {
    std::string canonical = "<s> ::= <a> b | c\n<a> ::= d\n";
    Grammar base = parse_bnf(canonical);

    std::string noisy =
        "# leading comment\n"
        "\n"
        "<s> ::= <a> b   # trailing comment\n"
        "      | c\n"
        "\n"
        "<a> ::= d\n";
    CHECK(parse_bnf(noisy) == base);

    std::string tight = "<s>::=<a> b|c\n<a>::=d";
    CHECK(parse_bnf(tight) == base);
}

TEST_CASE("GE_RANGE expands to one integer terminal per alternative") {
    Grammar g = parse_bnf("<d> ::= GE_RANGE:3\n");
    REQUIRE(g.rules[0].num_choices() == 3);
    CHECK(g.rules[0].choices[0].symbols[0].text == "0");
    CHECK(g.rules[0].choices[2].symbols[0].text == "2");

    GrammarContext ctx;
    ctx.dataset_n_vars = 2;
    Grammar v = parse_bnf("<i> ::= GE_RANGE:dataset_n_vars\n", ctx);
    REQUIRE(v.rules[0].num_choices() == 2);
    CHECK(v.rules[0].choices[1].symbols[0].text == "1");

    CHECK(expand_ge_range("GE_RANGE:4", {}) == std::vector<std::string>{"0", "1", "2", "3"});

    CHECK(error_kind([] { parse_bnf("<i> ::= GE_RANGE:dataset_n_vars\n"); }) ==
          GrammarError::Kind::missing_dataset_context);
    CHECK(error_kind([] { parse_bnf("<i> ::= GE_RANGE:0\n"); }) ==
          GrammarError::Kind::non_positive_range);
    CHECK(error_kind([] { parse_bnf("<i> ::= GE_RANGE:soon\n"); }) ==
          GrammarError::Kind::malformed_rule);
    CHECK(error_kind([] { parse_bnf("<i> ::= GE_RANGE:2 x\n"); }) ==
          GrammarError::Kind::malformed_rule);
}

TEST_CASE("defective grammars raise the matching error kind") {
    CHECK(error_kind([] { parse_bnf(""); }) == GrammarError::Kind::empty_grammar);
    CHECK(error_kind([] { parse_bnf("# only comments\n\n"); }) ==
          GrammarError::Kind::empty_grammar);
    CHECK(error_kind([] { parse_bnf("<a> ::= <missing>\n"); }) ==
          GrammarError::Kind::undefined_non_terminal);
    CHECK(error_kind([] { parse_bnf("<a> ::= x\n<a> ::= y\n"); }) ==
          GrammarError::Kind::duplicate_rule);
    CHECK(error_kind([] { parse_bnf("<a> ::= <a> x\n"); }) ==
          GrammarError::Kind::non_terminating_rule);
    CHECK(error_kind([] { parse_bnf("<a> ::= <a> <b> | <b> <a>\n<b> ::= y\n"); }) ==
          GrammarError::Kind::non_terminating_rule);
    CHECK(error_kind([] { parse_bnf("<a> ::= x | | y\n"); }) ==
          GrammarError::Kind::malformed_rule);
    CHECK(error_kind([] { parse_bnf("stray text\n<a> ::= x\n"); }) ==
          GrammarError::Kind::malformed_rule);
    CHECK(error_kind([] { parse_bnf("<a> ::= 'unclosed\n"); }) ==
          GrammarError::Kind::malformed_rule);
}

TEST_CASE("pretty printed grammar reparses to an identical grammar") {
    GrammarContext ctx;
    ctx.dataset_n_vars = 5;
    for (const char* name :
         {"/grammars/letters.bnf", "/grammars/regression.bnf", "/grammars/quartic.bnf",
          "/grammars/classification.bnf", "/grammars/max_program.bnf"}) {
        CAPTURE(name);
        Grammar g = load_grammar(std::string(GEVO_ROOT) + name, ctx);
        Grammar again = parse_bnf(pretty_print(g));
        CHECK(g == again);
    }

    Grammar tricky = parse_bnf("<s> ::= \"don't\" | '#x' | '' | ' | '\n");
    CHECK(parse_bnf(pretty_print(tricky)) == tricky);
}

TEST_CASE("fixture grammars expose the frozen shape the runs rely on") {
    Grammar letters = load_grammar(std::string(GEVO_ROOT) + "/grammars/letters.bnf");
    CHECK(letters.start == "string");
    CHECK(letters.rule("string").min_depth == 2);
    CHECK(letters.rule("char").num_choices() == 57);
    CHECK(letters.rule("char").min_depth == 1);
    CHECK(letters.terminals.contains(" "));
    CHECK(letters.terminals.contains("!"));

    GrammarContext one;
    one.dataset_n_vars = 1;
    Grammar quartic = load_grammar(std::string(GEVO_ROOT) + "/grammars/quartic.bnf", one);
    CHECK(quartic.start == "e");
    CHECK(quartic.rule("e").min_depth == 2);
    CHECK(quartic.rule("e").recursive);
    CHECK(quartic.rule("idx").num_choices() == 1);
    CHECK(quartic.rule("idx").is_unit());
}
