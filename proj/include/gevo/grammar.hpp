#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gevo {

// Parse or analysis failure. `kind` identifies the condition so callers and
// tests can react without string matching; `what()` carries the detail.
struct GrammarError : std::runtime_error {
    enum class Kind {
        malformed_rule,
        undefined_non_terminal,
        duplicate_rule,
        non_terminating_rule,
        empty_grammar,
        missing_dataset_context,
        non_positive_range,
    };

    GrammarError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

enum class SymbolKind { terminal, non_terminal };

struct GrammarSymbol {
    SymbolKind kind = SymbolKind::terminal;
    std::string text;  // non-terminal name without angle brackets, or terminal payload

    bool is_terminal() const { return kind == SymbolKind::terminal; }
    bool operator==(const GrammarSymbol&) const = default;
};

// One right-hand-side alternative of a rule.
struct Production {
    std::vector<GrammarSymbol> symbols;
    // Filled in by analyze(): smallest depth of any complete derivation through
    // this alternative, counting the expanded node itself as one level.
    int min_depth = 0;
    // True when this alternative can rederive its own left-hand side.
    bool recursive = false;

    bool operator==(const Production&) const = default;
};

struct GrammarRule {
    std::string lhs;
    std::vector<Production> choices;
    int min_depth = 0;       // min over choices, from analyze()
    bool recursive = false;  // any choice recursive

    int num_choices() const { return static_cast<int>(choices.size()); }
    bool is_unit() const { return choices.size() == 1; }
    bool operator==(const GrammarRule&) const = default;
};

// Context the source text may need while being parsed. `dataset_n_vars` feeds
// the GE_RANGE:dataset_n_vars macro and is the number of input columns of the
// active dataset.
struct GrammarContext {
    std::optional<int> dataset_n_vars;
};

// A parsed and analyzed BNF grammar. Rules keep their order of first
// definition; the first rule is the start symbol. Instances are immutable
// after parse_bnf returns and safe to share across threads read-only.
struct Grammar {
    std::vector<GrammarRule> rules;
    std::string start;
    std::set<std::string> terminals;
    std::set<std::string> non_terminals;

    bool has_rule(std::string_view name) const { return index_.contains(name); }
    const GrammarRule& rule(std::string_view name) const;
    const GrammarRule& start_rule() const { return rule(start); }

    void rebuild_index();  // restore the lookup table after rules change
    bool operator==(const Grammar& other) const {
        return rules == other.rules && start == other.start;
    }

  private:
    std::map<std::string, std::size_t, std::less<>> index_;
};

// Parses BNF text into an analyzed grammar. Supports '#' comments outside
// quotes, multi-line rules, single- and double-quoted terminals, and the
// GE_RANGE production macro. Throws GrammarError.
Grammar parse_bnf(std::string_view text, const GrammarContext& context = {});

// Reads the file and delegates to parse_bnf. Throws std::runtime_error when
// the file cannot be read.
Grammar load_grammar(const std::string& path, const GrammarContext& context = {});

// Expands a GE_RANGE token ("GE_RANGE:<n>" or "GE_RANGE:dataset_n_vars") into
// the list of integer terminals 0..n-1 it stands for.
std::vector<std::string> expand_ge_range(std::string_view token, const GrammarContext& context);

// Computes min_depth and recursion flags for every rule and production.
// Idempotent; parse_bnf already calls it. Throws GrammarError
// (non_terminating_rule) when some rule admits no finite derivation.
void analyze(Grammar& grammar);

// Renders the grammar as BNF that parse_bnf accepts again; re-parsing the
// output yields a structurally identical grammar. Terminals are always
// quoted so that spacing and specials survive the round trip.
std::string pretty_print(const Grammar& grammar);

}  // namespace gevo
