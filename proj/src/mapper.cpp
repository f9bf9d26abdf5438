#include "gevo/mapper.hpp"

#include <algorithm>
#include <stdexcept>

namespace gevo {

namespace {

struct PendingSymbol {
    const GrammarSymbol* sym;
    int depth;
};

MappingResult aborted(std::size_t used, int wraps) {
    MappingResult r;
    r.invalid = true;
    r.used_codons = used;
    r.wraps = wraps;
    return r;
}

// Shared read head for the tree-building path.
struct TreeMapState {
    const Grammar& grammar;
    const Genome& genome;
    int max_wraps;
    int max_tree_depth;
    std::size_t pos = 0;
    std::size_t used = 0;
    int wraps = 0;
    int nodes = 0;
    int deepest = 0;
    std::string out = {};
};

bool expand_node(TreeMapState& st, DerivationTree& node) {
    if (st.max_tree_depth > 0 && node.depth > st.max_tree_depth) return false;
    if (st.pos == st.genome.size()) {
        if (st.wraps >= st.max_wraps) return false;
        ++st.wraps;
        st.pos = 0;
    }
    std::uint32_t codon = st.genome[st.pos++];
    ++st.used;

    const GrammarRule& rule = st.grammar.rule(node.rule);
    node.codon = codon;
    node.choice_index = static_cast<int>(codon % static_cast<std::uint32_t>(rule.num_choices()));
    ++st.nodes;
    st.deepest = std::max(st.deepest, node.depth);

    for (const auto& sym : rule.choices[node.choice_index].symbols) {
        if (sym.is_terminal()) {
            st.out += sym.text;
            continue;
        }
        DerivationTree child;
        child.rule = sym.text;
        child.depth = node.depth + 1;
        if (!expand_node(st, child)) return false;
        node.children.push_back(std::move(child));
    }
    return true;
}

}  // namespace

MappingResult map_genome(const Grammar& grammar, const Genome& genome, int max_wraps,
                         int max_tree_depth) {
    if (genome.empty()) throw std::invalid_argument("cannot map an empty genome");

    GrammarSymbol start{SymbolKind::non_terminal, grammar.start};
    std::vector<PendingSymbol> stack = {{&start, 1}};

    std::size_t pos = 0;
    std::size_t used = 0;
    int wraps = 0;
    int nodes = 0;
    int deepest = 0;
    std::string out;

    while (!stack.empty()) {
        auto [sym, depth] = stack.back();
        stack.pop_back();
        if (sym->is_terminal()) {
            out += sym->text;
            continue;
        }
        if (max_tree_depth > 0 && depth > max_tree_depth) return aborted(used, wraps);
        if (pos == genome.size()) {
            if (wraps >= max_wraps) return aborted(used, wraps);
            ++wraps;
            pos = 0;
        }
        std::uint32_t codon = genome[pos++];
        ++used;

        const GrammarRule& rule = grammar.rule(sym->text);
        auto choice = static_cast<std::size_t>(codon % static_cast<std::uint32_t>(rule.num_choices()));
        ++nodes;
        deepest = std::max(deepest, depth);

        const auto& symbols = rule.choices[choice].symbols;
        for (auto it = symbols.rbegin(); it != symbols.rend(); ++it)
            stack.push_back({&*it, depth + 1});
    }

    MappingResult r;
    r.phenotype = std::move(out);
    r.invalid = false;
    r.used_codons = used;
    r.wraps = wraps;
    r.depth = deepest;
    r.nodes = nodes;
    return r;
}

TreeMappingResult map_genome_with_tree(const Grammar& grammar, const Genome& genome, int max_wraps,
                                       int max_tree_depth) {
    if (genome.empty()) throw std::invalid_argument("cannot map an empty genome");

    TreeMapState st{.grammar = grammar,
                    .genome = genome,
                    .max_wraps = max_wraps,
                    .max_tree_depth = max_tree_depth};
    DerivationTree root;
    root.rule = grammar.start;
    root.depth = 1;

    TreeMappingResult out;
    if (!expand_node(st, root)) {
        out.result = aborted(st.used, st.wraps);
        return out;
    }
    out.result.phenotype = std::move(st.out);
    out.result.invalid = false;
    out.result.used_codons = st.used;
    out.result.wraps = st.wraps;
    out.result.depth = st.deepest;
    out.result.nodes = st.nodes;
    out.tree = std::move(root);
    return out;
}

}  // namespace gevo
