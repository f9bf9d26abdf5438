#include "gevo/tree.hpp"

#include <algorithm>
#include <cstddef>

namespace gevo {

namespace {

// Indices of the alternatives whose minimal completion still fits under
// max_depth when expanded at `depth`.
std::vector<int> fitting_choices(const GrammarRule& rule, int depth, int max_depth) {
    std::vector<int> out;
    for (int i = 0; i < rule.num_choices(); ++i)
        if (depth + rule.choices[i].min_depth - 1 <= max_depth) out.push_back(i);
    return out;
}

int pick_uniform(const std::vector<int>& pool, std::mt19937& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng)];
}

// Full policy: keep branches growing. Recursive alternatives that fit are
// preferred; otherwise fall back to the deepest fitting ones so the branch
// gets as close to the limit as the grammar allows.
int pick_full(const GrammarRule& rule, const std::vector<int>& fit, std::mt19937& rng) {
    std::vector<int> pool;
    for (int i : fit)
        if (rule.choices[i].recursive) pool.push_back(i);
    if (pool.empty()) {
        int deepest = 0;
        for (int i : fit) deepest = std::max(deepest, rule.choices[i].min_depth);
        for (int i : fit)
            if (rule.choices[i].min_depth == deepest) pool.push_back(i);
    }
    return pick_uniform(pool, rng);
}

DerivationTree build_recursive(const Grammar& grammar, const std::string& rule_name, int depth,
                               int max_depth, BuildMode mode, std::uint32_t codon_size,
                               std::mt19937& rng) {
    const GrammarRule& rule = grammar.rule(rule_name);
    auto fit = fitting_choices(rule, depth, max_depth);
    if (fit.empty())
        throw DepthInfeasible("<" + rule_name + "> cannot complete within depth " +
                              std::to_string(max_depth) + " from depth " + std::to_string(depth));

    int choice = mode == BuildMode::full ? pick_full(rule, fit, rng) : pick_uniform(fit, rng);

    DerivationTree node;
    node.rule = rule_name;
    node.depth = depth;
    node.choice_index = choice;
    node.codon = synthesize_codon(choice, rule.num_choices(), codon_size, rng);
    for (const auto& sym : rule.choices[choice].symbols)
        if (!sym.is_terminal())
            node.children.push_back(
                build_recursive(grammar, sym.text, depth + 1, max_depth, mode, codon_size, rng));
    return node;
}

// True when a node over `rule` at `depth` can still carry the obligation to
// reach max_depth: some fitting alternative either recurses (depth keeps
// growing) or bottoms out exactly at the limit.
bool can_force(const GrammarRule& rule, int depth, int max_depth) {
    for (int i = 0; i < rule.num_choices(); ++i) {
        const auto& p = rule.choices[i];
        if (depth + p.min_depth - 1 > max_depth) continue;
        if (p.recursive || depth + p.min_depth - 1 == max_depth) return true;
    }
    return false;
}

DerivationTree build_pi_grow(const Grammar& grammar, int max_depth, std::uint32_t codon_size,
                             std::mt19937& rng) {
    const GrammarRule& start = grammar.start_rule();
    if (max_depth < start.min_depth)
        throw DepthInfeasible("<" + start.lhs + "> needs depth " + std::to_string(start.min_depth) +
                              ", limit is " + std::to_string(max_depth));

    DerivationTree root;
    root.rule = start.lhs;
    root.depth = 1;

    // One branch must end exactly at max_depth. Until some expansion pins that
    // down (committed), a designated node on the frontier is steered toward
    // recursive or exactly-bottoming alternatives; everything else grows
    // freely under the cap.
    bool committed = start.min_depth == max_depth;
    DerivationTree* designated = committed ? nullptr : &root;
    std::vector<DerivationTree*> frontier = {&root};

    while (!frontier.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        std::size_t at = pick(rng);
        DerivationTree* node = frontier[at];
        frontier[at] = frontier.back();
        frontier.pop_back();

        const GrammarRule& rule = grammar.rule(node->rule);
        auto fit = fitting_choices(rule, node->depth, max_depth);
        int choice;
        if (!committed && node == designated) {
            std::vector<int> forcing;
            for (int i : fit) {
                const auto& p = rule.choices[i];
                if (p.recursive || node->depth + p.min_depth - 1 == max_depth) forcing.push_back(i);
            }
            choice = pick_uniform(forcing.empty() ? fit : forcing, rng);
        } else {
            choice = pick_uniform(fit, rng);
        }

        node->choice_index = choice;
        node->codon = synthesize_codon(choice, rule.num_choices(), codon_size, rng);
        const Production& prod = rule.choices[choice];

        std::size_t n_children = 0;
        for (const auto& sym : prod.symbols)
            if (!sym.is_terminal()) ++n_children;
        node->children.reserve(n_children);  // frontier keeps raw pointers; never reallocate
        for (const auto& sym : prod.symbols) {
            if (sym.is_terminal()) continue;
            DerivationTree child;
            child.rule = sym.text;
            child.depth = node->depth + 1;
            node->children.push_back(std::move(child));
        }
        for (auto& child : node->children) frontier.push_back(&child);

        if (committed) continue;
        if (node->depth + prod.min_depth - 1 == max_depth) {
            // This subtree can only finish at exactly max_depth.
            committed = true;
            designated = nullptr;
        } else if (node == designated) {
            std::vector<DerivationTree*> heirs;
            for (auto& child : node->children)
                if (can_force(grammar.rule(child.rule), child.depth, max_depth))
                    heirs.push_back(&child);
            if (heirs.empty()) {
                committed = true;  // grammar cannot reach the limit from here
                designated = nullptr;
            } else {
                std::uniform_int_distribution<std::size_t> h(0, heirs.size() - 1);
                designated = heirs[h(rng)];
            }
        }
    }
    return root;
}

void collect_codons(const DerivationTree& node, std::vector<std::uint32_t>& out) {
    out.push_back(node.codon);
    for (const auto& child : node.children) collect_codons(child, out);
}

void render(const DerivationTree& node, const Grammar& grammar, std::string& out) {
    const GrammarRule& rule = grammar.rule(node.rule);
    if (node.choice_index < 0 || node.choice_index >= rule.num_choices())
        throw std::invalid_argument("tree node for <" + node.rule + "> has choice index " +
                                    std::to_string(node.choice_index) + " out of range");
    const Production& prod = rule.choices[node.choice_index];
    std::size_t next_child = 0;
    for (const auto& sym : prod.symbols) {
        if (sym.is_terminal()) {
            out += sym.text;
        } else {
            if (next_child >= node.children.size())
                throw std::invalid_argument("tree node for <" + node.rule +
                                            "> is missing children for its alternative");
            render(node.children[next_child++], grammar, out);
        }
    }
    if (next_child != node.children.size())
        throw std::invalid_argument("tree node for <" + node.rule +
                                    "> has surplus children for its alternative");
}

}  // namespace

std::uint32_t make_codon(int choice_index, int num_choices, std::uint32_t multiple) {
    if (num_choices < 1) throw std::invalid_argument("num_choices must be positive");
    if (choice_index < 0 || choice_index >= num_choices)
        throw std::invalid_argument("choice_index out of range");
    auto n = static_cast<std::uint32_t>(num_choices);
    if (multiple == 0 || multiple % n != 0)
        throw std::invalid_argument("multiple must be a positive multiple of num_choices");
    return multiple + static_cast<std::uint32_t>(choice_index);
}

std::uint32_t synthesize_codon(int choice_index, int num_choices, std::uint32_t codon_size,
                               std::mt19937& rng) {
    if (num_choices < 1) throw std::invalid_argument("num_choices must be positive");
    if (choice_index < 0 || choice_index >= num_choices)
        throw std::invalid_argument("choice_index out of range");
    auto n = static_cast<std::uint32_t>(num_choices);
    // Largest k with k*n + (n-1) < codon_size; k >= 1 keeps codons above the
    // raw choice index, matching how codons are written from trees.
    std::uint32_t max_k = codon_size >= n ? (codon_size - n) / n : 0;
    if (max_k < 1)
        throw RangeTooSmall("codon_size " + std::to_string(codon_size) +
                            " cannot encode a choice among " + std::to_string(num_choices));
    std::uniform_int_distribution<std::uint32_t> dist(1, max_k);
    return make_codon(choice_index, num_choices, dist(rng) * n);
}

DerivationTree build_tree(const Grammar& grammar, int max_depth, BuildMode mode, std::mt19937& rng,
                          std::uint32_t codon_size) {
    if (mode == BuildMode::pi_grow) return build_pi_grow(grammar, max_depth, codon_size, rng);
    const GrammarRule& start = grammar.start_rule();
    if (max_depth < start.min_depth)
        throw DepthInfeasible("<" + start.lhs + "> needs depth " + std::to_string(start.min_depth) +
                              ", limit is " + std::to_string(max_depth));
    return build_recursive(grammar, start.lhs, 1, max_depth, mode, codon_size, rng);
}

DerivationTree grow_subtree(const Grammar& grammar, const std::string& rule, int at_depth,
                            int max_depth, std::mt19937& rng, std::uint32_t codon_size) {
    return build_recursive(grammar, rule, at_depth, max_depth, BuildMode::grow, codon_size, rng);
}

Genome tree_to_genome(const DerivationTree& tree, std::uint32_t codon_size) {
    std::vector<std::uint32_t> codons;
    collect_codons(tree, codons);
    return Genome(std::move(codons), codon_size);
}

std::string tree_phenotype(const DerivationTree& tree, const Grammar& grammar) {
    std::string out;
    render(tree, grammar, out);
    return out;
}

int tree_depth(const DerivationTree& tree) {
    int deepest = 0;
    for (const auto& child : tree.children) deepest = std::max(deepest, tree_depth(child));
    return 1 + deepest;
}

int tree_node_count(const DerivationTree& tree) {
    int count = 1;
    for (const auto& child : tree.children) count += tree_node_count(child);
    return count;
}

void reroot_depths(DerivationTree& tree, int at_depth) {
    tree.depth = at_depth;
    for (auto& child : tree.children) reroot_depths(child, at_depth + 1);
}

}  // namespace gevo
