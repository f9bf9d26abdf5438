#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gevo/grammar.hpp>
#include <gevo/mapper.hpp>
#include <gevo/operators.hpp>
#include <gevo/tree.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace gevo;

namespace {

Grammar expr_grammar() {
    return parse_bnf("<e> ::= <e> + <e> | <v>\n<v> ::= x | y\n");
}

Grammar letters_grammar() {
    return load_grammar(std::string(GEVO_ROOT) + "/grammars/letters.bnf");
}

Individual scored(double fitness) {
    Individual ind;
    ind.genome = Genome({0});
    ind.fitness.value = fitness;
    return ind;
}

Individual unscored_invalid() {
    Individual ind;
    ind.genome = Genome({0});
    ind.invalid = true;
    return ind;
}

std::vector<double> fitness_values(const Population& pop) {
    std::vector<double> out;
    for (const auto& ind : pop) out.push_back(ind.fitness.value.value_or(-1));
    return out;
}

std::vector<std::uint32_t> codons_of(const Genome& g) {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g[i]);
    return out;
}

}  // namespace

TEST_CASE("random genome initialisation maps every member as-is") {
    Grammar g = letters_grammar();
    std::mt19937 rng(20260823);
    Population pop = init_random_genome(g, 60, 15, 1000, 0, false, rng);

    REQUIRE(pop.size() == 60);
    int invalids = 0;
    for (const auto& ind : pop) {
        REQUIRE(ind.genome.size() == 15);
        for (std::size_t i = 0; i < 15; ++i) CHECK(ind.genome[i] < 1000);

        auto r = map_genome(g, ind.genome, 0);
        CHECK(ind.invalid == r.invalid);
        CHECK(ind.used_codons == r.used_codons);
        CHECK(ind.phenotype == r.phenotype);
        invalids += ind.invalid;
    }
    // Short random genomes on a branching grammar cannot all map cleanly,
    // and most should still complete.
    CHECK(invalids > 0);
    CHECK(invalids < 30);
}

TEST_CASE("ramped half-and-half walks the depth ramp in full and grow pairs") {
    Grammar g = expr_grammar();
    std::mt19937 rng(17);
    const int depth_min = 2, depth_max = 5, buckets = 4;
    Population pop = init_tree_based(g, 24, depth_min, depth_max, InitMethod::rhh, 500, rng);

    REQUIRE(pop.size() == 24);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CAPTURE(i);
        const auto& ind = pop[i];
        int assigned = depth_min + static_cast<int>(i / 2) % buckets;
        REQUIRE(ind.tree.has_value());
        CHECK_FALSE(ind.invalid);
        if (i % 2 == 0)
            CHECK(tree_depth(*ind.tree) == assigned);  // full half hits the rung
        else
            CHECK(tree_depth(*ind.tree) <= assigned);

        // Tail: half the used length in extra random codons.
        CHECK(ind.genome.size() == ind.used_codons + ind.used_codons / 2);
        auto r = map_genome(g, ind.genome);
        CHECK(r.phenotype == ind.phenotype);
        CHECK(r.used_codons == ind.used_codons);
    }
}

TEST_CASE("pi grow initialisation hits each rung exactly") {
    Grammar g = expr_grammar();
    std::mt19937 rng(23);
    Population pop = init_tree_based(g, 12, 2, 4, InitMethod::pi_grow, 500, rng);
    REQUIRE(pop.size() == 12);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        int assigned = 2 + static_cast<int>(i) % 3;
        REQUIRE(pop[i].tree.has_value());
        CHECK(tree_depth(*pop[i].tree) == assigned);
    }
}

TEST_CASE("single depth initialisation uses one limit for everyone") {
    Grammar g = expr_grammar();
    std::mt19937 rng(29);
    Population pop = init_tree_based(g, 20, 2, 6, InitMethod::random_grow, 500, rng);
    for (const auto& ind : pop) {
        REQUIRE(ind.tree.has_value());
        CHECK(tree_depth(*ind.tree) <= 6);
    }
    CHECK_THROWS_AS(init_tree_based(g, 4, 1, 6, InitMethod::rhh, 500, rng), DepthInfeasible);
}

TEST_CASE("tournament selection matches the rank-power law") {
    // Minimising over fitnesses 0..9: the chance that rank k (0 is best) wins
    // a size-2 tournament is ((n-k)^2 - (n-k-1)^2) / n^2.
    Population pop;
    for (int i = 0; i < 10; ++i) pop.push_back(scored(i));
    std::mt19937 rng(20260823);

    const int trials = 40000;
    Population winners = select_tournament(pop, trials, 2, false, Direction::minimise, rng);
    REQUIRE(winners.size() == trials);

    std::map<int, int> counts;
    for (const auto& w : winners) counts[static_cast<int>(*w.fitness.value)]++;

    for (int k = 0; k < 10; ++k) {
        double n = 10;
        double p = ((n - k) * (n - k) - (n - k - 1) * (n - k - 1)) / (n * n);
        double expect = trials * p;
        double sigma = std::sqrt(trials * p * (1 - p));
        CAPTURE(k);
        CHECK(std::abs(counts[k] - expect) < 4 * sigma + 1);
    }
}

TEST_CASE("tournament pool handling") {
    std::mt19937 rng(5);
    Population pop;
    pop.push_back(unscored_invalid());
    pop.push_back(scored(3));
    pop.push_back(unscored_invalid());

    SUBCASE("invalids are filtered out by default") {
        Population winners = select_tournament(pop, 20, 3, false, Direction::minimise, rng);
        for (const auto& w : winners) CHECK(w.fitness.value == 3.0);
    }
    SUBCASE("an all-invalid pool is an error unless invalids are allowed") {
        Population all_invalid{unscored_invalid(), unscored_invalid()};
        CHECK_THROWS_AS(select_tournament(all_invalid, 5, 2, false, Direction::minimise, rng),
                        EmptyCandidatePool);
        Population winners = select_tournament(all_invalid, 5, 2, true, Direction::minimise, rng);
        CHECK(winners.size() == 5);
        for (const auto& w : winners) CHECK(w.invalid);
    }
    SUBCASE("maximise direction flips the preference") {
        Population ranked{scored(1), scored(9)};
        Population winners = select_tournament(ranked, 200, 2, false, Direction::maximise, rng);
        int nines = 0;
        for (const auto& w : winners) nines += w.fitness.value == 9.0;
        CHECK(nines > 120);  // expectation 150 of 200
    }
}

TEST_CASE("truncation keeps the best ceil fraction in rank order") {
    Population pop{scored(5), scored(1), scored(9), scored(3)};

    CHECK(fitness_values(select_truncation(pop, 0.5, Direction::minimise)) ==
          std::vector<double>{1, 3});
    CHECK(fitness_values(select_truncation(pop, 0.3, Direction::minimise)) ==
          std::vector<double>{1, 3});  // ceil(1.2) = 2
    CHECK(fitness_values(select_truncation(pop, 0.5, Direction::maximise)) ==
          std::vector<double>{9, 5});
    CHECK(select_truncation(pop, 1.0, Direction::minimise).size() == 4);
    CHECK(select_truncation(pop, 0.01, Direction::minimise).size() == 1);

    SUBCASE("ties keep their original order") {
        Population tied{scored(2), scored(2), scored(1)};
        Population kept = select_truncation(tied, 1.0, Direction::minimise);
        CHECK(fitness_values(kept) == std::vector<double>{1, 2, 2});
        CHECK(&kept[1] != &tied[0]);
    }
    SUBCASE("unscored individuals rank last") {
        Population mixed{unscored_invalid(), scored(4)};
        Population kept = select_truncation(mixed, 0.5, Direction::minimise);
        REQUIRE(kept.size() == 1);
        CHECK(kept[0].fitness.value == 4.0);
    }
}

TEST_CASE("splice cores produce the textbook children") {
    Genome a({1, 2, 3, 4});
    Genome b({5, 6, 7, 8});

    SUBCASE("one point, middle") {
        auto [c1, c2] = splice_onepoint(a, b, 2, 2);
        CHECK(codons_of(c1) == std::vector<std::uint32_t>{1, 2, 7, 8});
        CHECK(codons_of(c2) == std::vector<std::uint32_t>{5, 6, 3, 4});
    }
    SUBCASE("one point, boundaries swap whole genomes") {
        auto [c1, c2] = splice_onepoint(a, b, 0, 0);
        CHECK(codons_of(c1) == codons_of(b));
        CHECK(codons_of(c2) == codons_of(a));
        auto [d1, d2] = splice_onepoint(a, b, 4, 4);
        CHECK(codons_of(d1) == codons_of(a));
        CHECK(codons_of(d2) == codons_of(b));
    }
    SUBCASE("one point, asymmetric points change lengths") {
        auto [c1, c2] = splice_onepoint(a, b, 1, 3);
        CHECK(codons_of(c1) == std::vector<std::uint32_t>{1, 8});
        CHECK(codons_of(c2) == std::vector<std::uint32_t>{5, 6, 7, 2, 3, 4});
    }
    SUBCASE("two point, middles swap") {
        auto [c1, c2] = splice_twopoint(a, b, 1, 3, 1, 3);
        CHECK(codons_of(c1) == std::vector<std::uint32_t>{1, 6, 7, 4});
        CHECK(codons_of(c2) == std::vector<std::uint32_t>{5, 2, 3, 8});
    }
    SUBCASE("two point, different windows") {
        Genome ten({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        Genome six({11, 12, 13, 14, 15, 16});
        auto [c1, c2] = splice_twopoint(ten, six, 2, 7, 1, 4);
        CHECK(codons_of(c1) == std::vector<std::uint32_t>{1, 2, 12, 13, 14, 8, 9, 10});
        CHECK(codons_of(c2) == std::vector<std::uint32_t>{11, 3, 4, 5, 6, 7, 15, 16});
    }
}

TEST_CASE("linear crossover conserves codons and respects the used region") {
    Grammar g = letters_grammar();
    std::mt19937 rng(20260823);

    for (int trial = 0; trial < 300; ++trial) {
        auto variant = static_cast<CrossoverVariant>(trial % 4);
        Individual a = make_individual(g, random_genome(12, 97, rng));
        Individual b = make_individual(g, random_genome(18, 97, rng));
        auto [c1, c2] = crossover_linear(a, b, variant, true, rng);

        CHECK(c1.size() + c2.size() == a.genome.size() + b.genome.size());
        if (variant == CrossoverVariant::fixed_onepoint) {
            // One shared point: each child is a head of one parent plus the
            // tail of the other, so the lengths trade places.
            CHECK(c1.size() == b.genome.size());
            CHECK(c2.size() == a.genome.size());
        } else if (variant == CrossoverVariant::fixed_twopoint) {
            CHECK(c1.size() == a.genome.size());
            CHECK(c2.size() == b.genome.size());
        }
        for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c1[i] < 97);
        for (std::size_t i = 0; i < c2.size(); ++i) CHECK(c2[i] < 97);
    }

    SUBCASE("same seed, same children") {
        Individual a = make_individual(g, random_genome(10, 97, rng));
        Individual b = make_individual(g, random_genome(10, 97, rng));
        std::mt19937 r1(42), r2(42);
        auto p1 = crossover_linear(a, b, CrossoverVariant::variable_twopoint, true, r1);
        auto p2 = crossover_linear(a, b, CrossoverVariant::variable_twopoint, true, r2);
        CHECK(codons_of(p1.first) == codons_of(p2.first));
        CHECK(codons_of(p1.second) == codons_of(p2.second));
    }
    SUBCASE("degenerate parents still produce children") {
        Individual tiny_a = make_individual(g, Genome({1}));
        Individual tiny_b = make_individual(g, Genome({3}));
        auto [c1, c2] = crossover_linear(tiny_a, tiny_b, CrossoverVariant::variable_onepoint,
                                         true, rng);
        CHECK(c1.size() + c2.size() == 2);
    }
}

TEST_CASE("variable one-point crossover within the used region") {
    // Parent heads stay in place: child one starts with a prefix of parent
    // one cut inside its used region, and the crossover point never exceeds
    // used codons.
    Grammar g = expr_grammar();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Individual a = make_individual(g, random_genome(14, 90, rng));
        Individual b = make_individual(g, random_genome(14, 90, rng));
        auto bound = [](const Individual& p) {
            return p.used_codons >= 2 ? p.used_codons : p.genome.size();
        };
        auto [c1, c2] = crossover_linear(a, b, CrossoverVariant::variable_onepoint, true, rng);

        // Recover the split: c1 = a[:pa] + b[pb:], so len(c1) = pa + len(b) - pb
        // with pa <= bound(a), pb <= bound(b). Verify some consistent split
        // reproduces both children exactly.
        bool explained = false;
        for (std::size_t pa = 0; pa <= bound(a) && !explained; ++pa) {
            std::size_t need = c1.size() - pa + 0;
            if (c1.size() < pa) break;
            std::size_t pb = b.genome.size() >= need ? b.genome.size() - need : 0;
            if (pb > bound(b)) continue;
            std::vector<std::uint32_t> e1, e2;
            for (std::size_t i = 0; i < pa; ++i) e1.push_back(a.genome[i]);
            for (std::size_t i = pb; i < b.genome.size(); ++i) e1.push_back(b.genome[i]);
            for (std::size_t i = 0; i < pb; ++i) e2.push_back(b.genome[i]);
            for (std::size_t i = pa; i < a.genome.size(); ++i) e2.push_back(a.genome[i]);
            explained = e1 == codons_of(c1) && e2 == codons_of(c2);
        }
        CHECK(explained);
    }
}

TEST_CASE("subtree crossover swaps matching non-terminals") {
    Grammar g = expr_grammar();
    std::mt19937 rng(20260823);

    for (int trial = 0; trial < 200; ++trial) {
        Individual a = individual_from_tree(g, build_tree(g, 3 + trial % 3, BuildMode::grow, rng, 500),
                                            500);
        Individual b = individual_from_tree(g, build_tree(g, 3 + (trial / 2) % 3, BuildMode::grow, rng,
                                                          500),
                                            500);
        auto [c1, c2] = crossover_subtree(a, b, g, 6, rng);

        for (const Individual* c : {&c1, &c2}) {
            REQUIRE(c->tree.has_value());
            CHECK_FALSE(c->invalid);
            CHECK(tree_depth(*c->tree) <= 6);
            auto r = map_genome(g, c->genome);
            REQUIRE_FALSE(r.invalid);
            CHECK(r.phenotype == c->phenotype);
        }
        // Total node count is conserved by the swap.
        CHECK(tree_node_count(*c1.tree) + tree_node_count(*c2.tree) ==
              tree_node_count(*a.tree) + tree_node_count(*b.tree));
    }

    SUBCASE("depth budget is enforced, giving up returns the parents") {
        int returned_parents = 0;
        for (int trial = 0; trial < 200; ++trial) {
            Individual a = individual_from_tree(g, build_tree(g, 4, BuildMode::full, rng, 500), 500);
            Individual b = individual_from_tree(g, build_tree(g, 4, BuildMode::full, rng, 500), 500);
            auto [c1, c2] = crossover_subtree(a, b, g, 4, rng);
            CHECK(tree_depth(*c1.tree) <= 4);
            CHECK(tree_depth(*c2.tree) <= 4);
            returned_parents += *c1.phenotype == *a.phenotype && *c2.phenotype == *b.phenotype;
        }
        CHECK(returned_parents > 0);
    }
    SUBCASE("no shared non-terminal copies the parents") {
        Grammar two = parse_bnf("<s> ::= <a> | <b>\n<a> ::= x | x <a>\n<b> ::= z | z <b>\n");
        std::mt19937 r(9);
        Individual a = individual_from_tree(two, grow_subtree(two, "a", 1, 4, r, 500), 500);
        Individual b = individual_from_tree(two, grow_subtree(two, "b", 1, 4, r, 500), 500);
        auto [c1, c2] = crossover_subtree(a, b, two, 0, r);
        CHECK(*c1.phenotype == *a.phenotype);
        CHECK(*c2.phenotype == *b.phenotype);
    }
    SUBCASE("parents must be valid and carry trees") {
        Individual plain = make_individual(g, Genome({1, 0}));
        Individual good = individual_from_tree(g, build_tree(g, 3, BuildMode::grow, rng, 500), 500);
        CHECK_THROWS_AS(crossover_subtree(plain, good, g, 0, rng), std::invalid_argument);
    }
}

TEST_CASE("codon flip mutation redraws inside the scope only") {
    Grammar g = expr_grammar();
    std::mt19937 rng(20260823);
    Individual ind = make_individual(g, Genome({1, 0, 7, 8, 9, 11}, 100));
    REQUIRE(ind.used_codons == 2);

    SUBCASE("probability zero is the identity") {
        Genome out = mutate_codon_flip(ind, 0.0, true, rng);
        CHECK(codons_of(out) == codons_of(ind.genome));
    }
    SUBCASE("probability one leaves the unused tail alone") {
        bool changed_prefix = false;
        for (int i = 0; i < 50; ++i) {
            Genome out = mutate_codon_flip(ind, 1.0, true, rng);
            REQUIRE(out.size() == 6);
            for (std::size_t k = 2; k < 6; ++k) CHECK(out[k] == ind.genome[k]);
            for (std::size_t k = 0; k < 2; ++k) changed_prefix |= out[k] != ind.genome[k];
        }
        CHECK(changed_prefix);
    }
    SUBCASE("whole genome scope reaches the tail") {
        bool changed_tail = false;
        for (int i = 0; i < 50; ++i) {
            Genome out = mutate_codon_flip(ind, 1.0, false, rng);
            for (std::size_t k = 2; k < 6; ++k) changed_tail |= out[k] != ind.genome[k];
        }
        CHECK(changed_tail);
    }
    SUBCASE("flip rate tracks the probability") {
        Individual wide = make_individual(g, random_genome(1000, 100000, rng));
        std::size_t scope = std::min(wide.used_codons, wide.genome.size());
        if (scope < 2) scope = wide.genome.size();
        int changed = 0;
        Genome out = mutate_codon_flip(wide, 0.3, false, rng);
        for (std::size_t k = 0; k < out.size(); ++k) changed += out[k] != wide.genome[k];
        CHECK(changed > 240);
        CHECK(changed < 360);
    }
}

TEST_CASE("event mutation redraws a bounded number of positions") {
    Grammar g = expr_grammar();
    std::mt19937 rng(77);
    Individual ind = make_individual(g, Genome({1, 0, 7, 8, 9, 11}, 100));

    for (int i = 0; i < 100; ++i) {
        Genome out = mutate_genome_flip(ind, 1, true, rng);
        REQUIRE(out.size() == ind.genome.size());
        int distance = 0;
        for (std::size_t k = 0; k < out.size(); ++k) distance += out[k] != ind.genome[k];
        CHECK(distance <= 1);
        for (std::size_t k = 2; k < 6; ++k) CHECK(out[k] == ind.genome[k]);
    }
    for (int i = 0; i < 100; ++i) {
        Genome out = mutate_genome_flip(ind, 5, false, rng);
        int distance = 0;
        for (std::size_t k = 0; k < out.size(); ++k) distance += out[k] != ind.genome[k];
        CHECK(distance <= 5);
    }
}

TEST_CASE("subtree mutation regrows one node and keeps the tree legal") {
    Grammar g = expr_grammar();
    std::mt19937 rng(20260823);

    bool changed = false;
    for (int i = 0; i < 300; ++i) {
        Individual ind = individual_from_tree(g, build_tree(g, 4, BuildMode::grow, rng, 500), 500);
        Individual out = mutate_subtree(ind, g, 5, rng);
        REQUIRE(out.tree.has_value());
        CHECK_FALSE(out.invalid);
        CHECK(tree_depth(*out.tree) <= 5);
        auto r = map_genome(g, out.genome);
        CHECK(r.phenotype == out.phenotype);
        changed = changed || *out.phenotype != *ind.phenotype;
    }
    CHECK(changed);

    Individual plain = make_individual(g, Genome({1, 0}));
    CHECK_THROWS_AS(mutate_subtree(plain, g, 5, rng), std::invalid_argument);
}

TEST_CASE("generational replacement is elites plus children") {
    Population parents{scored(1), scored(2), scored(3), scored(4)};
    Population children{scored(10), scored(11)};

    Population next = replace_generational(parents, children, 2, Direction::minimise);
    CHECK(fitness_values(next) == std::vector<double>{1, 2, 10, 11});

    Population zero = replace_generational(parents, Population{scored(7), scored(8), scored(9),
                                                               scored(6)},
                                           0, Direction::minimise);
    CHECK(fitness_values(zero) == std::vector<double>{7, 8, 9, 6});

    SUBCASE("maximise picks the other end as elite") {
        Population next_max = replace_generational(parents, {scored(10)}, 3, Direction::maximise);
        CHECK(fitness_values(next_max) == std::vector<double>{4, 3, 2, 10});
    }
    SUBCASE("the arithmetic must add up") {
        CHECK_THROWS_AS(replace_generational(parents, {scored(9)}, 1, Direction::minimise),
                        SizeMismatch);
        CHECK_THROWS_AS(replace_generational(parents, {scored(9), scored(8), scored(7),
                                                       scored(6)},
                                             1, Direction::minimise),
                        SizeMismatch);
    }
}

TEST_CASE("steady state replacement drops the two worst unconditionally") {
    Population pop{scored(1), scored(2), scored(3), scored(4)};
    Population next = replace_steady_state(pop, {scored(10), scored(11)}, Direction::minimise);
    REQUIRE(next.size() == 4);
    std::vector<double> got = fitness_values(next);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<double>{1, 2, 10, 11});

    SUBCASE("unscored members go first") {
        Population mixed{scored(9), unscored_invalid(), scored(1), unscored_invalid()};
        Population out = replace_steady_state(mixed, {scored(5), scored(6)}, Direction::minimise);
        std::vector<double> vals = fitness_values(out);
        std::sort(vals.begin(), vals.end());
        CHECK(vals == std::vector<double>{1, 5, 6, 9});
    }
    SUBCASE("maximise keeps the high end") {
        Population out = replace_steady_state(pop, {scored(0), scored(9)}, Direction::maximise);
        std::vector<double> vals = fitness_values(out);
        std::sort(vals.begin(), vals.end());
        CHECK(vals == std::vector<double>{0, 3, 4, 9});
    }
}
