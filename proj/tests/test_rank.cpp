#include <cmath>

#include <doctest.h>

#include "dtspan/rank.hpp"
#include "dtspan/truth_table.hpp"
#include "support/corpus.hpp"

using namespace dtspan;

TEST_CASE("tree_rank basics") {
    const DTree leaf = DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]})");
    CHECK(tree_rank(leaf) == 0);
    for (int d = 1; d <= 6; ++d) CHECK(tree_rank(gen_complete(d)) == d);
    CHECK(tree_rank(gen_or_list(3)) == 1);
    CHECK(tree_rank(gen_or_list(9)) == 1);
    CHECK(tree_rank(gen_parity(3)) == 3);
}

TEST_CASE("optimal coloring cost equals rank") {
    const DTree leaf = DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]})");
    CHECK(optimal_coloring(leaf).color.empty());
    CHECK(coloring_cost(leaf, optimal_coloring(leaf)) == 0);

    const DTree c3 = gen_complete(3);
    CHECK(coloring_cost(c3, optimal_coloring(c3)) == 3);

    const DTree or8 = gen_or_list(8);
    const GColoring col = optimal_coloring(or8);
    CHECK(coloring_cost(or8, col) == 1);
    // black edges follow the 0-spine (the chain continues on the 0-answer)
    for (int i = 0; i < or8.count(); ++i) {
        if (or8.node(i).leaf) continue;
        CHECK(col.color.at(or8.edge(i, 0)) == EdgeColor::Black);
        CHECK(col.color.at(or8.edge(i, 1)) == EdgeColor::Red);
    }
}

TEST_CASE("coloring validation") {
    const DTree d1 = gen_complete(1);
    GColoring both_black;
    both_black.color[d1.edge(d1.root_index(), 0)] = EdgeColor::Black;
    both_black.color[d1.edge(d1.root_index(), 1)] = EdgeColor::Black;
    CHECK_THROWS_AS(coloring_cost(d1, both_black), validation_error);
    GColoring missing;
    missing.color[d1.edge(d1.root_index(), 0)] = EdgeColor::Red;
    CHECK_THROWS_AS(coloring_cost(d1, missing), validation_error);
}

TEST_CASE("exhaustive guessing complexity equals rank") {
    CHECK(exhaustive_guessing_complexity(gen_complete(1)) == 1);
    CHECK(exhaustive_guessing_complexity(gen_complete(2)) == 2);
    CHECK(exhaustive_guessing_complexity(gen_or_list(4)) == 1);

    for (const DTree& t : testsupport::random_corpus(31, 60, 25, 8)) {
        if (t.internal_count() > 12) continue;
        CHECK(exhaustive_guessing_complexity(t) == tree_rank(t));
    }

    // over the cap
    CHECK_THROWS_AS(exhaustive_guessing_complexity(gen_or_list(17)), cap_exceeded_error);
}

TEST_CASE("rank upper bound and subtree monotonicity") {
    for (const DTree& t : testsupport::random_corpus(77, 50, 63, 10)) {
        const std::vector<int> ranks = subtree_ranks(t);
        const int r = ranks[t.root_index()];
        CHECK(r <= std::log2(static_cast<double>(t.size()) + 1) - 1 + 1e-9);
        for (int i = 0; i < t.count(); ++i) CHECK(ranks[i] <= r);
    }
}

TEST_CASE("truth table plumbing") {
    const TruthTable or3 = TruthTable::from_hex(3, "FE");
    CHECK(or3.get(0) == 0);
    for (std::uint32_t x = 1; x < 8; ++x) CHECK(or3.get(x) == 1);
    CHECK(or3.to_hex() == "fe");
    CHECK_FALSE(or3.is_constant());
    CHECK(or3.cofactor(0, 1).is_constant());

    CHECK(TruthTable::constant(4, 1).is_constant());
    CHECK_THROWS_AS(TruthTable::from_hex(3, "1FE"), validation_error);
    CHECK_THROWS_AS(TruthTable::from_hex(3, "zz"), validation_error);

    // cofactor consistency across word sizes
    Rng rng(4242);
    for (int n : {3, 6, 7, 8}) {
        TruthTable f = TruthTable::constant(n, 0);
        for (std::uint32_t x = 0; x < (1u << n); ++x) f.set(x, rng.coin());
        for (int j = 0; j < n; ++j) {
            for (int b = 0; b < 2; ++b) {
                const TruthTable g = f.cofactor(j, b);
                for (std::uint32_t y = 0; y < (1u << (n - 1)); ++y) {
                    const std::uint32_t low = y & ((1u << j) - 1);
                    const std::uint32_t high = (y >> j) << (j + 1);
                    const std::uint32_t x = low | high | (static_cast<std::uint32_t>(b) << j);
                    CHECK(g.get(y) == f.get(x));
                }
            }
        }
    }
}

TEST_CASE("func_rank basics") {
    CHECK(func_rank(TruthTable::constant(3, 0)) == 0);
    CHECK(func_rank(TruthTable::constant(5, 1)) == 0);
    CHECK(func_rank(TruthTable::from_hex(3, "FE")) == 1);
    // complete AND-OR on 4 bits: (x0 and x1) or (x2 and x3)
    TruthTable andor4 = TruthTable::constant(4, 0);
    for (std::uint32_t x = 0; x < 16; ++x) {
        const int v = ((x & 3) == 3) || ((x & 12) == 12) ? 1 : 0;
        andor4.set(x, v);
    }
    CHECK(func_rank(andor4) == 2);
    CHECK(game_value(andor4) == 2);
}

TEST_CASE("game_value basics") {
    CHECK(game_value(TruthTable::constant(2, 0)) == 0);
    // AND on 2 bits: the responder defers once
    CHECK(game_value(TruthTable::from_hex(2, "8")) == 1);
}

TEST_CASE("rank equals game value on all 3-bit functions") {
    for (std::uint32_t tab = 0; tab < 256; ++tab) {
        TruthTable f = TruthTable::constant(3, 0);
        for (std::uint32_t x = 0; x < 8; ++x) f.set(x, (tab >> x) & 1);
        CHECK(func_rank(f) == game_value(f));
    }
}

TEST_CASE("rank caps") {
    CHECK_THROWS_AS(func_rank(TruthTable::constant(13, 0)), cap_exceeded_error);
    CHECK_THROWS_AS(game_value(TruthTable::constant(13, 0)), cap_exceeded_error);
}

TEST_CASE("rrank") {
    const DTree leaf = DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]})");
    RandomizedDTree single;
    single.support.push_back({1.0, leaf});
    CHECK(rrank(single) == 0);

    // complete(3) rebuilt on the ambient four variables of or-list(4)
    const DTree c3 = gen_complete(3);
    std::vector<DTree::Node> nodes;
    for (int i = 0; i < c3.count(); ++i) nodes.push_back(c3.node(i));
    const DTree c3on4(4, c3.root_id(), std::move(nodes));
    RandomizedDTree mix;
    mix.support.push_back({0.5, gen_or_list(4)});
    mix.support.push_back({0.5, c3on4});
    CHECK(rrank(mix) == 3);

    RandomizedDTree par;
    par.support.push_back({1.0, gen_parity(3)});
    CHECK(rrank(par) == 3);
}
