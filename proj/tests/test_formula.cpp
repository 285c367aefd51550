#include <doctest.h>

#include "dtspan/formula.hpp"
#include "support/corpus.hpp"

using namespace dtspan;

TEST_CASE("leaf converts to a constant") {
    const DTree t = DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L","out":"1"}]})");
    const Formula f = to_formula(t);
    CHECK(formula_size(f) == 1);
    CHECK(formula_eval(f, {0}) == true);
    CHECK(formula_eval(f, {1}) == true);
}

TEST_CASE("single query tree") {
    const DTree t = DTree::parse(
        R"({"n":1,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":2},
            {"id":1,"leaf":"a","out":"0"},{"id":2,"leaf":"b","out":"1"}]})");
    const Formula f = to_formula(t);
    CHECK(formula_size(f) == 7);
    CHECK(formula_size(f) <= 5 * t.size());
    CHECK(formula_eval(f, {0}) == false);
    CHECK(formula_eval(f, {1}) == true);
}

TEST_CASE("missing output labels are rejected") {
    const DTree t = DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]})");
    CHECK_THROWS_AS(to_formula(t), validation_error);
}

TEST_CASE("gate semantics") {
    Formula f;
    Formula::Node lit;
    lit.kind = Formula::Kind::Lit;
    lit.var = 2;
    lit.negated = true;
    f.nodes.push_back(lit);
    f.root = 0;
    CHECK(formula_eval(f, {0, 0, 1}) == false);
    CHECK(formula_eval(f, {0, 0, 0}) == true);

    Formula c;
    Formula::Node k;
    k.kind = Formula::Kind::Const;
    k.bit = 0;
    c.nodes.push_back(k);
    c.root = 0;
    CHECK(formula_eval(c, {1, 1}) == false);
}

TEST_CASE("parity tree converts exactly") {
    const DTree t = gen_parity(3);
    const Formula f = to_formula(t);
    CHECK(formula_size(f) <= 5 * t.size());
    for (std::uint32_t m = 0; m < 8; ++m) {
        std::vector<std::uint8_t> x(3);
        int par = 0;
        for (int j = 0; j < 3; ++j) {
            x[j] = (m >> j) & 1;
            par ^= x[j];
        }
        CHECK(formula_eval(f, x) == (par == 1));
    }
}

TEST_CASE("random labeled trees: size bound and agreement") {
    for (const DTree& t : testsupport::random_corpus(121, 40, 41, 9)) {
        const Formula f = to_formula(t);
        CHECK(formula_size(f) <= 5 * t.size());
        const TruthTable tab = testsupport::table_of_tree(t);
        for (std::uint32_t m = 0; m < (1u << t.num_vars()); ++m) {
            std::vector<std::uint8_t> x(t.num_vars());
            for (int j = 0; j < t.num_vars(); ++j) x[j] = (m >> j) & 1;
            CHECK(formula_eval(f, x) == (tab.get(m) == 1));
        }
    }
}
