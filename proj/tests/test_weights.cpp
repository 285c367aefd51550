#include <cmath>

#include <doctest.h>

#include "dtspan/rank.hpp"
#include "dtspan/weights.hpp"
#include "support/corpus.hpp"

using namespace dtspan;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const double kXi = (kPhi + std::sqrt(kPhi + 5.0)) / 2.0;

DTree single_leaf() {
    return DTree::parse(R"({"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]})");
}

}  // namespace

TEST_CASE("opt_value closed forms") {
    CHECK(opt_value(single_leaf()) == 0.0);
    CHECK(opt_value(gen_parity(3)) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(opt_value(gen_and_chain(3)) == doctest::Approx(kXi).epsilon(1e-12));
    CHECK(opt_value(gen_and_chain(3)) == doctest::Approx(2.095294).epsilon(1e-6));
    for (int d = 1; d <= 10; ++d) CHECK(opt_value(gen_complete(d)) == doctest::Approx(d));
}

TEST_CASE("canonical weights") {
    const DTree d1 = gen_complete(1);
    const WeightMap w1 = canonical_weights(d1);
    CHECK(w1.get(d1.edge(d1.root_index(), 0)) == doctest::Approx(1.0));
    CHECK(w1.get(d1.edge(d1.root_index(), 1)) == doctest::Approx(1.0));

    // and-chain(3): weights from the worked example, x_0 at the root.
    // The 1-edge toward the x_1 subtree carries xi, its sibling 1/xi; one
    // level down phi and 1/phi; the last node 1 and 1.
    const DTree a3 = gen_and_chain(3);
    const WeightMap w = canonical_weights(a3);
    CHECK(w.get(EdgeId{0, 1}) == doctest::Approx(kXi).epsilon(1e-12));
    CHECK(w.get(EdgeId{0, 0}) == doctest::Approx(1.0 / kXi).epsilon(1e-12));
    CHECK(w.get(EdgeId{1, 1}) == doctest::Approx(kPhi).epsilon(1e-12));
    CHECK(w.get(EdgeId{1, 0}) == doctest::Approx(1.0 / kPhi).epsilon(1e-12));
    CHECK(w.get(EdgeId{2, 1}) == doctest::Approx(1.0));
    CHECK(w.get(EdgeId{2, 0}) == doctest::Approx(1.0));

    CHECK(canonical_weights(single_leaf()).count() == 0);
}

TEST_CASE("canonical reciprocity and balancedness on random trees") {
    for (const DTree& t : testsupport::random_corpus(101, 40, 63, 9)) {
        const WeightMap w = canonical_weights(t);
        for (int i = 0; i < t.count(); ++i) {
            if (t.node(i).leaf) continue;
            const double prod = w.get(t.edge(i, 0)) * w.get(t.edge(i, 1));
            CHECK(std::abs(prod - 1.0) <= 1e-12);
        }
        const ProgramValue pv = evaluate(t, w);
        const double opt = opt_value(t);
        CHECK(pv.alpha == doctest::Approx(opt).epsilon(1e-9));
        CHECK(pv.beta == doctest::Approx(opt).epsilon(1e-9));
    }
}

TEST_CASE("evaluate") {
    const DTree d1 = gen_complete(1);
    const ProgramValue pv1 = evaluate(d1, WeightMap::unit(d1));
    CHECK(pv1.alpha == doctest::Approx(1.0));
    CHECK(pv1.beta == doctest::Approx(1.0));
    CHECK(pv1.objective == doctest::Approx(1.0));

    const DTree p3 = gen_parity(3);
    const ProgramValue pv3 = evaluate(p3, WeightMap::unit(p3));
    CHECK(pv3.alpha == doctest::Approx(3.0));
    CHECK(pv3.beta == doctest::Approx(3.0));
    CHECK(pv3.objective == doctest::Approx(3.0));

    const DTree a3 = gen_and_chain(3);
    const ProgramValue pvc = evaluate(a3, canonical_weights(a3));
    CHECK(pvc.alpha == doctest::Approx(kXi).epsilon(1e-9));
    CHECK(pvc.beta == doctest::Approx(kXi).epsilon(1e-9));

    WeightMap missing;
    CHECK_THROWS_AS(evaluate(a3, missing), validation_error);
    WeightMap negative = WeightMap::unit(a3);
    CHECK_THROWS_AS(negative.set(a3.edge(0, 0), -2.0), validation_error);
}

TEST_CASE("evaluate agrees with naive path enumeration") {
    Rng rng(2024);
    for (const DTree& t : testsupport::random_corpus(55, 30, 41, 8)) {
        WeightMap w;
        for (const EdgeId& e : t.edge_ids()) w.set(e, std::pow(10.0, rng.uniform(-2, 2)));
        const ProgramValue dp = evaluate(t, w);
        const ProgramValue ref = testsupport::naive_evaluate(t, w);
        CHECK(dp.alpha == doctest::Approx(ref.alpha).epsilon(1e-12));
        CHECK(dp.beta == doctest::Approx(ref.beta).epsilon(1e-12));
    }
}

TEST_CASE("appendix-b weights") {
    const DTree d1 = gen_complete(1);
    const WeightMap w1 = appendix_b_weights(d1);
    const double expected = 1.0 / std::log2(3.0);
    CHECK(w1.get(d1.edge(d1.root_index(), 0)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(w1.get(d1.edge(d1.root_index(), 1)) == doctest::Approx(expected).epsilon(1e-12));

    // every edge weight is 1 / log2(parent size / child size)
    const DTree c2 = gen_complete(2);
    const WeightMap w2 = appendix_b_weights(c2);
    CHECK(w2.get(c2.edge(c2.root_index(), 0)) == doctest::Approx(1.0 / std::log2(7.0 / 3.0)));
    for (int i = 0; i < c2.count(); ++i) {
        if (c2.node(i).leaf || i == c2.root_index()) continue;
        CHECK(w2.get(c2.edge(i, 0)) == doctest::Approx(1.0 / std::log2(3.0)));
    }

    for (const DTree& t : testsupport::random_corpus(303, 40, 63, 9)) {
        if (t.internal_count() == 0) continue;
        const WeightMap w = appendix_b_weights(t);
        const double logsize = std::log2(static_cast<double>(t.size()));
        for (const Path& p : t.paths()) {
            double inv = 0;
            for (int k = 0; k + 1 < static_cast<int>(p.nodes.size()); ++k) {
                const int v = p.nodes[k];
                const int taken = t.child_index(v, 0) == p.nodes[k + 1] ? 0 : 1;
                inv += 1.0 / w.get(t.edge(v, taken));
            }
            CHECK(inv == doctest::Approx(logsize).epsilon(1e-9));
        }
        const ProgramValue pv = evaluate(t, w);
        CHECK(pv.alpha <= 2.0 * t.size() + 1e-9);
        CHECK(pv.beta == doctest::Approx(logsize).epsilon(1e-9));
    }
}

TEST_CASE("brute-force oracle") {
    const DTree d1 = gen_complete(1);
    const OracleResult r1 = brute_force_opt(d1, 1, 1e-2);
    CHECK(r1.objective == doctest::Approx(1.0).epsilon(1e-2));

    const DTree a3 = gen_and_chain(3);
    const OracleResult r2 = brute_force_opt(a3, 5, 1e-2);
    CHECK(r2.objective == doctest::Approx(kXi).epsilon(1e-2));
    CHECK(r2.objective >= kXi - 1e-9);  // any weights give at least OPT

    const DTree p3 = gen_parity(3);
    const OracleResult r3 = brute_force_opt(p3, 5, 1e-2);
    CHECK(r3.objective == doctest::Approx(3.0).epsilon(1e-2));

    // determinism
    const OracleResult r2b = brute_force_opt(a3, 5, 1e-2);
    CHECK(r2b.objective == r2.objective);
    CHECK(r2b.weights.serialize() == r2.weights.serialize());

    CHECK_THROWS_AS(brute_force_opt(gen_or_list(9), 1, 1e-2), cap_exceeded_error);
    CHECK_THROWS_AS(brute_force_opt(a3, 1, 1e-5), validation_error);
}

TEST_CASE("bounds") {
    const DTree leaf = single_leaf();
    const OptBounds lb = bounds(leaf);
    CHECK(lb.rank_depth == 0.0);
    CHECK(lb.size == doctest::Approx(std::sqrt(2.0)));
    CHECK(opt_value(leaf) <= lb.size);

    for (int d = 1; d <= 8; ++d) {
        const DTree c = gen_complete(d);
        const OptBounds b = bounds(c);
        CHECK(b.rank_depth == doctest::Approx(2.0 * d));
        CHECK(b.size == doctest::Approx(std::sqrt(2.0 * (std::pow(2.0, d + 1) - 1))));
        CHECK(opt_value(c) <= b.rank_depth + 1e-9);
        CHECK(opt_value(c) <= b.size + 1e-9);
    }

    for (const DTree& t : testsupport::random_corpus(404, 50, 63, 9)) {
        const OptBounds b = bounds(t);
        const double opt = opt_value(t);
        CHECK(opt <= b.rank_depth + 1e-9);
        CHECK(opt <= b.size + 1e-9);
        // monotone sanity
        const auto sub = subtree_opt_values(t);
        if (t.internal_count() > 0) {
            CHECK(opt >= 1.0);
            const int r = t.root_index();
            CHECK(opt >= sub[t.child_index(r, 0)]);
            CHECK(opt >= sub[t.child_index(r, 1)]);
        }
    }
}

TEST_CASE("dominance of closed-form schemes") {
    for (const DTree& t : testsupport::random_corpus(999, 30, 41, 8)) {
        const double opt = opt_value(t);
        for (const WeightMap& w :
             {WeightMap::unit(t), canonical_weights(t), appendix_b_weights(t)}) {
            if (t.internal_count() == 0) continue;
            CHECK(evaluate(t, w).objective >= opt - 1e-9);
        }
        CHECK(evaluate(t, canonical_weights(t)).objective == doctest::Approx(opt).epsilon(1e-9));
    }
}

TEST_CASE("weight map serialization") {
    const DTree a3 = gen_and_chain(3);
    const WeightMap w = canonical_weights(a3);
    const WeightMap back = WeightMap::parse(w.serialize());
    CHECK(back.serialize() == w.serialize());
    for (const auto& [e, v] : w.entries()) CHECK(back.get(e) == v);

    CHECK_THROWS_AS(WeightMap::parse("{}"), validation_error);
    CHECK_THROWS_AS(WeightMap::parse(R"({"weights":[{"parent":0,"bit":2,"w":1}]})"),
                    validation_error);
    CHECK_THROWS_AS(WeightMap::parse(R"({"weights":[{"parent":0,"bit":0,"w":0}]})"),
                    validation_error);
    CHECK_THROWS_AS(
        WeightMap::parse(R"({"weights":[{"parent":0,"bit":0,"w":1},{"parent":0,"bit":0,"w":2}]})"),
        validation_error);
}
