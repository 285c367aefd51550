#include <cmath>

#include <doctest.h>

#include "dtspan/span_program.hpp"
#include "support/corpus.hpp"

using namespace dtspan;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> v) {
    std::vector<std::uint8_t> x;
    for (int b : v) x.push_back(static_cast<std::uint8_t>(b));
    return x;
}

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const double kXi = (kPhi + std::sqrt(kPhi + 5.0)) / 2.0;

}  // namespace

TEST_CASE("build: columns and availability") {
    const DTree d1 = gen_complete(1);
    const SpanProgramInstance i1 = build_span_program(d1, WeightMap::unit(d1));
    CHECK(i1.dim == 3);
    REQUIRE(i1.columns.size() == 2);
    for (const auto& col : i1.columns) {
        CHECK(col.mag == doctest::Approx(1.0));
        CHECK(col.row_parent == d1.root_index());
    }

    const DTree p3 = gen_parity(3);
    const SpanProgramInstance i3 = build_span_program(p3, WeightMap::unit(p3));
    CHECK(i3.dim == 15);
    CHECK(i3.columns.size() == 14);

    const DTree a3 = gen_and_chain(3);
    const WeightMap w = canonical_weights(a3);
    const SpanProgramInstance ia = build_span_program(a3, w);
    for (const auto& col : ia.columns) {
        // two entries of magnitude sqrt(W_e): squared column norm is 2 W_e
        const double norm_sq = 2.0 * col.mag * col.mag;
        CHECK(norm_sq == doctest::Approx(2.0 * w.get(col.edge)).epsilon(1e-12));
    }
}

TEST_CASE("witnesses") {
    const DTree d1 = gen_complete(1);
    const SpanProgramInstance i1 = build_span_program(d1, WeightMap::unit(d1));
    const WitnessPair w0 = witnesses(i1, d1, bits({0}));
    REQUIRE(w0.positive.size() == 1);
    CHECK(i1.columns[w0.positive[0].first].bit == 0);
    CHECK(w0.positive[0].second == doctest::Approx(1.0));
    REQUIRE(w0.negative_support.size() == 2);

    const DTree p3 = gen_parity(3);
    const SpanProgramInstance i3 = build_span_program(p3, WeightMap::unit(p3));
    for (std::uint32_t m = 0; m < 8; ++m) {
        std::vector<std::uint8_t> x(3);
        for (int j = 0; j < 3; ++j) x[j] = (m >> j) & 1;
        CHECK(witnesses(i3, p3, x).positive.size() == 3);
    }

    // and-chain(3) canonical, x = 111: coefficients 1/sqrt(xi), 1/sqrt(phi), 1
    const DTree a3 = gen_and_chain(3);
    const SpanProgramInstance ia = build_span_program(a3, canonical_weights(a3));
    const WitnessPair w111 = witnesses(ia, a3, bits({1, 1, 1}));
    REQUIRE(w111.positive.size() == 3);
    CHECK(w111.positive[0].second == doctest::Approx(1.0 / std::sqrt(kXi)).epsilon(1e-12));
    CHECK(w111.positive[1].second == doctest::Approx(1.0 / std::sqrt(kPhi)).epsilon(1e-12));
    CHECK(w111.positive[2].second == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify: single query availability") {
    const DTree d1 = gen_complete(1);
    const SpanProgramInstance i1 = build_span_program(d1, WeightMap::unit(d1));
    const WitnessPair w1 = witnesses(i1, d1, bits({1}));
    // the 0-edge is unavailable for x=1 and carries no coefficient
    for (const auto& [c, v] : w1.positive) CHECK(i1.columns[c].bit == 1);
    const SpanVerifyReport rep = verify_span(i1, d1, bits({1}), w1);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-12);
}

TEST_CASE("verify passes across corpus and weightings") {
    for (const DTree& t : testsupport::random_corpus(606, 15, 33, 7)) {
        for (const WeightMap& w :
             {WeightMap::unit(t), canonical_weights(t), appendix_b_weights(t)}) {
            if (t.internal_count() == 0) continue;
            const SpanProgramInstance inst = build_span_program(t, w);
            const SpanVerifyReport rep = verify_span_all(inst, t);
            CHECK(rep.pass);
            CHECK(rep.inputs_checked == (1 << t.num_vars()));
        }
    }
}

TEST_CASE("corrupted positive coefficient fails the target condition") {
    const DTree a3 = gen_and_chain(3);
    const WeightMap w = canonical_weights(a3);
    const SpanProgramInstance inst = build_span_program(a3, w);
    WitnessPair wit = witnesses(inst, a3, bits({1, 1, 1}));
    wit.positive[1].second += 0.1;
    const SpanVerifyReport rep = verify_span(inst, a3, bits({1, 1, 1}), wit);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst_condition == "positive-witness-spans-target");
    const double we = w.get(inst.columns[wit.positive[1].first].edge);
    CHECK(rep.max_residual == doctest::Approx(0.1 * std::sqrt(we)).epsilon(1e-9));
}

TEST_CASE("parallel verification reduces deterministically") {
    const DTree t = gen_random(1234, 31, 8);
    const WeightMap w = canonical_weights(t);
    const SpanProgramInstance inst = build_span_program(t, w);
    const SpanVerifyReport one = verify_span_all(inst, t, 1);
    const SpanVerifyReport two = verify_span_all(inst, t, 2);
    CHECK(one.pass == two.pass);
    CHECK(one.max_residual == two.max_residual);
    CHECK(one.inputs_checked == two.inputs_checked);
    const WitnessSizes w1 = witness_sizes(inst, t, w, 1);
    const WitnessSizes w2 = witness_sizes(inst, t, w, 2);
    CHECK(w1.wsize == w2.wsize);
    const DTree small = gen_random(77, 17, 6);
    const OracleResult o1 = brute_force_opt(small, 9, 1e-2, 1);
    const OracleResult o2 = brute_force_opt(small, 9, 1e-2, 2);
    CHECK(o1.objective == o2.objective);
    CHECK(o1.weights.serialize() == o2.weights.serialize());
}

TEST_CASE("witness sizes: norm route equals path route") {
    const DTree d1 = gen_complete(1);
    const WitnessSizes s1 = witness_sizes(build_span_program(d1, WeightMap::unit(d1)), d1,
                                          WeightMap::unit(d1));
    CHECK(s1.wsize_plus == doctest::Approx(1.0));
    CHECK(s1.wsize_minus == doctest::Approx(1.0));
    CHECK(s1.wsize == doctest::Approx(1.0));

    const DTree p3 = gen_parity(3);
    const WitnessSizes s3 = witness_sizes(build_span_program(p3, WeightMap::unit(p3)), p3,
                                          WeightMap::unit(p3));
    CHECK(s3.wsize_plus == doctest::Approx(3.0));
    CHECK(s3.wsize_minus == doctest::Approx(3.0));
    CHECK(s3.wsize == doctest::Approx(3.0));

    for (const DTree& t : testsupport::random_corpus(707, 15, 33, 7)) {
        for (const WeightMap& w :
             {WeightMap::unit(t), canonical_weights(t), appendix_b_weights(t)}) {
            if (t.internal_count() == 0) continue;
            const WitnessSizes ws = witness_sizes(build_span_program(t, w), t, w);
            CHECK(ws.wsize_plus == doctest::Approx(ws.path_plus).epsilon(1e-9));
            CHECK(ws.wsize_minus == doctest::Approx(ws.path_minus).epsilon(1e-9));
        }
        const WeightMap cw = canonical_weights(t);
        const WitnessSizes wsc = witness_sizes(build_span_program(t, cw), t, cw);
        CHECK(wsc.wsize == doctest::Approx(opt_value(t)).epsilon(1e-9));
    }
}
