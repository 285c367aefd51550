#pragma once

#include <string>
#include <vector>

#include "dtspan/dtree.hpp"
#include "dtspan/weights.hpp"

namespace dtspan {

// Span program over one coordinate per tree vertex. Each edge contributes a
// column sqrt(W_e) * (unit(parent) - unit(child)), available exactly when the
// input answers the parent's query with the edge's bit; each leaf u has the
// target unit(root) - unit(u).
struct SpanProgramInstance {
    struct Column {
        EdgeId edge;
        int var;        // query of the parent node
        int bit;        // answer selecting this edge
        int row_parent; // dense vertex index of the parent
        int row_child;  // dense vertex index of the child
        double mag;     // sqrt(W_e)
    };

    int dim = 0;                  // number of tree vertices
    std::vector<Column> columns;  // canonical (parent id, bit) order

    bool available(const Column& c, const std::vector<std::uint8_t>& x) const {
        return x[c.var] == c.bit;
    }
};

// Positive witness (coefficients over columns) and negative witness (vector
// over vertices) for one input.
struct WitnessPair {
    std::vector<std::pair<int, double>> positive;  // (column index, coefficient)
    std::vector<int> negative_support;             // dense vertex indices of P_x
};

SpanProgramInstance build_span_program(const DTree& t, const WeightMap& w);

WitnessPair witnesses(const SpanProgramInstance& inst, const DTree& t,
                      const std::vector<std::uint8_t>& x);

struct SpanCondition {
    std::string name;
    double residual = 0;
};

struct SpanVerifyReport {
    bool pass = true;
    std::vector<SpanCondition> conditions;  // fixed order, max residual each
    double max_residual = 0;
    std::vector<std::uint8_t> worst_input;
    std::string worst_condition;
    long long inputs_checked = 0;

    void absorb(const SpanVerifyReport& other);
};

inline constexpr double kSpanResidualTol = 1e-9;

// Checks the four program conditions for one input with explicit witnesses.
SpanVerifyReport verify_span(const SpanProgramInstance& inst, const DTree& t,
                             const std::vector<std::uint8_t>& x, const WitnessPair& wit);
// Same, with the canonical witnesses for x.
SpanVerifyReport verify_span(const SpanProgramInstance& inst, const DTree& t,
                             const std::vector<std::uint8_t>& x);
// All 2^n inputs (n capped at 20); deterministic merge over input order.
SpanVerifyReport verify_span_all(const SpanProgramInstance& inst, const DTree& t, int jobs = 1);

struct WitnessSizes {
    double wsize_plus = 0;
    double wsize_minus = 0;
    double wsize = 0;  // sqrt(plus * minus)
    // The same quantities from the path combinatorics; must agree with the
    // norm route within 1e-9 relative.
    double path_plus = 0;
    double path_minus = 0;
};

WitnessSizes witness_sizes(const SpanProgramInstance& inst, const DTree& t,
                           const WeightMap& w, int jobs = 1);

}  // namespace dtspan
