#pragma once

#include <optional>
#include <string>

#include "dtspan/dtree.hpp"
#include "dtspan/weights.hpp"

namespace dtspan {

// Per-scheme slice of a tree report. Verification entries are filled only
// when n is within the verify cap.
struct WeightingReport {
    std::string scheme;
    double alpha = 0;
    double beta = 0;
    double objective = 0;
    bool verified = false;
    double wsize_plus = 0;
    double wsize_minus = 0;
    double wsize = 0;
    bool span_pass = false;
    double span_max_residual = 0;
    bool dual_pass = false;
    double dual_max_residual = 0;
    double dual_objective = 0;
    std::string note;  // set when the weighting could not be applied
};

struct Report {
    int n = 0;
    int size = 0;
    int depth = 0;
    int leaves = 0;
    int rank = 0;
    double opt = 0;
    std::optional<double> opt_oracle;
    double bound_rank_depth = 0;
    double bound_size = 0;
    std::vector<WeightingReport> weightings;
    bool all_pass = true;  // meaningful only for the verified slices
};

struct ReportOptions {
    bool with_oracle = false;
    std::uint64_t oracle_seed = 1;
    double oracle_tol = 1e-2;
    int verify_max_n = 12;
    int jobs = 1;
    // A user-supplied weighting reported as an extra slice; a file that does
    // not cover every tree edge fails that slice (and the report).
    std::optional<WeightMap> file_weights;
};

// Edges of t missing from w, in canonical order.
std::vector<EdgeId> missing_edges(const DTree& t, const WeightMap& w);

Report build_report(const DTree& t, const ReportOptions& opts);

std::string report_to_json(const Report& r);
std::string report_to_text(const Report& r);

}  // namespace dtspan
