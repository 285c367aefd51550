#pragma once

#include <cstdint>
#include <map>

#include "dtspan/dtree.hpp"

namespace dtspan {

// Strictly positive weight per tree edge.
class WeightMap {
public:
    WeightMap() = default;

    void set(EdgeId e, double w);
    double get(EdgeId e) const;  // throws validation_error when missing or non-positive
    bool has(EdgeId e) const { return w_.count(e) != 0; }
    std::size_t count() const { return w_.size(); }
    const std::map<EdgeId, double>& entries() const { return w_; }

    static WeightMap parse(const std::string& text);
    // Canonical document: entries sorted by (parent, bit), values with 17
    // significant digits.
    std::string serialize() const;

    // All edges of t set to 1.
    static WeightMap unit(const DTree& t);

private:
    std::map<EdgeId, double> w_;
};

// The two path maxima of the weight program and their geometric mean.
struct ProgramValue {
    double alpha = 0;      // max over paths of the deviating-edge weight sum
    double beta = 0;       // max over paths of the inverse-weight path sum
    double objective = 0;  // sqrt(alpha * beta)
};

// Optimal program value by the recurrence
//   OPT = (OPT_L + OPT_R + sqrt((OPT_L - OPT_R)^2 + 4)) / 2,  leaves at 0.
double opt_value(const DTree& t);

// OPT per subtree, indexed like t's dense node indices.
std::vector<double> subtree_opt_values(const DTree& t);

// Recursive optimal assignment: at every internal node the edge toward child
// C gets (OPT_C - OPT_sibling + sqrt((OPT_C - OPT_sibling)^2 + 4)) / 2. The
// single-leaf tree yields an empty map.
WeightMap canonical_weights(const DTree& t);

// Closed-form assignment W_e = 1 / log2(size(parent subtree) / size(child
// subtree)); every root-to-leaf inverse-weight sum telescopes to log2(size).
WeightMap appendix_b_weights(const DTree& t);

// Exact alpha/beta maxima over all syntactic root-to-leaf paths.
ProgramValue evaluate(const DTree& t, const WeightMap& w);

struct OracleResult {
    double objective = 0;
    WeightMap weights;
    int restarts_used = 0;
    bool box_hit = false;  // some optimal coordinate sat on the search box edge
};

// Numeric minimization of the program objective: cyclic coordinate descent
// with golden-section line search per edge on log-scale [1e-4, 1e4], with 20
// seed-deterministic random restarts. Caps at 8 internal nodes.
OracleResult brute_force_opt(const DTree& t, std::uint64_t seed, double rel_tol,
                             int jobs = 1);

struct OptBounds {
    double rank_depth = 0;  // 2 * sqrt(rank * depth)
    double size = 0;        // sqrt(2 * node count)
};

OptBounds bounds(const DTree& t);

}  // namespace dtspan
