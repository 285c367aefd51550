#pragma once

#include <cstdint>
#include <vector>

#include "dtspan/dtree.hpp"
#include "dtspan/weights.hpp"

namespace dtspan {

// Per-input vector pairs over the internal-node coordinates. For input x and
// variable j queried at the path vertex v, u carries 1/sqrt(W) of the edge x
// takes at v and w carries sqrt(W) of the edge x avoids; both sit on the v
// axis. Variables not queried on P_x get zero vectors.
struct DualAdvSolution {
    struct Entry {
        int var;
        int vertex;     // dense index of the internal node
        double u_coeff; // 1/sqrt(W_taken)
        double w_coeff; // sqrt(W_avoided)
    };

    int n = 0;
    std::vector<std::vector<Entry>> per_input;  // index = input mask; entries sorted by var
    std::vector<int> leaf_of;                   // reached leaf per input
};

inline constexpr double kDualResidualTol = 1e-9;

// Materializes the solution for all 2^n inputs; n capped at 20.
DualAdvSolution build_dual_adversary(const DTree& t, const WeightMap& w);

struct DualFeasibilityReport {
    bool pass = true;
    long long pairs_checked = 0;
    double max_residual = 0;
    std::uint32_t worst_x = 0;
    std::uint32_t worst_y = 0;
};

// Checks sum over differing j of <u_xj, w_yj> against 1 - delta(leaf_x,
// leaf_y) for every ordered input pair; deterministic worst-pair reduction.
DualFeasibilityReport check_feasibility(const DualAdvSolution& sol, int jobs = 1);

// max over inputs of max(sum ||u||^2, sum ||w||^2).
double dual_objective(const DualAdvSolution& sol);

// Rescales weights so both inner maxima of the objective equal sqrt(alpha *
// beta): every weight is multiplied by sqrt(beta / alpha).
WeightMap balance(const WeightMap& w, double alpha, double beta);

}  // namespace dtspan
