#include "dtspan/dual_adversary.hpp"

#include <algorithm>
#include <cmath>

#include "dtspan/parallel.hpp"

namespace dtspan {

DualAdvSolution build_dual_adversary(const DTree& t, const WeightMap& w) {
    ensure_enumerable(t.num_vars(), "build_dual_adversary");
    DualAdvSolution sol;
    sol.n = t.num_vars();

    // Per-edge coefficients, indexed like the children of each internal node.
    std::vector<std::array<double, 2>> usq(t.count()), wsq(t.count());
    for (int idx = 0; idx < t.count(); ++idx) {
        if (t.node(idx).leaf) continue;
        for (int b = 0; b < 2; ++b) {
            const double we = w.get(t.edge(idx, b));
            usq[idx][b] = 1.0 / std::sqrt(we);
            wsq[idx][b] = std::sqrt(we);
        }
    }

    const std::uint32_t total = 1u << sol.n;
    sol.per_input.resize(total);
    sol.leaf_of.resize(total);
    for (std::uint32_t x = 0; x < total; ++x) {
        std::vector<DualAdvSolution::Entry>& entries = sol.per_input[x];
        int cur = t.root_index();
        while (!t.node(cur).leaf) {
            const int var = t.node(cur).var;
            const int taken = (x >> var) & 1u;
            entries.push_back({var, cur, usq[cur][taken], wsq[cur][1 - taken]});
            cur = t.child_index(cur, taken);
        }
        sol.leaf_of[x] = cur;
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.var < b.var; });
    }
    return sol;
}

DualFeasibilityReport check_feasibility(const DualAdvSolution& sol, int jobs) {
    const std::uint64_t total = std::uint64_t{1} << sol.n;
    DualFeasibilityReport rep;
    rep.pairs_checked = static_cast<long long>(total) * static_cast<long long>(total);

    std::vector<DualFeasibilityReport> parts(std::max(1, jobs));
    parallel_chunks(static_cast<long long>(total), jobs, [&](int chunk, long long lo,
                                                             long long hi) {
        DualFeasibilityReport part;
        for (long long xi = lo; xi < hi; ++xi) {
            const auto& ux = sol.per_input[xi];
            for (std::uint64_t y = 0; y < total; ++y) {
                const auto& wy = sol.per_input[y];
                const std::uint64_t diff = static_cast<std::uint64_t>(xi) ^ y;
                double sum = 0;
                // Merge the two var-sorted entry lists over differing bits.
                std::size_t a = 0, b = 0;
                while (a < ux.size() && b < wy.size()) {
                    if (ux[a].var < wy[b].var) {
                        ++a;
                    } else if (ux[a].var > wy[b].var) {
                        ++b;
                    } else {
                        if (((diff >> ux[a].var) & 1u) && ux[a].vertex == wy[b].vertex) {
                            sum += ux[a].u_coeff * wy[b].w_coeff;
                        }
                        ++a;
                        ++b;
                    }
                }
                const double target = sol.leaf_of[xi] == sol.leaf_of[y] ? 0.0 : 1.0;
                const double residual = std::abs(sum - target);
                if (residual > part.max_residual) {
                    part.max_residual = residual;
                    part.worst_x = static_cast<std::uint32_t>(xi);
                    part.worst_y = static_cast<std::uint32_t>(y);
                }
            }
        }
        parts[chunk] = part;
    });
    for (const auto& part : parts) {
        if (part.max_residual > rep.max_residual) {
            rep.max_residual = part.max_residual;
            rep.worst_x = part.worst_x;
            rep.worst_y = part.worst_y;
        }
    }
    rep.pass = rep.max_residual <= kDualResidualTol;
    return rep;
}

double dual_objective(const DualAdvSolution& sol) {
    double best = 0;
    for (const auto& entries : sol.per_input) {
        double su = 0, sw = 0;
        for (const auto& e : entries) {
            su += e.u_coeff * e.u_coeff;
            sw += e.w_coeff * e.w_coeff;
        }
        best = std::max(best, std::max(su, sw));
    }
    return best;
}

WeightMap balance(const WeightMap& w, double alpha, double beta) {
    if (!(alpha > 0) || !(beta > 0)) {
        throw validation_error("balance requires positive alpha and beta");
    }
    const double scale = std::sqrt(beta / alpha);
    WeightMap out;
    for (const auto& [e, we] : w.entries()) out.set(e, scale * we);
    return out;
}

}  // namespace dtspan
