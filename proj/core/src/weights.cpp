#include "dtspan/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtspan/parallel.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/rng.hpp"

namespace dtspan {

using json = nlohmann::json;

void WeightMap::set(EdgeId e, double w) {
    if (!(w > 0) || !std::isfinite(w)) {
        throw validation_error("edge weight must be a positive finite real");
    }
    w_[e] = w;
}

double WeightMap::get(EdgeId e) const {
    auto it = w_.find(e);
    if (it == w_.end()) {
        throw validation_error("missing weight for edge (" + std::to_string(e.parent) + ", " +
                               std::to_string(e.bit) + ")");
    }
    return it->second;
}

WeightMap WeightMap::parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed weight document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array()) {
        throw validation_error("malformed weight document: expected {weights: [...]}");
    }
    WeightMap m;
    for (const json& je : doc["weights"]) {
        if (!je.contains("parent") || !je.contains("bit") || !je.contains("w")) {
            throw validation_error("weight entry needs parent, bit, w");
        }
        const int bit = je["bit"].get<int>();
        if (bit != 0 && bit != 1) throw validation_error("weight entry bit must be 0 or 1");
        const EdgeId e{je["parent"].get<NodeId>(), bit};
        if (m.has(e)) throw validation_error("duplicate weight entry");
        m.set(e, je["w"].get<double>());
    }
    return m;
}

std::string WeightMap::serialize() const {
    std::ostringstream os;
    os << "{\"weights\":[";
    bool first = true;
    char buf[64];
    for (const auto& [e, w] : w_) {
        if (!first) os << ',';
        first = false;
        std::snprintf(buf, sizeof buf, "%.17g", w);
        os << "{\"parent\":" << e.parent << ",\"bit\":" << e.bit << ",\"w\":" << buf << "}";
    }
    os << "]}";
    return os.str();
}

WeightMap WeightMap::unit(const DTree& t) {
    WeightMap m;
    for (const EdgeId& e : t.edge_ids()) m.set(e, 1.0);
    return m;
}

std::vector<double> subtree_opt_values(const DTree& t) {
    std::vector<double> opt(t.count(), 0.0);
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        const double a = opt[t.child_index(idx, 0)];
        const double b = opt[t.child_index(idx, 1)];
        opt[idx] = (a + b + std::sqrt((a - b) * (a - b) + 4.0)) / 2.0;
    }
    return opt;
}

double opt_value(const DTree& t) { return subtree_opt_values(t)[t.root_index()]; }

WeightMap canonical_weights(const DTree& t) {
    const std::vector<double> opt = subtree_opt_values(t);
    WeightMap m;
    for (int idx = 0; idx < t.count(); ++idx) {
        if (t.node(idx).leaf) continue;
        const double a = opt[t.child_index(idx, 0)];
        const double b = opt[t.child_index(idx, 1)];
        const double root = std::sqrt((a - b) * (a - b) + 4.0);
        m.set(t.edge(idx, 0), (a - b + root) / 2.0);
        m.set(t.edge(idx, 1), (b - a + root) / 2.0);
    }
    return m;
}

WeightMap appendix_b_weights(const DTree& t) {
    std::vector<long long> size(t.count(), 1);
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        size[idx] = 1 + size[t.child_index(idx, 0)] + size[t.child_index(idx, 1)];
    }
    WeightMap m;
    for (int idx = 0; idx < t.count(); ++idx) {
        if (t.node(idx).leaf) continue;
        for (int b = 0; b < 2; ++b) {
            const double ratio =
                static_cast<double>(size[idx]) / static_cast<double>(size[t.child_index(idx, b)]);
            m.set(t.edge(idx, b), 1.0 / std::log2(ratio));
        }
    }
    return m;
}

ProgramValue evaluate(const DTree& t, const WeightMap& w) {
    // Bottom-up maxima over all syntactic root-to-leaf paths. inv[v] is the
    // worst inverse-weight sum of a path below v, dev[v] the worst
    // sibling-weight sum.
    std::vector<double> inv(t.count(), 0.0), dev(t.count(), 0.0);
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        const double w0 = w.get(t.edge(idx, 0));
        const double w1 = w.get(t.edge(idx, 1));
        const int c0 = t.child_index(idx, 0);
        const int c1 = t.child_index(idx, 1);
        inv[idx] = std::max(1.0 / w0 + inv[c0], 1.0 / w1 + inv[c1]);
        dev[idx] = std::max(w1 + dev[c0], w0 + dev[c1]);
    }
    ProgramValue pv;
    pv.alpha = dev[t.root_index()];
    pv.beta = inv[t.root_index()];
    pv.objective = std::sqrt(pv.alpha * pv.beta);
    return pv;
}

OptBounds bounds(const DTree& t) {
    OptBounds b;
    b.rank_depth = 2.0 * std::sqrt(static_cast<double>(tree_rank(t)) * t.depth());
    b.size = std::sqrt(2.0 * t.size());
    return b;
}

namespace {

constexpr double kLogBoxLo = -4.0;  // log10 of the per-weight search box
constexpr double kLogBoxHi = 4.0;
constexpr int kRestarts = 20;
constexpr int kGoldenIters = 32;
constexpr int kMaxSweeps = 25;
constexpr int kAnnealStages = 8;
constexpr double kAnnealShrink = 0.15;

// Path table for the oracle's own objective evaluation, independent of
// evaluate()'s bottom-up maxima.
struct PathTable {
    // Per path: edge slots on the path and the sibling slots deviating from it.
    std::vector<std::vector<int>> on_path;
    std::vector<std::vector<int>> deviating;
    std::vector<EdgeId> edge_of_slot;
};

PathTable build_path_table(const DTree& t) {
    PathTable pt;
    std::vector<std::vector<int>> slot(t.count(), std::vector<int>(2, -1));
    for (int idx = 0; idx < t.count(); ++idx) {
        if (t.node(idx).leaf) continue;
        for (int b = 0; b < 2; ++b) {
            slot[idx][b] = static_cast<int>(pt.edge_of_slot.size());
            pt.edge_of_slot.push_back(t.edge(idx, b));
        }
    }
    for (const Path& p : t.paths()) {
        std::vector<int> on, dev;
        for (int k = 0; k + 1 < static_cast<int>(p.nodes.size()); ++k) {
            const int v = p.nodes[k];
            const int taken = t.child_index(v, 0) == p.nodes[k + 1] ? 0 : 1;
            on.push_back(slot[v][taken]);
            dev.push_back(slot[v][1 - taken]);
        }
        pt.on_path.push_back(std::move(on));
        pt.deviating.push_back(std::move(dev));
    }
    return pt;
}

double path_objective(const PathTable& pt, const std::vector<double>& w) {
    double alpha = 0, beta = 0;
    for (std::size_t p = 0; p < pt.on_path.size(); ++p) {
        double inv = 0, dev = 0;
        for (int s : pt.on_path[p]) inv += 1.0 / w[s];
        for (int s : pt.deviating[p]) dev += w[s];
        beta = std::max(beta, inv);
        alpha = std::max(alpha, dev);
    }
    return std::sqrt(alpha * beta);
}

// Soft maximum over all 2L path sums at temperature tau. Minimizing this is
// equivalent to the program objective: balanced weights make max(alpha, beta)
// equal sqrt(alpha * beta), and the smoothing is convex in the log-weights,
// which keeps the per-coordinate slices unimodal and the sweeps from stalling
// on the raw max's kinks.
double smooth_objective(const PathTable& pt, const std::vector<double>& w, double tau,
                        std::vector<double>& scratch) {
    scratch.clear();
    for (std::size_t p = 0; p < pt.on_path.size(); ++p) {
        double inv = 0, dev = 0;
        for (int s : pt.on_path[p]) inv += 1.0 / w[s];
        for (int s : pt.deviating[p]) dev += w[s];
        scratch.push_back(inv);
        scratch.push_back(dev);
    }
    double peak = scratch[0];
    for (double v : scratch) peak = std::max(peak, v);
    double sum = 0;
    for (double v : scratch) sum += std::exp((v - peak) / tau);
    return peak + tau * std::log(sum);
}

struct RestartOutcome {
    double objective = 0;
    std::vector<double> weights;
    bool box_hit = false;
};

RestartOutcome run_restart(const PathTable& pt, std::uint64_t seed, int restart) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(restart) + 1);
    const std::size_t m = pt.edge_of_slot.size();
    std::vector<double> logw(m), w(m);
    for (std::size_t i = 0; i < m; ++i) {
        logw[i] = rng.uniform(kLogBoxLo, kLogBoxHi);
        w[i] = std::pow(10.0, logw[i]);
    }

    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    std::vector<double> scratch;
    double tau = 0.5 * std::max(1.0, smooth_objective(pt, w, 1.0, scratch));
    for (int stage = 0; stage < kAnnealStages; ++stage) {
        double cur = smooth_objective(pt, w, tau, scratch);
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            const double before = cur;
            for (std::size_t i = 0; i < m; ++i) {
                double lo = kLogBoxLo, hi = kLogBoxHi;
                auto eval_at = [&](double tcoord) {
                    w[i] = std::pow(10.0, tcoord);
                    return smooth_objective(pt, w, tau, scratch);
                };
                double x1 = hi - golden * (hi - lo);
                double x2 = lo + golden * (hi - lo);
                double f1 = eval_at(x1);
                double f2 = eval_at(x2);
                for (int it = 0; it < kGoldenIters; ++it) {
                    if (f1 <= f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - golden * (hi - lo);
                        f1 = eval_at(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + golden * (hi - lo);
                        f2 = eval_at(x2);
                    }
                }
                const double best_t = f1 <= f2 ? x1 : x2;
                const double best_f = std::min(f1, f2);
                if (best_f < cur) {
                    logw[i] = best_t;
                    cur = best_f;
                }
                w[i] = std::pow(10.0, logw[i]);
            }
            if (before - cur <= 0.02 * tau) break;
        }
        tau *= kAnnealShrink;
    }

    RestartOutcome out;
    out.objective = path_objective(pt, w);  // exact program objective
    out.weights = w;
    for (double t : logw) {
        if (t < kLogBoxLo + 1e-6 || t > kLogBoxHi - 1e-6) out.box_hit = true;
    }
    return out;
}

}  // namespace

OracleResult brute_force_opt(const DTree& t, std::uint64_t seed, double rel_tol, int jobs) {
    if (t.internal_count() > 8) {
        throw cap_exceeded_error("brute_force_opt: " + std::to_string(t.internal_count()) +
                                 " internal nodes exceeds cap 8");
    }
    if (rel_tol < 1e-4) throw validation_error("brute_force_opt: rel_tol must be >= 1e-4");

    OracleResult res;
    res.restarts_used = kRestarts;
    if (t.internal_count() == 0) {
        res.objective = 0;
        return res;
    }

    const PathTable pt = build_path_table(t);
    std::vector<RestartOutcome> outcomes(kRestarts);
    parallel_chunks(kRestarts, jobs, [&](int, long long lo, long long hi) {
        for (long long r = lo; r < hi; ++r) {
            outcomes[r] = run_restart(pt, seed, static_cast<int>(r));
        }
    });

    // Deterministic reduction: best objective, ties broken by restart index.
    int best = 0;
    for (int r = 1; r < kRestarts; ++r) {
        if (outcomes[r].objective < outcomes[best].objective) best = r;
    }
    res.objective = outcomes[best].objective;
    res.box_hit = outcomes[best].box_hit;
    for (std::size_t s = 0; s < pt.edge_of_slot.size(); ++s) {
        res.weights.set(pt.edge_of_slot[s], outcomes[best].weights[s]);
    }
    return res;
}

}  // namespace dtspan
