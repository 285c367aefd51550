#include "dtspan/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "dtspan/dual_adversary.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/span_program.hpp"

namespace dtspan {

using json = nlohmann::json;

std::vector<EdgeId> missing_edges(const DTree& t, const WeightMap& w) {
    std::vector<EdgeId> out;
    for (const EdgeId& e : t.edge_ids()) {
        if (!w.has(e)) out.push_back(e);
    }
    return out;
}

Report build_report(const DTree& t, const ReportOptions& opts) {
    Report r;
    r.n = t.num_vars();
    r.size = t.size();
    r.depth = t.depth();
    r.leaves = t.leaf_count();
    r.rank = tree_rank(t);
    r.opt = opt_value(t);
    const OptBounds b = bounds(t);
    r.bound_rank_depth = b.rank_depth;
    r.bound_size = b.size;
    if (opts.with_oracle) {
        r.opt_oracle = brute_force_opt(t, opts.oracle_seed, opts.oracle_tol, opts.jobs).objective;
    }

    const bool verify = t.num_vars() <= opts.verify_max_n;
    std::vector<std::pair<std::string, WeightMap>> schemes = {
        {"unit", WeightMap::unit(t)},
        {"canonical", canonical_weights(t)},
        {"appendix-b", appendix_b_weights(t)},
    };
    if (opts.file_weights) {
        const auto missing = missing_edges(t, *opts.file_weights);
        if (!missing.empty()) {
            WeightingReport bad;
            bad.scheme = "file";
            bad.verified = true;
            bad.note = "weights do not cover " + std::to_string(missing.size()) +
                       " tree edge(s), first (" + std::to_string(missing[0].parent) + ", " +
                       std::to_string(missing[0].bit) + ")";
            r.weightings.push_back(std::move(bad));
            r.all_pass = false;
        } else {
            schemes.emplace_back("file", *opts.file_weights);
        }
    }
    for (const auto& [name, wm] : schemes) {
        WeightingReport wr;
        wr.scheme = name;
        const ProgramValue pv = evaluate(t, wm);
        wr.alpha = pv.alpha;
        wr.beta = pv.beta;
        wr.objective = pv.objective;
        if (verify) {
            wr.verified = true;
            const SpanProgramInstance inst = build_span_program(t, wm);
            const SpanVerifyReport sv = verify_span_all(inst, t, opts.jobs);
            wr.span_pass = sv.pass;
            wr.span_max_residual = sv.max_residual;
            const WitnessSizes ws = witness_sizes(inst, t, wm, opts.jobs);
            wr.wsize_plus = ws.wsize_plus;
            wr.wsize_minus = ws.wsize_minus;
            wr.wsize = ws.wsize;
            const DualAdvSolution sol = build_dual_adversary(t, wm);
            const DualFeasibilityReport df = check_feasibility(sol, opts.jobs);
            wr.dual_pass = df.pass;
            wr.dual_max_residual = df.max_residual;
            wr.dual_objective = dual_objective(sol);
            r.all_pass = r.all_pass && sv.pass && df.pass;
        }
        r.weightings.push_back(std::move(wr));
    }
    return r;
}

std::string report_to_json(const Report& r) {
    json doc;
    doc["tree"] = {{"n", r.n}, {"size", r.size}, {"depth", r.depth}, {"leaves", r.leaves}};
    doc["rank"] = r.rank;
    doc["opt"] = r.opt;
    if (r.opt_oracle) doc["opt_oracle"] = *r.opt_oracle;
    doc["bounds"] = {{"rank_depth", r.bound_rank_depth}, {"size", r.bound_size}};
    json ws = json::array();
    for (const auto& w : r.weightings) {
        json jw;
        jw["scheme"] = w.scheme;
        jw["alpha"] = w.alpha;
        jw["beta"] = w.beta;
        jw["objective"] = w.objective;
        jw["verified"] = w.verified;
        if (!w.note.empty()) {
            jw["note"] = w.note;
            jw["pass"] = false;
            ws.push_back(std::move(jw));
            continue;
        }
        if (w.verified) {
            jw["wsize_plus"] = w.wsize_plus;
            jw["wsize_minus"] = w.wsize_minus;
            jw["wsize"] = w.wsize;
            jw["span_pass"] = w.span_pass;
            jw["span_max_residual"] = w.span_max_residual;
            jw["dual_pass"] = w.dual_pass;
            jw["dual_max_residual"] = w.dual_max_residual;
            jw["dual_objective"] = w.dual_objective;
        }
        ws.push_back(std::move(jw));
    }
    doc["weightings"] = std::move(ws);
    doc["all_pass"] = r.all_pass;
    return doc.dump(2);
}

std::string report_to_text(const Report& r) {
    std::ostringstream os;
    os << "tree: n=" << r.n << " size=" << r.size << " depth=" << r.depth
       << " leaves=" << r.leaves << "\n";
    os << "rank: " << r.rank << "\n";
    os << "opt: " << r.opt;
    if (r.opt_oracle) os << "   (oracle: " << *r.opt_oracle << ")";
    os << "\n";
    os << "bounds: rank-depth=" << r.bound_rank_depth << " size=" << r.bound_size << "\n";
    for (const auto& w : r.weightings) {
        if (!w.note.empty()) {
            os << "[" << w.scheme << "] FAIL: " << w.note << "\n";
            continue;
        }
        os << "[" << w.scheme << "] alpha=" << w.alpha << " beta=" << w.beta
           << " objective=" << w.objective;
        if (w.verified) {
            os << " wsize=" << w.wsize << " span=" << (w.span_pass ? "pass" : "FAIL")
               << " dual=" << (w.dual_pass ? "pass" : "FAIL");
        } else {
            os << " (verification skipped: n over cap)";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace dtspan
