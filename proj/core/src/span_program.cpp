#include "dtspan/span_program.hpp"

#include <algorithm>
#include <cmath>

#include "dtspan/parallel.hpp"

namespace dtspan {

SpanProgramInstance build_span_program(const DTree& t, const WeightMap& w) {
    SpanProgramInstance inst;
    inst.dim = t.count();
    inst.columns.reserve(t.edge_count());
    for (int idx = 0; idx < t.count(); ++idx) {
        const DTree::Node& nd = t.node(idx);
        if (nd.leaf) continue;
        for (int b = 0; b < 2; ++b) {
            SpanProgramInstance::Column col;
            col.edge = t.edge(idx, b);
            col.var = nd.var;
            col.bit = b;
            col.row_parent = idx;
            col.row_child = t.child_index(idx, b);
            col.mag = std::sqrt(w.get(col.edge));
            inst.columns.push_back(col);
        }
    }
    return inst;
}

namespace {

void check_input(const DTree& t, const std::vector<std::uint8_t>& x) {
    if (static_cast<int>(x.size()) != t.num_vars()) {
        throw validation_error("input length does not match n");
    }
}

// Column indices along P_x, in root-to-leaf order.
std::vector<int> path_columns(const SpanProgramInstance& inst, const DTree& t,
                              const std::vector<std::uint8_t>& x) {
    // Columns are emitted per internal node in index order, two per node.
    std::vector<int> col_of_node(t.count(), -1);
    for (int c = 0; c < static_cast<int>(inst.columns.size()); ++c) {
        if (col_of_node[inst.columns[c].row_parent] < 0) col_of_node[inst.columns[c].row_parent] = c;
    }
    std::vector<int> out;
    int cur = t.root_index();
    while (!t.node(cur).leaf) {
        const int bit = x[t.node(cur).var] ? 1 : 0;
        out.push_back(col_of_node[cur] + bit);
        cur = t.child_index(cur, bit);
    }
    return out;
}

}  // namespace

WitnessPair witnesses(const SpanProgramInstance& inst, const DTree& t,
                      const std::vector<std::uint8_t>& x) {
    check_input(t, x);
    WitnessPair wp;
    wp.negative_support.push_back(t.root_index());
    for (int c : path_columns(inst, t, x)) {
        wp.positive.emplace_back(c, 1.0 / inst.columns[c].mag);
        wp.negative_support.push_back(inst.columns[c].row_child);
    }
    return wp;
}

void SpanVerifyReport::absorb(const SpanVerifyReport& other) {
    if (other.conditions.empty()) return;  // nothing measured
    if (conditions.empty()) {
        conditions = other.conditions;
    } else {
        for (std::size_t i = 0; i < conditions.size(); ++i) {
            conditions[i].residual = std::max(conditions[i].residual, other.conditions[i].residual);
        }
    }
    pass = pass && other.pass;
    inputs_checked += other.inputs_checked;
    if (other.max_residual > max_residual) {
        max_residual = other.max_residual;
        worst_input = other.worst_input;
        worst_condition = other.worst_condition;
    }
}

SpanVerifyReport verify_span(const SpanProgramInstance& inst, const DTree& t,
                             const std::vector<std::uint8_t>& x, const WitnessPair& wit) {
    check_input(t, x);
    if (inst.dim != t.count()) throw validation_error("instance dimension mismatch");

    SpanVerifyReport rep;
    rep.inputs_checked = 1;
    rep.conditions = {{"unavailable-coordinates-zero", 0},
                      {"positive-witness-spans-target", 0},
                      {"negative-witness-orthogonal-to-available", 0},
                      {"negative-witness-hits-other-targets", 0}};

    const int leaf = t.eval_leaf_index(x);

    // Dense positive coefficient vector and the image A |w_x>.
    std::vector<double> coeff(inst.columns.size(), 0.0);
    for (const auto& [c, v] : wit.positive) {
        if (c < 0 || c >= static_cast<int>(coeff.size())) {
            throw validation_error("witness coefficient on unknown column");
        }
        coeff[c] += v;
    }
    double& r_avail = rep.conditions[0].residual;
    std::vector<double> image(inst.dim, 0.0);
    for (std::size_t c = 0; c < inst.columns.size(); ++c) {
        const auto& col = inst.columns[c];
        if (!inst.available(col, x)) r_avail = std::max(r_avail, std::abs(coeff[c]));
        if (coeff[c] != 0.0) {
            image[col.row_parent] += col.mag * coeff[c];
            image[col.row_child] -= col.mag * coeff[c];
        }
    }
    // Target of the reached leaf: unit(root) - unit(leaf).
    image[t.root_index()] -= 1.0;
    image[leaf] += 1.0;
    double& r_target = rep.conditions[1].residual;
    for (double v : image) r_target = std::max(r_target, std::abs(v));

    // Negative witness as a dense 0/1 vector over vertices.
    std::vector<double> neg(inst.dim, 0.0);
    for (int v : wit.negative_support) neg[v] += 1.0;
    double& r_orth = rep.conditions[2].residual;
    for (const auto& col : inst.columns) {
        if (!inst.available(col, x)) continue;
        const double ip = col.mag * (neg[col.row_parent] - neg[col.row_child]);
        r_orth = std::max(r_orth, std::abs(ip));
    }
    double& r_other = rep.conditions[3].residual;
    for (int idx = 0; idx < t.count(); ++idx) {
        if (!t.node(idx).leaf || idx == leaf) continue;
        const double ip = neg[t.root_index()] - neg[idx];
        r_other = std::max(r_other, std::abs(ip - 1.0));
    }

    for (const auto& cond : rep.conditions) {
        if (cond.residual > rep.max_residual) {
            rep.max_residual = cond.residual;
            rep.worst_condition = cond.name;
            rep.worst_input = x;
        }
        if (cond.residual > kSpanResidualTol) rep.pass = false;
    }
    if (rep.worst_input.empty()) rep.worst_input = x;
    return rep;
}

SpanVerifyReport verify_span(const SpanProgramInstance& inst, const DTree& t,
                             const std::vector<std::uint8_t>& x) {
    return verify_span(inst, t, x, witnesses(inst, t, x));
}

namespace {

std::vector<std::uint8_t> unpack(std::uint32_t mask, int n) {
    std::vector<std::uint8_t> x(n);
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1u;
    return x;
}

}  // namespace

SpanVerifyReport verify_span_all(const SpanProgramInstance& inst, const DTree& t, int jobs) {
    ensure_enumerable(t.num_vars(), "verify_span_all");
    const long long total = 1LL << t.num_vars();
    std::vector<SpanVerifyReport> parts(std::max(1, jobs));
    parallel_chunks(total, jobs, [&](int chunk, long long lo, long long hi) {
        SpanVerifyReport acc;
        for (long long m = lo; m < hi; ++m) {
            acc.absorb(verify_span(inst, t, unpack(static_cast<std::uint32_t>(m), t.num_vars())));
        }
        parts[chunk] = std::move(acc);
    });
    SpanVerifyReport rep;
    for (const auto& part : parts) rep.absorb(part);
    return rep;
}

WitnessSizes witness_sizes(const SpanProgramInstance& inst, const DTree& t, const WeightMap& w,
                           int jobs) {
    ensure_enumerable(t.num_vars(), "witness_sizes");
    WitnessSizes ws;

    const long long total = 1LL << t.num_vars();
    std::vector<double> plus_part(std::max(1, jobs), 0.0);
    std::vector<double> minus_part(std::max(1, jobs), 0.0);
    parallel_chunks(total, jobs, [&](int chunk, long long lo, long long hi) {
        double worst_plus = 0, worst_minus = 0;
        for (long long m = lo; m < hi; ++m) {
            const std::vector<std::uint8_t> x = unpack(static_cast<std::uint32_t>(m), t.num_vars());
            const WitnessPair wit = witnesses(inst, t, x);
            double norm_plus = 0;
            for (const auto& [c, v] : wit.positive) norm_plus += v * v;
            std::vector<char> on_path(inst.dim, 0);
            for (int v : wit.negative_support) on_path[v] = 1;
            double norm_minus = 0;
            for (const auto& col : inst.columns) {
                const double ip = col.mag * (on_path[col.row_parent] - on_path[col.row_child]);
                norm_minus += ip * ip;
            }
            worst_plus = std::max(worst_plus, norm_plus);
            worst_minus = std::max(worst_minus, norm_minus);
        }
        plus_part[chunk] = worst_plus;
        minus_part[chunk] = worst_minus;
    });
    for (double v : plus_part) ws.wsize_plus = std::max(ws.wsize_plus, v);
    for (double v : minus_part) ws.wsize_minus = std::max(ws.wsize_minus, v);
    ws.wsize = std::sqrt(ws.wsize_plus * ws.wsize_minus);

    const ProgramValue pv = evaluate(t, w);
    ws.path_plus = pv.beta;
    ws.path_minus = pv.alpha;
    return ws;
}

}  // namespace dtspan
