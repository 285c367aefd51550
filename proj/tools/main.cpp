#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dtspan/andor.hpp"
#include "dtspan/dual_adversary.hpp"
#include "dtspan/formula.hpp"
#include "dtspan/rank.hpp"
#include "dtspan/report.hpp"
#include "dtspan/span_program.hpp"
#include "dtspan/truth_table.hpp"
#include "dtspan/weights.hpp"

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw dtspan::validation_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw dtspan::validation_error("cannot open " + path + " for writing");
    out << text;
}

dtspan::DTree load_tree(const std::string& path) {
    return dtspan::DTree::parse(read_input(path));
}

std::vector<std::uint8_t> parse_bits(const std::string& s, int n) {
    if (static_cast<int>(s.size()) != n) {
        throw dtspan::validation_error("input must have exactly " + std::to_string(n) + " bits");
    }
    std::vector<std::uint8_t> x(n);
    for (int j = 0; j < n; ++j) {
        if (s[j] != '0' && s[j] != '1') {
            throw dtspan::validation_error("input bits must be 0 or 1");
        }
        x[j] = s[j] == '1' ? 1 : 0;
    }
    return x;
}

std::string bits_to_string(const std::vector<std::uint8_t>& x) {
    std::string s;
    for (std::uint8_t b : x) s.push_back(b ? '1' : '0');
    return s;
}

// Interactive or scripted policies for the game REPL. Moves come one per
// line; prompts and state go to stdout.
class MoveSource {
public:
    MoveSource(std::istream& in, bool interactive) : in_(in), interactive_(interactive) {}

    std::string next(const std::string& prompt) {
        if (interactive_) std::cout << prompt << std::flush;
        std::string line;
        while (std::getline(in_, line)) {
            if (line.empty()) continue;
            return line;
        }
        throw dtspan::validation_error("move input exhausted");
    }

private:
    std::istream& in_;
    bool interactive_;
};

void print_state(const dtspan::AndOrTree& t) {
    const dtspan::AndOrMeasures m = dtspan::measures(t);
    std::cout << "tree: " << t.key() << "\n  P=" << m.P << " S=" << m.S << "\n";
}

class HumanProver : public dtspan::ProverPolicy {
public:
    explicit HumanProver(MoveSource& src) : src_(src) {}
    int choose_query(const dtspan::AndOrTree& t) override {
        print_state(t);
        while (true) {
            const std::string line = src_.next("prover> query variable index: ");
            try {
                return std::stoi(line);
            } catch (const std::exception&) {
                std::cout << "expected an integer\n";
            }
        }
    }
    int choose_defer_bit(const dtspan::AndOrTree&, int var) override {
        while (true) {
            const std::string line =
                src_.next("prover> delayer deferred x" + std::to_string(var) + "; bit (0/1): ");
            if (line == "0") return 0;
            if (line == "1") return 1;
            std::cout << "expected 0 or 1\n";
        }
    }

private:
    MoveSource& src_;
};

class HumanDelayer : public dtspan::DelayerPolicy {
public:
    explicit HumanDelayer(MoveSource& src) : src_(src) {}
    dtspan::DelayerDecision respond(const dtspan::AndOrTree& t, int var) override {
        print_state(t);
        while (true) {
            const std::string line =
                src_.next("delayer> x" + std::to_string(var) + " queried; 0, 1, or defer: ");
            if (line == "0") return dtspan::DelayerDecision::Answer0;
            if (line == "1") return dtspan::DelayerDecision::Answer1;
            if (line == "defer" || line == "d") return dtspan::DelayerDecision::Defer;
            std::cout << "expected 0, 1, or defer\n";
        }
    }

private:
    MoveSource& src_;
};

struct GenArgs {
    std::string kind;
    int n = 0;
    int depth = 0;
    int budget = 0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_gen(const GenArgs& a) {
    dtspan::DTree t = [&]() {
        if (a.kind == "or-list") return dtspan::gen_or_list(a.n);
        if (a.kind == "and-chain") return dtspan::gen_and_chain(a.n);
        if (a.kind == "parity") return dtspan::gen_parity(a.n);
        if (a.kind == "complete") return dtspan::gen_complete(a.depth);
        if (a.kind == "spine") return dtspan::gen_spine(a.n);
        if (a.kind == "random") return dtspan::gen_random(a.seed, a.budget, a.n);
        throw dtspan::validation_error("unknown generator kind " + a.kind);
    }();
    write_output(a.out, t.serialize());
    return kExitOk;
}

int run_rank(const std::string& tree_path, bool as_json) {
    const dtspan::DTree t = load_tree(tree_path);
    const int r = dtspan::tree_rank(t);
    if (as_json) {
        json doc{{"rank", r}, {"size", t.size()}, {"depth", t.depth()}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << r << "\n";
    }
    return kExitOk;
}

int run_opt(const std::string& tree_path, bool as_json) {
    const dtspan::DTree t = load_tree(tree_path);
    const double v = dtspan::opt_value(t);
    if (as_json) {
        json doc{{"opt", v}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << v << "\n";
    }
    return kExitOk;
}

int run_weights(const std::string& tree_path, const std::string& scheme, const std::string& out) {
    const dtspan::DTree t = load_tree(tree_path);
    dtspan::WeightMap wm;
    if (scheme == "canonical") {
        wm = dtspan::canonical_weights(t);
    } else if (scheme == "appendix-b") {
        wm = dtspan::appendix_b_weights(t);
    } else {
        throw dtspan::validation_error("unknown scheme " + scheme);
    }
    write_output(out, wm.serialize());
    return kExitOk;
}

int run_oracle(const std::string& tree_path, std::uint64_t seed, double tol, int jobs,
               const std::string& out, bool as_json) {
    const dtspan::DTree t = load_tree(tree_path);
    const dtspan::OracleResult res = dtspan::brute_force_opt(t, seed, tol, jobs);
    if (as_json || !out.empty()) {
        json doc;
        doc["opt"] = res.objective;
        doc["box_hit"] = res.box_hit;
        doc["weights"] = json::parse(res.weights.serialize())["weights"];
        write_output(out, doc.dump());
    } else {
        std::cout << res.objective << "\n";
    }
    return kExitOk;
}

// A parseable weights file that does not cover every tree edge is a failed
// verification (exit 1), not an input error.
bool report_missing_weights(const dtspan::DTree& t, const dtspan::WeightMap& wm) {
    const auto missing = dtspan::missing_edges(t, wm);
    if (missing.empty()) return false;
    json doc;
    doc["pass"] = false;
    json list = json::array();
    for (const auto& e : missing) list.push_back({{"parent", e.parent}, {"bit", e.bit}});
    doc["missing_weights"] = std::move(list);
    std::cout << doc.dump(2) << "\n";
    return true;
}

int run_verify_span(const std::string& tree_path, const std::string& weights_path,
                    const std::string& input_bits, bool all, int jobs) {
    const dtspan::DTree t = load_tree(tree_path);
    const dtspan::WeightMap wm = dtspan::WeightMap::parse(read_input(weights_path));
    if (report_missing_weights(t, wm)) return kExitVerifyFail;
    const dtspan::SpanProgramInstance inst = dtspan::build_span_program(t, wm);

    dtspan::SpanVerifyReport rep;
    if (!input_bits.empty()) {
        rep = dtspan::verify_span(inst, t, parse_bits(input_bits, t.num_vars()));
    } else {
        (void)all;  // --all is the default behavior
        rep = dtspan::verify_span_all(inst, t, jobs);
    }
    const dtspan::WitnessSizes ws = dtspan::witness_sizes(inst, t, wm, jobs);

    json doc;
    doc["pass"] = rep.pass;
    doc["inputs_checked"] = rep.inputs_checked;
    doc["max_residual"] = rep.max_residual;
    doc["worst_condition"] = rep.worst_condition;
    doc["worst_input"] = bits_to_string(rep.worst_input);
    json conds = json::array();
    for (const auto& c : rep.conditions) {
        conds.push_back({{"name", c.name}, {"max_residual", c.residual}});
    }
    doc["conditions"] = std::move(conds);
    doc["wsize_plus"] = ws.wsize_plus;
    doc["wsize_minus"] = ws.wsize_minus;
    doc["wsize"] = ws.wsize;
    std::cout << doc.dump(2) << "\n";
    return rep.pass ? kExitOk : kExitVerifyFail;
}

int run_verify_dual(const std::string& tree_path, const std::string& weights_path, int max_n,
                    int jobs) {
    const dtspan::DTree t = load_tree(tree_path);
    const dtspan::WeightMap wm = dtspan::WeightMap::parse(read_input(weights_path));
    if (report_missing_weights(t, wm)) return kExitVerifyFail;

    json doc;
    bool pass = true;
    if (t.num_vars() <= max_n) {
        const dtspan::DualAdvSolution sol = dtspan::build_dual_adversary(t, wm);
        const dtspan::DualFeasibilityReport rep = dtspan::check_feasibility(sol, jobs);
        doc["pairs_checked"] = rep.pairs_checked;
        doc["max_residual"] = rep.max_residual;
        doc["objective"] = dtspan::dual_objective(sol);
        pass = rep.pass;
    } else {
        // Beyond the materialization cap only the path-combinatorial
        // objective is available.
        const dtspan::ProgramValue pv = dtspan::evaluate(t, wm);
        doc["pairs_checked"] = 0;
        doc["max_residual"] = 0.0;
        doc["objective"] = std::max(pv.alpha, pv.beta);
        doc["note"] = "n exceeds --max-n; pairwise feasibility skipped";
    }
    doc["pass"] = pass;
    std::cout << doc.dump(2) << "\n";
    return pass ? kExitOk : kExitVerifyFail;
}

int run_report(const std::string& tree_path, dtspan::ReportOptions opts,
               const std::string& weights_path, bool as_json) {
    const dtspan::DTree t = load_tree(tree_path);
    if (!weights_path.empty()) {
        opts.file_weights = dtspan::WeightMap::parse(read_input(weights_path));
    }
    const dtspan::Report rep = dtspan::build_report(t, opts);
    std::cout << (as_json ? dtspan::report_to_json(rep) : dtspan::report_to_text(rep));
    std::cout << "\n";
    return rep.all_pass ? kExitOk : kExitVerifyFail;
}

int run_andor(const std::string& what, int depth, bool as_json) {
    const dtspan::AndOrTree t = dtspan::AndOrTree::complete(depth);
    const dtspan::AndOrMeasures m = dtspan::measures(t);
    const int n = t.leaf_count();
    if (as_json) {
        json doc{{"n", n}, {"P", m.P}, {"S", m.S}};
        if (what == "rank") doc["rank"] = m.P;
        std::cout << doc.dump() << "\n";
    } else if (what == "rank") {
        std::cout << m.P << "\n";
    } else {
        std::cout << "n=" << n << " P=" << m.P << " S=" << m.S << "\n";
    }
    return kExitOk;
}

struct GameArgs {
    int depth = 2;
    std::string prover = "paper";
    std::string delayer = "paper";
    std::uint64_t seed = 1;
    bool trace = false;
    std::string moves_file;
    bool as_json = false;
};

int run_game(const GameArgs& a) {
    const dtspan::AndOrTree t0 = dtspan::AndOrTree::complete(a.depth);

    const bool needs_human = a.prover == "human" || a.delayer == "human";
    std::ifstream moves_in;
    std::unique_ptr<MoveSource> moves;
    if (needs_human) {
        if (!a.moves_file.empty()) {
            moves_in.open(a.moves_file);
            if (!moves_in) throw dtspan::validation_error("cannot open " + a.moves_file);
            moves = std::make_unique<MoveSource>(moves_in, false);
        } else if (isatty(fileno(stdin))) {
            moves = std::make_unique<MoveSource>(std::cin, true);
        } else {
            throw dtspan::validation_error(
                "human policy needs a terminal; use --moves FILE for scripted play");
        }
    }

    std::unique_ptr<dtspan::ProverPolicy> prover;
    std::unique_ptr<dtspan::DelayerPolicy> delayer;
    // Exhaustive policies model a deterministic opponent; only the scripted
    // policies qualify.
    if (a.prover == "exhaustive" && a.delayer != "paper" && a.delayer != "exhaustive") {
        throw dtspan::validation_error("exhaustive prover requires --delayer paper|exhaustive");
    }
    if (a.delayer == "exhaustive" && a.prover != "paper" && a.prover != "exhaustive") {
        throw dtspan::validation_error("exhaustive delayer requires --prover paper|exhaustive");
    }

    if (a.delayer == "paper") {
        delayer = dtspan::make_paper_delayer();
    } else if (a.delayer == "random") {
        delayer = dtspan::make_random_delayer(a.seed * 2 + 1);
    } else if (a.delayer == "human") {
        delayer = std::make_unique<HumanDelayer>(*moves);
    } else if (a.delayer != "exhaustive") {
        throw dtspan::validation_error("unknown delayer policy " + a.delayer);
    }

    if (a.prover == "paper") {
        prover = dtspan::make_paper_prover();
    } else if (a.prover == "random") {
        prover = dtspan::make_random_prover(a.seed * 2);
    } else if (a.prover == "human") {
        prover = std::make_unique<HumanProver>(*moves);
    } else if (a.prover == "exhaustive") {
        prover = dtspan::make_exhaustive_prover(a.delayer == "exhaustive" ? nullptr
                                                                          : delayer.get());
    } else {
        throw dtspan::validation_error("unknown prover policy " + a.prover);
    }
    if (a.delayer == "exhaustive") {
        delayer = dtspan::make_exhaustive_delayer(a.prover == "exhaustive" ? nullptr
                                                                           : prover.get());
    }

    dtspan::RoundObserver observer;
    if (a.trace || needs_human) {
        observer = [](const dtspan::AndOrTree& t, const dtspan::GameRound& r) {
            std::cout << "x" << r.var << " <- " << r.bit
                      << (r.decision == dtspan::DelayerDecision::Defer ? " (deferred)" : "")
                      << "  score=" << r.score_after << " P=" << r.p_after << " S=" << r.s_after
                      << "  tree: " << t.key() << "\n";
        };
    }

    const dtspan::GameTranscript g = dtspan::play(t0, *prover, *delayer, observer);
    if (a.as_json) {
        json rounds = json::array();
        for (const auto& r : g.rounds) {
            rounds.push_back({{"var", r.var},
                              {"decision", r.decision == dtspan::DelayerDecision::Defer
                                               ? "defer"
                                               : (r.bit ? "answer1" : "answer0")},
                              {"bit", r.bit},
                              {"score", r.score_after},
                              {"P", r.p_after},
                              {"S", r.s_after}});
        }
        json doc{{"n", t0.leaf_count()},
                 {"initial_P", g.initial_p},
                 {"initial_S", g.initial_s},
                 {"final_score", g.final_score},
                 {"rounds", std::move(rounds)}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "final score: " << g.final_score << "\n";
    }
    return kExitOk;
}

int run_func_rank(int n, const std::string& table_hex, bool as_json) {
    const dtspan::TruthTable f = dtspan::TruthTable::from_hex(n, table_hex);
    const int r = dtspan::func_rank(f);
    if (as_json) {
        json doc{{"n", n}, {"table", f.to_hex()}, {"rank", r}};
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << r << "\n";
    }
    return kExitOk;
}

int run_formula(const std::string& tree_path, bool check, bool as_json) {
    const dtspan::DTree t = load_tree(tree_path);
    const dtspan::Formula f = dtspan::to_formula(t);
    bool equal = true;
    if (check) {
        dtspan::ensure_enumerable(t.num_vars(), "formula --check");
        const std::uint32_t total = 1u << t.num_vars();
        for (std::uint32_t m = 0; m < total && equal; ++m) {
            std::vector<std::uint8_t> x(t.num_vars());
            for (int j = 0; j < t.num_vars(); ++j) x[j] = (m >> j) & 1u;
            const auto& nd = t.node(t.eval_leaf_index(x));
            const bool tree_out = nd.out && *nd.out == "1";
            equal = dtspan::formula_eval(f, x) == tree_out;
        }
    }
    const int size = dtspan::formula_size(f);
    const int cap = 5 * t.size();
    if (as_json) {
        json doc{{"formula_size", size}, {"size_cap", cap}, {"within_cap", size <= cap}};
        if (check) doc["equivalent"] = equal;
        std::cout << doc.dump() << "\n";
    } else {
        std::cout << "formula size: " << size << " (cap " << cap << ")\n";
        if (check) std::cout << "equivalent: " << (equal ? "yes" : "NO") << "\n";
    }
    if (size > cap || (check && !equal)) return kExitVerifyFail;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision-tree rank, weight optimization, span program and "
                 "adversary verification, and AND-OR query games"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    GenArgs gen;
    CLI::App* cgen = app.add_subcommand("gen", "generate a tree document");
    cgen->add_option("kind", gen.kind, "or-list|and-chain|parity|complete|spine|random")
        ->required();
    cgen->add_option("--n", gen.n, "variable count");
    cgen->add_option("--depth", gen.depth, "depth (complete)");
    cgen->add_option("--budget", gen.budget, "node budget (random)");
    cgen->add_option("--seed", gen.seed, "seed (random)");
    cgen->add_option("-o,--out", gen.out, "output file (default stdout)");

    std::string tree_path = "-";
    CLI::App* crank = app.add_subcommand("rank", "tree rank");
    crank->add_option("tree", tree_path, "tree file or -");

    std::string opt_tree = "-";
    CLI::App* copt = app.add_subcommand("opt", "optimal program value");
    copt->add_option("tree", opt_tree, "tree file or -");

    std::string w_tree = "-";
    std::string scheme = "canonical";
    std::string w_out;
    CLI::App* cweights = app.add_subcommand("weights", "closed-form weight assignment");
    cweights->add_option("tree", w_tree, "tree file or -");
    cweights->add_option("--scheme", scheme, "canonical|appendix-b");
    cweights->add_option("-o,--out", w_out, "output file (default stdout)");

    std::string o_tree = "-";
    std::uint64_t o_seed = 1;
    double o_tol = 1e-2;
    int jobs = 1;
    std::string o_out;
    CLI::App* coracle = app.add_subcommand("oracle", "numeric weight optimization");
    coracle->add_option("tree", o_tree, "tree file or -");
    coracle->add_option("--seed", o_seed, "restart seed");
    coracle->add_option("--tol", o_tol, "relative tolerance (>= 1e-4)");
    coracle->add_option("--jobs", jobs, "parallel restarts");
    coracle->add_option("-o,--out", o_out, "output file (default stdout)");

    CLI::App* cverify = app.add_subcommand("verify", "verify constructions");
    cverify->require_subcommand(1);
    std::string vs_tree, vs_weights, vs_input;
    bool vs_all = false;
    int v_jobs = 1;
    CLI::App* cvspan = cverify->add_subcommand("span", "span program conditions");
    cvspan->add_option("tree", vs_tree)->required();
    cvspan->add_option("weights", vs_weights)->required();
    cvspan->add_option("--input", vs_input, "single input as bits, x_0 first");
    cvspan->add_flag("--all", vs_all, "all inputs (default)");
    cvspan->add_option("--jobs", v_jobs, "parallel verification");
    std::string vd_tree, vd_weights;
    int vd_max_n = 12;
    CLI::App* cvdual = cverify->add_subcommand("dual", "dual adversary feasibility");
    cvdual->add_option("tree", vd_tree)->required();
    cvdual->add_option("weights", vd_weights)->required();
    cvdual->add_option("--max-n", vd_max_n, "pairwise check cap");
    cvdual->add_option("--jobs", v_jobs, "parallel verification");

    std::string r_tree = "-";
    std::string r_weights;
    dtspan::ReportOptions ropts;
    CLI::App* creport = app.add_subcommand("report", "full measure + verification report");
    creport->add_option("tree", r_tree, "tree file or -");
    creport->add_option("--weights", r_weights, "extra weighting from a file");
    creport->add_flag("--oracle", ropts.with_oracle, "add the numeric oracle value");
    creport->add_option("--seed", ropts.oracle_seed, "oracle seed");
    creport->add_option("--tol", ropts.oracle_tol, "oracle tolerance");
    creport->add_option("--max-n", ropts.verify_max_n, "verification cap on n");
    creport->add_option("--jobs", ropts.jobs, "parallel verification");

    std::string andor_what = "measures";
    int andor_depth = 2;
    CLI::App* candor = app.add_subcommand("andor", "alternating formula tree measures");
    candor->add_option("what", andor_what, "measures|rank");
    candor->add_option("--depth", andor_depth, "tree depth")->required();

    GameArgs game;
    CLI::App* cgame = app.add_subcommand("game", "query game on the alternating tree");
    cgame->add_option("--depth", game.depth, "tree depth")->required();
    cgame->add_option("--prover", game.prover, "paper|random|human|exhaustive");
    cgame->add_option("--delayer", game.delayer, "paper|random|human|exhaustive");
    cgame->add_option("--seed", game.seed, "seed for random policies");
    cgame->add_flag("--trace", game.trace, "print each round");
    cgame->add_option("--moves", game.moves_file, "scripted moves for human policies");

    int fr_n = 0;
    std::string fr_table;
    CLI::App* cfr = app.add_subcommand("func-rank", "rank of a truth table");
    cfr->add_option("--n", fr_n, "arity")->required();
    cfr->add_option("--table", fr_table, "2^n-bit table in hex")->required();

    std::string f_tree = "-";
    bool f_check = false;
    CLI::App* cformula = app.add_subcommand("formula", "tree to formula conversion");
    cformula->add_option("tree", f_tree, "tree file or -");
    cformula->add_flag("--check", f_check, "verify size bound and equivalence");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cgen->parsed()) return run_gen(gen);
        if (crank->parsed()) return run_rank(tree_path, as_json);
        if (copt->parsed()) return run_opt(opt_tree, as_json);
        if (cweights->parsed()) return run_weights(w_tree, scheme, w_out);
        if (coracle->parsed()) return run_oracle(o_tree, o_seed, o_tol, jobs, o_out, as_json);
        if (cverify->parsed()) {
            if (cvspan->parsed()) return run_verify_span(vs_tree, vs_weights, vs_input, vs_all, v_jobs);
            if (cvdual->parsed()) return run_verify_dual(vd_tree, vd_weights, vd_max_n, v_jobs);
        }
        if (creport->parsed()) return run_report(r_tree, ropts, r_weights, as_json);
        if (candor->parsed()) return run_andor(andor_what, andor_depth, as_json);
        if (cgame->parsed()) {
            game.as_json = as_json;
            return run_game(game);
        }
        if (cfr->parsed()) return run_func_rank(fr_n, fr_table, as_json);
        if (cformula->parsed()) return run_formula(f_tree, f_check, as_json);
    } catch (const dtspan::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const dtspan::cap_exceeded_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
