#include "dtspan/andor.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace dtspan {

AndOrTree AndOrTree::constant(int bit) {
    AndOrTree t;
    t.const_bit_ = bit ? 1 : 0;
    return t;
}

AndOrTree AndOrTree::leaf(int var) {
    if (var < 0) throw validation_error("leaf variable must be non-negative");
    AndOrTree t;
    t.nodes_.push_back({Gate::Leaf, var, {}});
    t.root_ = 0;
    t.rebuild_parents();
    return t;
}

AndOrTree AndOrTree::gate(Gate g, std::vector<AndOrTree> children) {
    if (g == Gate::Leaf) throw validation_error("gate label must be And or Or");
    if (children.empty()) throw validation_error("gate needs at least one child");
    AndOrTree t;
    t.nodes_.push_back({g, -1, {}});
    t.root_ = 0;
    for (AndOrTree& ch : children) {
        if (ch.empty()) throw validation_error("gate child must be non-empty");
        const int offset = t.node_count();
        for (const GNode& nd : ch.nodes_) {
            GNode copy = nd;
            for (int& k : copy.kids) k += offset;
            t.nodes_.push_back(std::move(copy));
        }
        t.nodes_[0].kids.push_back(offset + ch.root_);
    }
    // Reject duplicated variables across the merged leaves.
    std::vector<int> vars = t.leaf_vars();
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end()) {
        throw validation_error("two leaves share a variable index");
    }
    t.rebuild_parents();
    return t;
}

AndOrTree AndOrTree::complete(int depth) {
    if (depth < 0) throw validation_error("depth must be non-negative");
    int next_var = 0;
    std::function<AndOrTree(int, Gate)> build = [&](int level, Gate g) -> AndOrTree {
        if (level == depth) return leaf(next_var++);
        const Gate child_gate = g == Gate::Or ? Gate::And : Gate::Or;
        std::vector<AndOrTree> kids;
        kids.push_back(build(level + 1, child_gate));
        kids.push_back(build(level + 1, child_gate));
        return gate(g, std::move(kids));
    };
    return build(0, Gate::Or);
}

int AndOrTree::constant_bit() const {
    if (!empty()) throw validation_error("constant_bit on a non-empty tree");
    return const_bit_;
}

void AndOrTree::rebuild_parents() {
    parent_.assign(nodes_.size(), -1);
    for (int i = 0; i < node_count(); ++i) {
        for (int k : nodes_[i].kids) parent_[k] = i;
    }
}

int AndOrTree::leaf_count() const {
    int c = 0;
    for (const GNode& nd : nodes_) c += nd.g == Gate::Leaf ? 1 : 0;
    return c;
}

bool AndOrTree::has_var(int var) const {
    for (const GNode& nd : nodes_) {
        if (nd.g == Gate::Leaf && nd.var == var) return true;
    }
    return false;
}

std::vector<int> AndOrTree::leaf_vars() const {
    std::vector<int> out;
    if (empty()) return out;
    std::function<void(int)> walk = [&](int v) {
        if (nodes_[v].g == Gate::Leaf) {
            out.push_back(nodes_[v].var);
            return;
        }
        for (int k : nodes_[v].kids) walk(k);
    };
    walk(root_);
    return out;
}

int AndOrTree::pparent(int node) const {
    int p = parent_[node];
    while (p >= 0 && nodes_[p].kids.size() < 2) p = parent_[p];
    return p;
}

AndOrTree AndOrTree::rebuilt_from(int new_root, const std::vector<std::vector<int>>& kids) const {
    AndOrTree out;
    out.const_bit_ = const_bit_;
    std::function<int(int)> copy = [&](int v) -> int {
        const int id = out.node_count();
        out.nodes_.push_back({nodes_[v].g, nodes_[v].var, {}});
        for (int k : kids[v]) {
            const int kid = copy(k);
            out.nodes_[id].kids.push_back(kid);
        }
        return id;
    };
    out.root_ = copy(new_root);
    out.rebuild_parents();
    return out;
}

AndOrTree AndOrTree::update(int var, int bit) const {
    if (empty()) throw validation_error("update on the empty tree");
    int leaf_idx = -1;
    for (int i = 0; i < node_count(); ++i) {
        if (nodes_[i].g == Gate::Leaf && nodes_[i].var == var) {
            leaf_idx = i;
            break;
        }
    }
    if (leaf_idx < 0) return *this;
    if (leaf_count() == 1) return constant(bit);

    std::vector<std::vector<int>> kids(nodes_.size());
    for (int i = 0; i < node_count(); ++i) kids[i] = nodes_[i].kids;

    const int p = parent_[leaf_idx];
    const bool neutral = (bit == 1 && nodes_[p].g == Gate::And) ||
                         (bit == 0 && nodes_[p].g == Gate::Or);
    if (neutral) {
        kids[p].erase(std::find(kids[p].begin(), kids[p].end(), leaf_idx));
    } else {
        // The answer determines the parent gate; drop its whole subtree.
        if (p == root_) return constant(bit);
        const int gp = parent_[p];
        kids[gp].erase(std::find(kids[gp].begin(), kids[gp].end(), p));
    }
    return rebuilt_from(root_, kids);
}

AndOrTree AndOrTree::contract() const {
    if (empty()) return *this;
    std::vector<std::vector<int>> kids(nodes_.size());
    for (int i = 0; i < node_count(); ++i) kids[i] = nodes_[i].kids;
    std::vector<int> parent(parent_);
    int root = root_;

    // Unary gates: promote the only child into the gate's slot.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < node_count(); ++v) {
            if (nodes_[v].g == Gate::Leaf || kids[v].size() != 1) continue;
            // Skip detached nodes: their parent link was cleared to -2.
            if (v != root && parent[v] < 0) continue;
            const int child = kids[v][0];
            if (v == root) {
                root = child;
                parent[child] = -1;
            } else {
                auto& pk = kids[parent[v]];
                *std::find(pk.begin(), pk.end(), v) = child;
                parent[child] = parent[v];
            }
            parent[v] = -2;  // detached
            kids[v].clear();
            changed = true;
        }
    }

    // Same-label edges: splice the child's children in place of the child.
    changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < node_count(); ++a) {
            if (nodes_[a].g == Gate::Leaf || parent[a] < 0) continue;
            const int ap = parent[a];
            if (nodes_[ap].g != nodes_[a].g) continue;
            auto& pk = kids[ap];
            auto pos = std::find(pk.begin(), pk.end(), a);
            pos = pk.erase(pos);
            pk.insert(pos, kids[a].begin(), kids[a].end());
            for (int k : kids[a]) parent[k] = ap;
            parent[a] = -2;
            kids[a].clear();
            changed = true;
        }
    }
    return rebuilt_from(root, kids);
}

bool AndOrTree::is_reduced() const {
    if (empty()) return true;
    for (int i = 0; i < node_count(); ++i) {
        if (nodes_[i].g == Gate::Leaf) continue;
        if (nodes_[i].kids.size() < 2) return false;
        for (int k : nodes_[i].kids) {
            if (nodes_[k].g == nodes_[i].g) return false;
        }
    }
    return true;
}

bool AndOrTree::eval(const std::vector<std::uint8_t>& x) const {
    if (empty()) return const_bit_ != 0;
    std::function<bool(int)> rec = [&](int v) -> bool {
        const GNode& nd = nodes_[v];
        if (nd.g == Gate::Leaf) {
            if (nd.var >= static_cast<int>(x.size())) {
                throw validation_error("assignment shorter than leaf variable index");
            }
            return x[nd.var] != 0;
        }
        if (nd.g == Gate::And) {
            for (int k : nd.kids) {
                if (!rec(k)) return false;
            }
            return true;
        }
        for (int k : nd.kids) {
            if (rec(k)) return true;
        }
        return false;
    };
    return rec(root_);
}

std::string AndOrTree::key() const {
    if (empty()) return const_bit_ ? "=1" : "=0";
    std::ostringstream os;
    std::function<void(int)> rec = [&](int v) {
        const GNode& nd = nodes_[v];
        if (nd.g == Gate::Leaf) {
            os << 'x' << nd.var;
            return;
        }
        os << (nd.g == Gate::And ? "(&" : "(|");
        for (int k : nd.kids) {
            os << ' ';
            rec(k);
        }
        os << ')';
    };
    rec(root_);
    return os.str();
}

AndOrMeasures measures(const AndOrTree& t) {
    AndOrMeasures m;
    if (t.empty()) return m;
    const int count = t.node_count();
    m.c.assign(count, 0);
    m.d.assign(count, 0);
    m.marked.assign(count, 0);

    std::function<void(int)> rec = [&](int v) {
        for (int k : t.children(v)) rec(k);
        const Gate g = t.label(v);
        const auto& kids = t.children(v);
        // Cost toward the Delayer measure: leaves free, AND gates one unit,
        // OR gates additive.
        if (g == Gate::Leaf) {
            m.c[v] = 0;
        } else if (kids.size() == 1) {
            m.c[v] = m.c[kids[0]];
        } else if (g == Gate::And) {
            m.c[v] = 1;
        } else {
            long long s = 0;
            for (int k : kids) s += m.c[k];
            m.c[v] = s;
        }
        // Cost toward the Prover measure: leaves cost one unit.
        if (g == Gate::Or) {
            long long s = 0;
            for (int k : kids) s += m.d[k];
            m.d[v] = s;
        } else if (kids.size() == 1) {
            m.d[v] = m.d[kids[0]];
        } else {
            m.d[v] = 1;
        }
    };
    rec(t.root());

    m.P = 1;
    m.S = 1;
    for (int v = 0; v < count; ++v) {
        if (t.label(v) != Gate::Or || t.children(v).size() < 2) continue;
        const int pp = t.pparent(v);
        if (pp >= 0 && t.label(pp) != Gate::And) continue;
        m.marked[v] = 1;
        m.P += std::max<long long>(m.c[v] - 1, 0);
        m.S += std::max<long long>(m.d[v] - 1, 0);
    }
    return m;
}

DelayerDecision delayer_move(const AndOrTree& t, int var) {
    if (t.empty()) throw validation_error("delayer_move on the empty tree");
    if (!t.has_var(var)) return DelayerDecision::Answer0;  // no-op query
    int leaf = -1;
    for (int i = 0; i < t.node_count(); ++i) {
        if (t.label(i) == Gate::Leaf && t.var_of(i) == var) {
            leaf = i;
            break;
        }
    }
    if (t.leaf_count() == 1) return DelayerDecision::Defer;
    const int v = t.parent(leaf);
    if (t.label(v) == Gate::Or) return DelayerDecision::Answer0;
    if (t.children(v).size() > 2) return DelayerDecision::Answer1;
    if (v == t.root()) return DelayerDecision::Answer1;
    int m = -1;
    for (int k : t.children(v)) {
        if (k != leaf) m = k;
    }
    if (t.label(m) != Gate::Leaf) {
        for (int k : t.children(m)) {
            if (t.label(k) == Gate::And) return DelayerDecision::Answer1;
        }
    }
    const int u = t.parent(v);
    bool all_leaves = true;
    for (int k : t.children(u)) {
        if (k != v && t.label(k) != Gate::Leaf) all_leaves = false;
    }
    if (all_leaves) return DelayerDecision::Answer1;
    return DelayerDecision::Defer;
}

int prover_move(const AndOrTree& t) {
    if (t.empty()) throw validation_error("prover_move on the empty tree");
    int v = t.root();
    while (t.label(v) != Gate::Leaf) v = t.children(v)[0];
    return t.var_of(v);
}

namespace {

class PaperProver : public ProverPolicy {
public:
    int choose_query(const AndOrTree& t) override { return prover_move(t); }
    int choose_defer_bit(const AndOrTree&, int) override { return 0; }
};

class RandomProver : public ProverPolicy {
public:
    explicit RandomProver(std::uint64_t seed) : rng_(seed) {}
    int choose_query(const AndOrTree& t) override {
        const std::vector<int> vars = t.leaf_vars();
        return vars[rng_.below(vars.size())];
    }
    int choose_defer_bit(const AndOrTree&, int) override { return rng_.coin(); }

private:
    Rng rng_;
};

class PaperDelayer : public DelayerPolicy {
public:
    DelayerDecision respond(const AndOrTree& t, int var) override {
        return delayer_move(t, var);
    }
};

class RandomDelayer : public DelayerPolicy {
public:
    explicit RandomDelayer(std::uint64_t seed) : rng_(seed) {}
    DelayerDecision respond(const AndOrTree& t, int var) override {
        if (!t.has_var(var)) return DelayerDecision::Answer0;
        switch (rng_.below(3)) {
            case 0: return DelayerDecision::Answer0;
            case 1: return DelayerDecision::Answer1;
            default: return DelayerDecision::Defer;
        }
    }

private:
    Rng rng_;
};

using Memo = std::unordered_map<std::string, long long>;

AndOrTree step(const AndOrTree& t, int var, int bit) {
    return t.update(var, bit).contract();
}

std::vector<int> sorted_vars(const AndOrTree& t) {
    std::vector<int> vars = t.leaf_vars();
    std::sort(vars.begin(), vars.end());
    return vars;
}

long long minimax_rec(const AndOrTree& t, Memo& memo) {
    if (t.empty()) return 0;
    const std::string key = t.key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long best = std::numeric_limits<long long>::max();
    for (int var : sorted_vars(t)) {
        const long long v0 = minimax_rec(step(t, var, 0), memo);
        const long long v1 = minimax_rec(step(t, var, 1), memo);
        const long long reply = std::max({v0, v1, 1 + std::min(v0, v1)});
        best = std::min(best, reply);
    }
    memo.emplace(key, best);
    return best;
}

long long min_vs_delayer_rec(const AndOrTree& t, DelayerPolicy& delayer, Memo& memo) {
    if (t.empty()) return 0;
    const std::string key = t.key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long best = std::numeric_limits<long long>::max();
    for (int var : sorted_vars(t)) {
        const DelayerDecision dec = delayer.respond(t, var);
        long long val;
        if (dec == DelayerDecision::Defer) {
            val = 1 + std::min(min_vs_delayer_rec(step(t, var, 0), delayer, memo),
                               min_vs_delayer_rec(step(t, var, 1), delayer, memo));
        } else {
            val = min_vs_delayer_rec(step(t, var, dec == DelayerDecision::Answer1 ? 1 : 0),
                                     delayer, memo);
        }
        best = std::min(best, val);
    }
    memo.emplace(key, best);
    return best;
}

long long max_vs_prover_rec(const AndOrTree& t, ProverPolicy& prover, Memo& memo) {
    if (t.empty()) return 0;
    const std::string key = t.key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const int var = prover.choose_query(t);
    const long long v0 = max_vs_prover_rec(step(t, var, 0), prover, memo);
    const long long v1 = max_vs_prover_rec(step(t, var, 1), prover, memo);
    const int db = prover.choose_defer_bit(t, var);
    const long long vd = 1 + max_vs_prover_rec(step(t, var, db), prover, memo);
    const long long best = std::max({v0, v1, vd});
    memo.emplace(key, best);
    return best;
}

void check_exhaustive_cap(const AndOrTree& t) {
    if (t.leaf_count() > 8) {
        throw cap_exceeded_error("exhaustive game search refused beyond 8 leaves");
    }
}

class ExhaustiveProver : public ProverPolicy {
public:
    explicit ExhaustiveProver(DelayerPolicy* opponent) : opponent_(opponent) {}

    int choose_query(const AndOrTree& t) override {
        check_exhaustive_cap(t);
        long long best = std::numeric_limits<long long>::max();
        int best_var = -1;
        for (int var : sorted_vars(t)) {
            const long long val = value_after_query(t, var);
            if (val < best) {
                best = val;
                best_var = var;
            }
        }
        return best_var;
    }

    int choose_defer_bit(const AndOrTree& t, int var) override {
        const long long v0 = continuation(step(t, var, 0));
        const long long v1 = continuation(step(t, var, 1));
        return v0 <= v1 ? 0 : 1;
    }

private:
    long long continuation(const AndOrTree& t) {
        return opponent_ ? min_vs_delayer_rec(t, *opponent_, memo_) : minimax_rec(t, memo_);
    }
    long long value_after_query(const AndOrTree& t, int var) {
        if (opponent_ != nullptr) {
            const DelayerDecision dec = opponent_->respond(t, var);
            if (dec == DelayerDecision::Defer) {
                return 1 + std::min(continuation(step(t, var, 0)), continuation(step(t, var, 1)));
            }
            return continuation(step(t, var, dec == DelayerDecision::Answer1 ? 1 : 0));
        }
        const long long v0 = continuation(step(t, var, 0));
        const long long v1 = continuation(step(t, var, 1));
        return std::max({v0, v1, 1 + std::min(v0, v1)});
    }

    DelayerPolicy* opponent_;
    Memo memo_;
};

class ExhaustiveDelayer : public DelayerPolicy {
public:
    explicit ExhaustiveDelayer(ProverPolicy* opponent) : opponent_(opponent) {}

    DelayerDecision respond(const AndOrTree& t, int var) override {
        check_exhaustive_cap(t);
        if (!t.has_var(var)) return DelayerDecision::Answer0;
        const long long a0 = continuation(step(t, var, 0));
        const long long a1 = continuation(step(t, var, 1));
        long long defer;
        if (opponent_ != nullptr) {
            defer = 1 + continuation(step(t, var, opponent_->choose_defer_bit(t, var)));
        } else {
            defer = 1 + std::min(a0, a1);
        }
        if (defer >= a0 && defer >= a1) return DelayerDecision::Defer;
        if (a0 >= a1) return DelayerDecision::Answer0;
        return DelayerDecision::Answer1;
    }

private:
    long long continuation(const AndOrTree& t) {
        return opponent_ ? max_vs_prover_rec(t, *opponent_, memo_) : minimax_rec(t, memo_);
    }

    ProverPolicy* opponent_;
    Memo memo_;
};

}  // namespace

std::unique_ptr<ProverPolicy> make_paper_prover() { return std::make_unique<PaperProver>(); }
std::unique_ptr<ProverPolicy> make_random_prover(std::uint64_t seed) {
    return std::make_unique<RandomProver>(seed);
}
std::unique_ptr<DelayerPolicy> make_paper_delayer() { return std::make_unique<PaperDelayer>(); }
std::unique_ptr<DelayerPolicy> make_random_delayer(std::uint64_t seed) {
    return std::make_unique<RandomDelayer>(seed);
}
std::unique_ptr<ProverPolicy> make_exhaustive_prover(DelayerPolicy* opponent) {
    return std::make_unique<ExhaustiveProver>(opponent);
}
std::unique_ptr<DelayerPolicy> make_exhaustive_delayer(ProverPolicy* opponent) {
    return std::make_unique<ExhaustiveDelayer>(opponent);
}

long long min_score_vs_delayer(const AndOrTree& t, DelayerPolicy& delayer) {
    check_exhaustive_cap(t);
    Memo memo;
    return min_vs_delayer_rec(t, delayer, memo);
}

long long max_score_vs_prover(const AndOrTree& t, ProverPolicy& prover) {
    check_exhaustive_cap(t);
    Memo memo;
    return max_vs_prover_rec(t, prover, memo);
}

long long minimax_game_value(const AndOrTree& t) {
    check_exhaustive_cap(t);
    Memo memo;
    return minimax_rec(t, memo);
}

GameTranscript play(const AndOrTree& t0, ProverPolicy& prover, DelayerPolicy& delayer,
                    const RoundObserver& on_round) {
    if (!t0.is_reduced()) throw validation_error("play requires a reduced tree");
    GameTranscript out;
    {
        const AndOrMeasures m0 = measures(t0);
        out.initial_p = m0.P;
        out.initial_s = m0.S;
    }
    AndOrTree t = t0;
    long long score = 0;
    while (!t.empty()) {
        GameRound round;
        round.var = prover.choose_query(t);
        round.decision = delayer.respond(t, round.var);
        if (round.decision == DelayerDecision::Defer) {
            ++score;
            round.bit = prover.choose_defer_bit(t, round.var);
        } else {
            round.bit = round.decision == DelayerDecision::Answer1 ? 1 : 0;
        }
        t = step(t, round.var, round.bit);
        const AndOrMeasures m = measures(t);
        round.score_after = score;
        round.p_after = m.P;
        round.s_after = m.S;
        out.rounds.push_back(round);
        if (on_round) on_round(t, round);
    }
    out.final_score = score;
    return out;
}

}  // namespace dtspan
