#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dtspan/errors.hpp"
#include "dtspan/rng.hpp"

namespace dtspan {

enum class Gate { And, Or, Leaf };

// Multi-fan-out AND-OR formula tree over distinct variables, or the empty
// tree carrying a constant bit. Update and contract return new trees; values
// are cheap to copy at game scale.
class AndOrTree {
public:
    // Empty tree computing the given constant.
    static AndOrTree constant(int bit);
    static AndOrTree leaf(int var);
    static AndOrTree gate(Gate g, std::vector<AndOrTree> children);
    // Complete alternating tree of the given depth with an OR at the top and
    // 2^depth leaves querying x_0..x_{2^depth - 1}.
    static AndOrTree complete(int depth);

    bool empty() const { return root_ < 0; }
    int constant_bit() const;  // only when empty
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int leaf_count() const;
    bool has_var(int var) const;
    // Leaf variables in left-to-right order.
    std::vector<int> leaf_vars() const;

    Gate label(int node) const { return nodes_[node].g; }
    int var_of(int node) const { return nodes_[node].var; }
    const std::vector<int>& children(int node) const { return nodes_[node].kids; }
    int root() const { return root_; }
    int parent(int node) const { return parent_[node]; }
    // Nearest ancestor with at least two children; -1 when none exists.
    int pparent(int node) const;

    // One variable fixed: a missing variable leaves the tree unchanged, the
    // last leaf empties it, a neutral answer deletes the leaf, an absorbing
    // answer deletes the subtree at the leaf's parent.
    AndOrTree update(int var, int bit) const;
    // Reduced form: no unary gates, no child repeating its parent's gate.
    AndOrTree contract() const;
    bool is_reduced() const;

    bool eval(const std::vector<std::uint8_t>& x) const;

    // Canonical serialization; equal trees produce equal strings.
    std::string key() const;

private:
    struct GNode {
        Gate g = Gate::Leaf;
        int var = -1;
        std::vector<int> kids;
    };

    void rebuild_parents();
    // Preorder rebuild of the subtree at new_root using overriding child
    // lists on this tree's indices. Invariants are preserved by construction.
    AndOrTree rebuilt_from(int new_root, const std::vector<std::vector<int>>& kids) const;

    std::vector<GNode> nodes_;
    std::vector<int> parent_;
    int root_ = -1;
    int const_bit_ = 0;
};

// Progress measures on a (possibly non-reduced) tree. All values are exact
// integers.
struct AndOrMeasures {
    std::vector<long long> c;   // per node
    std::vector<long long> d;   // per node
    std::vector<char> marked;   // per node
    long long P = 0;
    long long S = 0;
};

AndOrMeasures measures(const AndOrTree& t);

enum class DelayerDecision { Answer0, Answer1, Defer };

// The scripted Delayer reply for a query of variable var. A variable with no
// leaf in the tree is answered 0 without scoring.
DelayerDecision delayer_move(const AndOrTree& t, int var);
// The scripted Prover query: the leftmost leaf's variable.
int prover_move(const AndOrTree& t);

class ProverPolicy {
public:
    virtual ~ProverPolicy() = default;
    virtual int choose_query(const AndOrTree& t) = 0;
    virtual int choose_defer_bit(const AndOrTree& t, int var) = 0;
};

class DelayerPolicy {
public:
    virtual ~DelayerPolicy() = default;
    virtual DelayerDecision respond(const AndOrTree& t, int var) = 0;
};

std::unique_ptr<ProverPolicy> make_paper_prover();
std::unique_ptr<ProverPolicy> make_random_prover(std::uint64_t seed);
std::unique_ptr<DelayerPolicy> make_paper_delayer();
std::unique_ptr<DelayerPolicy> make_random_delayer(std::uint64_t seed);
// Exhaustive opponents search the full game tree against a deterministic
// opposing policy; pass nullptr to assume the opponent also plays optimally.
// Both refuse trees with more than 8 leaves.
std::unique_ptr<ProverPolicy> make_exhaustive_prover(DelayerPolicy* opponent);
std::unique_ptr<DelayerPolicy> make_exhaustive_delayer(ProverPolicy* opponent);

// Search values, for checking the played transcripts.
long long min_score_vs_delayer(const AndOrTree& t, DelayerPolicy& delayer);
long long max_score_vs_prover(const AndOrTree& t, ProverPolicy& prover);
long long minimax_game_value(const AndOrTree& t);

struct GameRound {
    int var = -1;
    DelayerDecision decision = DelayerDecision::Answer0;
    int bit = 0;
    long long score_after = 0;
    long long p_after = 0;
    long long s_after = 0;
};

struct GameTranscript {
    long long initial_p = 0;
    long long initial_s = 0;
    std::vector<GameRound> rounds;
    long long final_score = 0;
};

// Alternates prover query / delayer reply / update / contract until the tree
// is empty. t0 must be reduced. on_round, when set, sees the tree after each
// completed round.
using RoundObserver = std::function<void(const AndOrTree&, const GameRound&)>;
GameTranscript play(const AndOrTree& t0, ProverPolicy& prover, DelayerPolicy& delayer,
                    const RoundObserver& on_round = {});

}  // namespace dtspan
