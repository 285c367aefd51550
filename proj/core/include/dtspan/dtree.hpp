#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtspan/errors.hpp"

namespace dtspan {

using NodeId = long long;

// An edge is named by its parent node and the query answer it corresponds to.
struct EdgeId {
    NodeId parent = 0;
    int bit = 0;

    friend bool operator==(const EdgeId&, const EdgeId&) = default;
    friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct EdgeIdHash {
    std::size_t operator()(const EdgeId& e) const {
        return std::hash<long long>()(e.parent * 2 + e.bit);
    }
};

// Root-to-leaf path, stored as dense node indices (root first, leaf last).
struct Path {
    std::vector<int> nodes;

    int leaf() const { return nodes.back(); }
    // Number of internal nodes on the path (== number of edges).
    int length() const { return static_cast<int>(nodes.size()) - 1; }
};

// Rooted binary decision tree. Internal nodes query a variable and branch on
// its value; leaves carry an opaque identity label and an optional output
// label used for relation checks. Immutable after construction; all methods
// are const and safe to call concurrently.
class DTree {
public:
    struct Node {
        NodeId id = 0;
        bool leaf = false;
        // Internal fields.
        int var = -1;
        NodeId zero = -1;
        NodeId one = -1;
        // Leaf fields.
        std::string label;
        std::optional<std::string> out;
    };

    static Node internal(NodeId id, int var, NodeId zero, NodeId one) {
        Node nd;
        nd.id = id;
        nd.var = var;
        nd.zero = zero;
        nd.one = one;
        return nd;
    }
    static Node leaf(NodeId id, std::string label, std::optional<std::string> out = std::nullopt) {
        Node nd;
        nd.id = id;
        nd.leaf = true;
        nd.label = std::move(label);
        nd.out = std::move(out);
        return nd;
    }

    // Validates all structural invariants; throws validation_error otherwise.
    DTree(int n, NodeId root, std::vector<Node> nodes);

    static DTree parse(const std::string& text);
    std::string serialize() const;

    int num_vars() const { return n_; }
    int count() const { return static_cast<int>(nodes_.size()); }
    int size() const { return count(); }
    int depth() const { return depth_; }
    int leaf_count() const { return leaf_count_; }
    int internal_count() const { return count() - leaf_count_; }

    NodeId root_id() const { return nodes_[root_].id; }
    int root_index() const { return root_; }

    // Dense indices run 0..count()-1 in ascending id order.
    const Node& node(int idx) const { return nodes_[idx]; }
    int index_of(NodeId id) const;
    bool has_node(NodeId id) const { return index_.count(id) != 0; }
    int child_index(int idx, int bit) const { return children_[idx][bit]; }
    int parent_index(int idx) const { return parent_[idx]; }
    int parent_bit(int idx) const { return parent_bit_[idx]; }

    // Dense indices in an order where children precede their parent.
    const std::vector<int>& postorder() const { return postorder_; }

    EdgeId edge(int internal_idx, int bit) const { return EdgeId{nodes_[internal_idx].id, bit}; }
    // All edges in canonical (parent id, bit) order.
    std::vector<EdgeId> edge_ids() const;
    int edge_count() const { return count() - 1; }

    // Leaf reached on input x; |x| must equal num_vars().
    NodeId eval_leaf(const std::vector<std::uint8_t>& x) const;
    int eval_leaf_index(const std::vector<std::uint8_t>& x) const;
    // Fast variant for enumeration; bit j of mask is x_j. Requires n <= 32.
    int eval_leaf_index(std::uint32_t mask) const;

    std::vector<Path> paths() const;
    // Edges with exactly one endpoint on p: the sibling edge of every
    // internal node of p.
    std::vector<EdgeId> deviating_edges(const Path& p) const;

private:
    void validate_and_index();

    int n_ = 0;
    int root_ = 0;
    int depth_ = 0;
    int leaf_count_ = 0;
    std::vector<Node> nodes_;  // ascending id
    std::vector<std::array<int, 2>> children_;
    std::vector<int> parent_;
    std::vector<int> parent_bit_;
    std::vector<int> postorder_;
    std::unordered_map<NodeId, int> index_;
};

// Distribution over deterministic trees on a common variable set.
struct RandomizedDTree {
    struct Entry {
        double prob;
        DTree tree;
    };
    std::vector<Entry> support;

    // Throws validation_error unless probabilities lie in (0,1] and sum to 1
    // within 1e-12, and all trees share one n.
    void validate() const;
    int num_vars() const { return support.front().tree.num_vars(); }
};

// Maximum node count over the support.
int rdtsize(const RandomizedDTree& r);

// Relation f as an explicit table: x -> set of allowed output labels.
// Inputs absent from the map lie outside the domain.
struct RelationTable {
    int n = 0;
    std::unordered_map<std::uint32_t, std::set<std::string>> allowed;
};

struct RelationReport {
    bool pass = true;
    long long inputs_checked = 0;
    double worst_error = 0.0;  // output-error probability (deterministic: 0 or 1)
    std::uint32_t worst_input = 0;
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
};

RelationReport verify_relation(const DTree& t, const RelationTable& rel);
RelationReport verify_relation(const RandomizedDTree& r, const RelationTable& rel);

// Generators. All produced trees satisfy every DTree invariant.
DTree gen_or_list(int n);
DTree gen_and_chain(int n);
DTree gen_parity(int n);
DTree gen_complete(int depth);
// Length-n query chain with a complete subtree of n leaves hanging off the
// root; n must be a power of two >= 2.
DTree gen_spine(int n);
// Seed-deterministic random tree with at most node_budget nodes over n
// variables; leaves get random 0/1 output labels.
DTree gen_random(std::uint64_t seed, int node_budget, int n);

}  // namespace dtspan
