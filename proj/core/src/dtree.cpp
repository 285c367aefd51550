#include "dtspan/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dtspan/rng.hpp"

namespace dtspan {

using json = nlohmann::json;

void ensure_enumerable(int n, const char* what) {
    if (n > kMaxEnumerationVars) {
        std::ostringstream os;
        os << what << ": exhaustive enumeration refused for n = " << n << " (cap "
           << kMaxEnumerationVars << ")";
        throw cap_exceeded_error(os.str());
    }
}

DTree::DTree(int n, NodeId root, std::vector<Node> nodes) : n_(n), nodes_(std::move(nodes)) {
    if (n_ <= 0) throw validation_error("number of variables must be positive");
    if (nodes_.empty()) throw validation_error("tree has no nodes");
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& nd = nodes_[i];
        if (nd.id < 0) throw validation_error("node ids must be non-negative");
        if (!index_.emplace(nd.id, static_cast<int>(i)).second) {
            throw validation_error("duplicate node-id " + std::to_string(nd.id));
        }
    }
    auto it = index_.find(root);
    if (it == index_.end()) throw validation_error("root id not present");
    root_ = it->second;
    validate_and_index();
}

void DTree::validate_and_index() {
    const int m = count();
    children_.assign(m, {-1, -1});
    parent_.assign(m, -1);
    parent_bit_.assign(m, -1);

    std::set<std::string> labels;
    for (int i = 0; i < m; ++i) {
        const Node& nd = nodes_[i];
        if (nd.leaf) {
            if (!labels.insert(nd.label).second) {
                throw validation_error("duplicate leaf label \"" + nd.label + "\"");
            }
            continue;
        }
        if (nd.var < 0 || nd.var >= n_) {
            throw validation_error("variable index " + std::to_string(nd.var) +
                                   " out of range at node " + std::to_string(nd.id));
        }
        for (int b = 0; b < 2; ++b) {
            const NodeId cid = b == 0 ? nd.zero : nd.one;
            auto it = index_.find(cid);
            if (it == index_.end()) {
                throw validation_error("dangling child reference " + std::to_string(cid) +
                                       " at node " + std::to_string(nd.id));
            }
            const int c = it->second;
            if (c == root_) throw validation_error("root has a parent");
            if (parent_[c] != -1) {
                throw validation_error("node " + std::to_string(cid) + " has multiple parents");
            }
            children_[i][b] = c;
            parent_[c] = i;
            parent_bit_[c] = b;
        }
    }

    // Iterative DFS from the root: reachability, depth, per-path variable
    // uniqueness, and postorder.
    std::vector<char> seen_var(n_, 0);
    std::vector<char> visited(m, 0);
    postorder_.clear();
    postorder_.reserve(m);
    leaf_count_ = 0;
    depth_ = 0;

    struct Frame {
        int idx;
        int stage;  // 0 = enter, 1..2 = after child, 3 = exit
        int depth;
    };
    std::vector<Frame> stack;
    stack.push_back({root_, 0, 0});
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Node& nd = nodes_[f.idx];
        if (f.stage == 0) {
            if (visited[f.idx]) throw validation_error("cycle detected");
            visited[f.idx] = 1;
            if (nd.leaf) {
                ++leaf_count_;
                depth_ = std::max(depth_, f.depth);
                postorder_.push_back(f.idx);
                stack.pop_back();
                continue;
            }
            if (seen_var[nd.var]) {
                throw validation_error("repeated variable x_" + std::to_string(nd.var) +
                                       " on a path");
            }
            seen_var[nd.var] = 1;
            f.stage = 1;
            stack.push_back({children_[f.idx][0], 0, f.depth + 1});
        } else if (f.stage == 1) {
            f.stage = 2;
            stack.push_back({children_[f.idx][1], 0, f.depth + 1});
        } else {
            seen_var[nd.var] = 0;
            postorder_.push_back(f.idx);
            stack.pop_back();
        }
    }
    for (int i = 0; i < m; ++i) {
        if (!visited[i]) {
            throw validation_error("node " + std::to_string(nodes_[i].id) +
                                   " unreachable from root");
        }
    }
}

int DTree::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw validation_error("unknown node-id " + std::to_string(id));
    return it->second;
}

DTree DTree::parse(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("root") || !doc.contains("nodes") ||
        !doc["n"].is_number_integer() || !doc["nodes"].is_array()) {
        throw validation_error("malformed document: expected {n, root, nodes}");
    }
    const int n = doc["n"].get<int>();
    const NodeId root = doc["root"].get<NodeId>();
    std::vector<Node> nodes;
    for (const json& jn : doc["nodes"]) {
        if (!jn.is_object() || !jn.contains("id")) {
            throw validation_error("malformed document: node without id");
        }
        const NodeId id = jn["id"].get<NodeId>();
        const bool is_leaf = jn.contains("leaf");
        const bool is_internal = jn.contains("var");
        if (is_leaf == is_internal) {
            throw validation_error("malformed document: node " + std::to_string(id) +
                                   " must have exactly one of \"leaf\" or \"var\"");
        }
        if (is_leaf) {
            std::optional<std::string> out;
            if (jn.contains("out")) out = jn["out"].get<std::string>();
            nodes.push_back(leaf(id, jn["leaf"].get<std::string>(), std::move(out)));
        } else {
            if (!jn.contains("zero") || !jn.contains("one")) {
                throw validation_error("internal node " + std::to_string(id) +
                                       " missing a child");
            }
            nodes.push_back(internal(id, jn["var"].get<int>(), jn["zero"].get<NodeId>(),
                                     jn["one"].get<NodeId>()));
        }
    }
    return DTree(n, root, std::move(nodes));
}

std::string DTree::serialize() const {
    json doc;
    doc["n"] = n_;
    doc["root"] = root_id();
    json arr = json::array();
    for (const Node& nd : nodes_) {  // already ascending by id
        json jn;
        jn["id"] = nd.id;
        if (nd.leaf) {
            jn["leaf"] = nd.label;
            if (nd.out) jn["out"] = *nd.out;
        } else {
            jn["var"] = nd.var;
            jn["zero"] = nd.zero;
            jn["one"] = nd.one;
        }
        arr.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(arr);
    return doc.dump();
}

std::vector<EdgeId> DTree::edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(edge_count());
    for (int i = 0; i < count(); ++i) {
        if (nodes_[i].leaf) continue;
        out.push_back({nodes_[i].id, 0});
        out.push_back({nodes_[i].id, 1});
    }
    return out;  // nodes_ ascending by id, so this is canonical order
}

int DTree::eval_leaf_index(const std::vector<std::uint8_t>& x) const {
    if (static_cast<int>(x.size()) != n_) {
        throw validation_error("input length " + std::to_string(x.size()) +
                               " does not match n = " + std::to_string(n_));
    }
    int cur = root_;
    while (!nodes_[cur].leaf) cur = children_[cur][x[nodes_[cur].var] ? 1 : 0];
    return cur;
}

NodeId DTree::eval_leaf(const std::vector<std::uint8_t>& x) const {
    return nodes_[eval_leaf_index(x)].id;
}

int DTree::eval_leaf_index(std::uint32_t mask) const {
    int cur = root_;
    while (!nodes_[cur].leaf) cur = children_[cur][(mask >> nodes_[cur].var) & 1u];
    return cur;
}

std::vector<Path> DTree::paths() const {
    std::vector<Path> out;
    out.reserve(leaf_count_);
    std::vector<int> cur;
    struct Frame {
        int idx;
        int stage;
    };
    std::vector<Frame> stack{{root_, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.stage == 0) {
            cur.push_back(f.idx);
            if (nodes_[f.idx].leaf) {
                out.push_back(Path{cur});
                cur.pop_back();
                stack.pop_back();
                continue;
            }
            f.stage = 1;
            stack.push_back({children_[f.idx][0], 0});
        } else if (f.stage == 1) {
            f.stage = 2;
            stack.push_back({children_[f.idx][1], 0});
        } else {
            cur.pop_back();
            stack.pop_back();
        }
    }
    return out;
}

std::vector<EdgeId> DTree::deviating_edges(const Path& p) const {
    std::vector<EdgeId> out;
    out.reserve(p.length());
    for (int k = 0; k + 1 < static_cast<int>(p.nodes.size()); ++k) {
        const int v = p.nodes[k];
        const int taken = children_[v][0] == p.nodes[k + 1] ? 0 : 1;
        out.push_back(edge(v, 1 - taken));
    }
    return out;
}

void RandomizedDTree::validate() const {
    if (support.empty()) throw validation_error("randomized tree has empty support");
    const int n = support.front().tree.num_vars();
    double total = 0;
    for (const Entry& e : support) {
        if (!(e.prob > 0.0) || e.prob > 1.0) {
            throw validation_error("support probability must lie in (0,1]");
        }
        if (e.tree.num_vars() != n) {
            throw validation_error("support trees disagree on n");
        }
        total += e.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw validation_error("support probabilities do not sum to 1");
    }
}

int rdtsize(const RandomizedDTree& r) {
    r.validate();
    int best = 0;
    for (const auto& e : r.support) best = std::max(best, e.tree.size());
    return best;
}

namespace {

const std::string* leaf_output(const DTree& t, int leaf_idx) {
    const DTree::Node& nd = t.node(leaf_idx);
    return nd.out ? &*nd.out : nullptr;
}

void check_relation_args(int tree_n, const RelationTable& rel, const char* what) {
    if (rel.n != tree_n) throw validation_error("relation and tree disagree on n");
    ensure_enumerable(tree_n, what);
    for (const auto& [x, outs] : rel.allowed) {
        if (outs.empty()) {
            throw validation_error("relation allows no output for input " + std::to_string(x));
        }
    }
}

}  // namespace

RelationReport verify_relation(const DTree& t, const RelationTable& rel) {
    check_relation_args(t.num_vars(), rel, "verify_relation");
    RelationReport rep;
    std::vector<char> reached(t.count(), 0);
    const std::uint32_t total = 1u << t.num_vars();
    for (std::uint32_t x = 0; x < total; ++x) {
        auto it = rel.allowed.find(x);
        if (it == rel.allowed.end()) continue;  // outside the domain
        ++rep.inputs_checked;
        const int leaf = t.eval_leaf_index(x);
        reached[leaf] = 1;
        const std::string* out = leaf_output(t, leaf);
        if (out == nullptr) {
            rep.pass = false;
            rep.failures.push_back("leaf " + std::to_string(t.node(leaf).id) +
                                   " has no output label");
            rep.worst_error = 1.0;
            rep.worst_input = x;
            continue;
        }
        if (!it->second.count(*out)) {
            rep.pass = false;
            rep.worst_error = 1.0;
            rep.worst_input = x;
            rep.failures.push_back("input " + std::to_string(x) + " reaches output \"" + *out +
                                   "\" not allowed by the relation");
        }
    }
    for (int i = 0; i < t.count(); ++i) {
        if (t.node(i).leaf && !reached[i]) {
            rep.warnings.push_back("leaf " + std::to_string(t.node(i).id) +
                                   " unreachable over the relation domain");
        }
    }
    return rep;
}

RelationReport verify_relation(const RandomizedDTree& r, const RelationTable& rel) {
    r.validate();
    check_relation_args(r.num_vars(), rel, "verify_relation");
    RelationReport rep;
    const std::uint32_t total = 1u << r.num_vars();
    for (std::uint32_t x = 0; x < total; ++x) {
        auto it = rel.allowed.find(x);
        if (it == rel.allowed.end()) continue;
        ++rep.inputs_checked;
        double err = 0;
        for (const auto& e : r.support) {
            const int leaf = e.tree.eval_leaf_index(x);
            const std::string* out = leaf_output(e.tree, leaf);
            if (out == nullptr || !it->second.count(*out)) err += e.prob;
        }
        if (err > rep.worst_error) {
            rep.worst_error = err;
            rep.worst_input = x;
        }
        if (err > 1.0 / 3.0 + 1e-12) {
            rep.pass = false;
            rep.failures.push_back("input " + std::to_string(x) + " errs with probability " +
                                   std::to_string(err));
        }
    }
    return rep;
}

namespace {

void require_positive(int v, const char* what) {
    if (v <= 0) throw validation_error(std::string(what) + " must be positive");
}

}  // namespace

DTree gen_or_list(int n) {
    require_positive(n, "or-list n");
    std::vector<DTree::Node> nodes;
    // Internal node i queries x_i; 1 answers exit to a found-leaf, the 0
    // chain falls through to the all-zeros leaf.
    for (int i = 0; i < n; ++i) {
        const NodeId next = i + 1 < n ? NodeId(i + 1) : NodeId(n);
        nodes.push_back(DTree::internal(i, i, next, NodeId(n + 1 + i)));
    }
    nodes.push_back(DTree::leaf(n, "none", "0"));
    for (int i = 0; i < n; ++i) {
        nodes.push_back(DTree::leaf(n + 1 + i, "hit" + std::to_string(i), "1"));
    }
    return DTree(n, 0, std::move(nodes));
}

DTree gen_and_chain(int n) {
    require_positive(n, "and-chain n");
    std::vector<DTree::Node> nodes;
    for (int i = 0; i < n; ++i) {
        const NodeId next = i + 1 < n ? NodeId(i + 1) : NodeId(n);
        nodes.push_back(DTree::internal(i, i, NodeId(n + 1 + i), next));
    }
    nodes.push_back(DTree::leaf(n, "all", "1"));
    for (int i = 0; i < n; ++i) {
        nodes.push_back(DTree::leaf(n + 1 + i, "miss" + std::to_string(i), "0"));
    }
    return DTree(n, 0, std::move(nodes));
}

namespace {

// Complete tree of the given depth querying x_d at level d. label_out, when
// set, labels each leaf with the parity of its path bits.
DTree gen_complete_impl(int depth, bool parity_out) {
    if (depth < 0) throw validation_error("depth must be non-negative");
    std::vector<DTree::Node> nodes;
    // Heap layout: node k has children 2k+1, 2k+2; internal nodes are those
    // with k < 2^depth - 1.
    const long long internal = (1LL << depth) - 1;
    const long long total = (1LL << (depth + 1)) - 1;
    for (long long k = 0; k < total; ++k) {
        if (k < internal) {
            int level = 0;
            while ((2LL << level) - 1 <= k) ++level;
            nodes.push_back(DTree::internal(k, level, 2 * k + 1, 2 * k + 2));
        } else {
            const long long pos = k - internal;  // leaf number, bits = path answers
            std::optional<std::string> out;
            if (parity_out) {
                int par = 0;
                for (int b = 0; b < depth; ++b) par ^= static_cast<int>(pos >> b) & 1;
                out = par ? "1" : "0";
            }
            nodes.push_back(DTree::leaf(k, "L" + std::to_string(pos), std::move(out)));
        }
    }
    return DTree(std::max(depth, 1), 0, std::move(nodes));
}

}  // namespace

DTree gen_complete(int depth) {
    require_positive(depth + 1, "complete depth + 1");
    return gen_complete_impl(depth, false);
}

DTree gen_parity(int n) {
    require_positive(n, "parity n");
    return gen_complete_impl(n, true);
}

DTree gen_spine(int n) {
    require_positive(n, "spine n");
    if (n < 2 || (n & (n - 1)) != 0) {
        throw validation_error("spine n must be a power of two >= 2");
    }
    int d = 0;
    while ((1 << d) < n) ++d;  // complete subtree of n leaves has depth d

    std::vector<DTree::Node> nodes;
    NodeId next_id = 0;
    auto fresh = [&next_id]() { return next_id++; };

    // Complete subtree over variables n..n+d-1, ids allocated level order.
    // Returns its root id.
    auto build_complete = [&](auto&& self, int level) -> NodeId {
        const NodeId id = fresh();
        if (level == d) {
            nodes.push_back(DTree::leaf(id, "c" + std::to_string(id)));
            return id;
        }
        // Reserve the id before children so ids stay unique; children built
        // depth-first.
        const NodeId z = self(self, level + 1);
        const NodeId o = self(self, level + 1);
        nodes.push_back(DTree::internal(id, n + level, z, o));
        return id;
    };

    // Chain of n internal nodes querying x_0..x_{n-1}; node i hangs a leaf
    // off its 0-edge (the complete subtree for i = 0) and continues on 1.
    std::vector<NodeId> chain_ids(n);
    for (int i = 0; i < n; ++i) chain_ids[i] = fresh();
    const NodeId croot = build_complete(build_complete, 0);
    for (int i = 0; i < n; ++i) {
        NodeId zero;
        if (i == 0) {
            zero = croot;
        } else {
            zero = fresh();
            nodes.push_back(DTree::leaf(zero, "s" + std::to_string(i)));
        }
        NodeId one;
        if (i + 1 < n) {
            one = chain_ids[i + 1];
        } else {
            one = fresh();
            nodes.push_back(DTree::leaf(one, "end"));
        }
        nodes.push_back(DTree::internal(chain_ids[i], i, zero, one));
    }
    return DTree(n + d, chain_ids[0], std::move(nodes));
}

DTree gen_random(std::uint64_t seed, int node_budget, int n) {
    require_positive(node_budget, "node budget");
    require_positive(n, "n");
    Rng rng(seed);

    // Shape under construction: -1 children mark leaves.
    struct Shape {
        int var = -1;
        int child[2] = {-1, -1};
        int path_vars_used = 0;  // for leaves: depth in distinct variables
    };
    std::vector<Shape> shape(1);
    std::vector<int> expandable{0};
    std::vector<std::vector<char>> used_on_path;  // parallel to shape, leaves only
    used_on_path.push_back(std::vector<char>(n, 0));

    int total_nodes = 1;
    while (total_nodes + 2 <= node_budget && !expandable.empty()) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(expandable.size()));
        const int node = expandable[pick];
        std::vector<char> used = std::move(used_on_path[pick]);
        expandable.erase(expandable.begin() + pick);
        used_on_path.erase(used_on_path.begin() + pick);

        int free_count = 0;
        for (int j = 0; j < n; ++j) free_count += used[j] ? 0 : 1;
        int choice = static_cast<int>(rng.below(free_count));
        int var = -1;
        for (int j = 0; j < n; ++j) {
            if (!used[j] && choice-- == 0) {
                var = j;
                break;
            }
        }
        used[var] = 1;
        shape[node].var = var;
        for (int b = 0; b < 2; ++b) {
            shape.push_back(Shape{});
            const int child = static_cast<int>(shape.size()) - 1;
            shape[node].child[b] = child;
            shape[child].path_vars_used = shape[node].path_vars_used + 1;
            if (shape[child].path_vars_used < n) {
                expandable.push_back(child);
                used_on_path.push_back(used);
            }
        }
        total_nodes += 2;
    }

    // Emit with preorder ids and seed-drawn leaf output bits.
    std::vector<DTree::Node> nodes;
    int leaf_seq = 0;
    NodeId next_id = 0;
    auto emit = [&](auto&& self, int s) -> NodeId {
        const NodeId id = next_id++;
        if (shape[s].var < 0) {
            const std::string out = rng.coin() ? "1" : "0";
            nodes.push_back(DTree::leaf(id, "L" + std::to_string(leaf_seq++), out));
            return id;
        }
        nodes.push_back(DTree::internal(id, shape[s].var, 0, 0));
        const std::size_t slot = nodes.size() - 1;
        nodes[slot].zero = self(self, shape[s].child[0]);
        nodes[slot].one = self(self, shape[s].child[1]);
        return id;
    };
    emit(emit, 0);
    return DTree(n, 0, std::move(nodes));
}

}  // namespace dtspan
