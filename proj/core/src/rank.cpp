#include "dtspan/rank.hpp"

#include <algorithm>

namespace dtspan {

std::vector<int> subtree_ranks(const DTree& t) {
    std::vector<int> rank(t.count(), 0);
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        const int r0 = rank[t.child_index(idx, 0)];
        const int r1 = rank[t.child_index(idx, 1)];
        rank[idx] = r0 == r1 ? r0 + 1 : std::max(r0, r1);
    }
    return rank;
}

int tree_rank(const DTree& t) { return subtree_ranks(t)[t.root_index()]; }

GColoring optimal_coloring(const DTree& t) {
    const std::vector<int> rank = subtree_ranks(t);
    GColoring c;
    for (int idx = 0; idx < t.count(); ++idx) {
        if (t.node(idx).leaf) continue;
        const int r0 = rank[t.child_index(idx, 0)];
        const int r1 = rank[t.child_index(idx, 1)];
        const int black_bit = r0 >= r1 ? 0 : 1;  // ties go black on the 0-edge
        c.color[t.edge(idx, black_bit)] = EdgeColor::Black;
        c.color[t.edge(idx, 1 - black_bit)] = EdgeColor::Red;
    }
    return c;
}

int coloring_cost(const DTree& t, const GColoring& c) {
    std::vector<int> cost(t.count(), 0);  // max red edges below each node
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        int blacks = 0;
        int worst = 0;
        for (int b = 0; b < 2; ++b) {
            auto it = c.color.find(t.edge(idx, b));
            if (it == c.color.end()) {
                throw validation_error("coloring misses an edge of node " +
                                       std::to_string(t.node(idx).id));
            }
            const int red = it->second == EdgeColor::Red ? 1 : 0;
            blacks += 1 - red;
            worst = std::max(worst, red + cost[t.child_index(idx, b)]);
        }
        if (blacks > 1) {
            throw validation_error("node " + std::to_string(t.node(idx).id) +
                                   " has two black outgoing edges");
        }
        cost[idx] = worst;
    }
    return cost[t.root_index()];
}

int exhaustive_guessing_complexity(const DTree& t) {
    const int k = t.internal_count();
    if (k > 16) {
        throw cap_exceeded_error("exhaustive_guessing_complexity: " + std::to_string(k) +
                                 " internal nodes exceeds cap 16");
    }
    if (k == 0) return 0;

    // Compact internal-node table in postorder: child slot >= 0 names another
    // internal node, -1 a leaf.
    struct Slot {
        int child[2];
    };
    std::vector<Slot> slots;
    std::vector<int> slot_of(t.count(), -1);
    slots.reserve(k);
    for (int idx : t.postorder()) {
        if (t.node(idx).leaf) continue;
        Slot s;
        for (int b = 0; b < 2; ++b) s.child[b] = slot_of[t.child_index(idx, b)];
        slot_of[idx] = static_cast<int>(slots.size());
        slots.push_back(s);
    }
    const int root_slot = slot_of[t.root_index()];

    long long combos = 1;
    for (int i = 0; i < k; ++i) combos *= 3;

    int best = k + 1;
    std::vector<int> choice(k, 0);  // 0: black on 0-edge, 1: black on 1-edge, 2: both red
    std::vector<int> cost(k, 0);
    for (long long c = 0; c < combos; ++c) {
        long long rem = c;
        for (int i = 0; i < k; ++i) {
            choice[i] = static_cast<int>(rem % 3);
            rem /= 3;
        }
        for (int i = 0; i < k; ++i) {
            int worst = 0;
            for (int b = 0; b < 2; ++b) {
                const int red = choice[i] == b ? 0 : 1;
                const int below = slots[i].child[b] >= 0 ? cost[slots[i].child[b]] : 0;
                worst = std::max(worst, red + below);
            }
            cost[i] = worst;
        }
        best = std::min(best, cost[root_slot]);
    }
    return best;
}

int rrank(const RandomizedDTree& r) {
    r.validate();
    int best = 0;
    for (const auto& e : r.support) best = std::max(best, tree_rank(e.tree));
    return best;
}

}  // namespace dtspan
