#pragma once

#include <map>

#include "dtspan/dtree.hpp"

namespace dtspan {

enum class EdgeColor { Black, Red };

// Edge two-coloring with at most one black edge leaving each internal node.
// Cost of a coloring is the maximum number of red edges on a root-to-leaf
// path; the minimum cost over all colorings equals the tree's rank.
struct GColoring {
    std::map<EdgeId, EdgeColor> color;
};

// Rank of the tree: leaves are 0; an internal node takes the larger child
// rank, plus one when the children tie.
int tree_rank(const DTree& t);

// Rank per subtree, indexed like t's dense node indices.
std::vector<int> subtree_ranks(const DTree& t);

// Minimum-cost coloring: black toward the child of larger rank, black on the
// 0-edge when the children tie. Its cost equals tree_rank(t).
GColoring optimal_coloring(const DTree& t);

// Max red edges over root-to-leaf paths. Throws validation_error if the
// coloring misses an edge or puts two black edges on one node.
int coloring_cost(const DTree& t, const GColoring& c);

// Brute-force minimum over all legal colorings (per internal node: black on
// the 0-edge, black on the 1-edge, or both red). Caps at 16 internal nodes.
int exhaustive_guessing_complexity(const DTree& t);

// Maximum rank over the support.
int rrank(const RandomizedDTree& r);

}  // namespace dtspan
