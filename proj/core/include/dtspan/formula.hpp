#pragma once

#include <cstdint>
#include <vector>

#include "dtspan/dtree.hpp"

namespace dtspan {

// Boolean formula: binary AND/OR gates over literals and constants.
struct Formula {
    enum class Kind { And, Or, Lit, Const };

    struct Node {
        Kind kind = Kind::Const;
        int left = -1;    // gates
        int right = -1;
        int var = -1;     // literals
        bool negated = false;
        int bit = 0;      // constants
    };

    std::vector<Node> nodes;
    int root = -1;

    int size() const { return static_cast<int>(nodes.size()); }
};

// Gate-for-node conversion of a 0/1-output decision tree:
// leaf b -> the constant b; a query of x_i becomes
// (not x_i AND left formula) OR (x_i AND right formula).
// The result computes the tree's output function and has at most 5 times the
// tree's node count.
Formula to_formula(const DTree& t);

bool formula_eval(const Formula& f, const std::vector<std::uint8_t>& x);
int formula_size(const Formula& f);

}  // namespace dtspan
