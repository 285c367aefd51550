#include "dtspan/formula.hpp"

#include <functional>

namespace dtspan {

namespace {

int add_node(Formula& f, Formula::Node nd) {
    f.nodes.push_back(nd);
    return f.size() - 1;
}

}  // namespace

Formula to_formula(const DTree& t) {
    Formula f;
    std::function<int(int)> conv = [&](int idx) -> int {
        const DTree::Node& nd = t.node(idx);
        if (nd.leaf) {
            if (!nd.out || (*nd.out != "0" && *nd.out != "1")) {
                throw validation_error("leaf " + std::to_string(nd.id) +
                                       " needs a 0/1 output label");
            }
            Formula::Node c;
            c.kind = Formula::Kind::Const;
            c.bit = *nd.out == "1" ? 1 : 0;
            return add_node(f, c);
        }
        const int lo = conv(t.child_index(idx, 0));
        const int hi = conv(t.child_index(idx, 1));
        Formula::Node neg;
        neg.kind = Formula::Kind::Lit;
        neg.var = nd.var;
        neg.negated = true;
        const int nlit = add_node(f, neg);
        Formula::Node pos;
        pos.kind = Formula::Kind::Lit;
        pos.var = nd.var;
        const int plit = add_node(f, pos);
        Formula::Node land;
        land.kind = Formula::Kind::And;
        land.left = nlit;
        land.right = lo;
        const int l = add_node(f, land);
        Formula::Node rand_;
        rand_.kind = Formula::Kind::And;
        rand_.left = plit;
        rand_.right = hi;
        const int r = add_node(f, rand_);
        Formula::Node orn;
        orn.kind = Formula::Kind::Or;
        orn.left = l;
        orn.right = r;
        return add_node(f, orn);
    };
    f.root = conv(t.root_index());
    return f;
}

bool formula_eval(const Formula& f, const std::vector<std::uint8_t>& x) {
    std::function<bool(int)> rec = [&](int i) -> bool {
        const Formula::Node& nd = f.nodes[i];
        switch (nd.kind) {
            case Formula::Kind::Const: return nd.bit != 0;
            case Formula::Kind::Lit: {
                if (nd.var >= static_cast<int>(x.size())) {
                    throw validation_error("assignment shorter than literal index");
                }
                const bool v = x[nd.var] != 0;
                return nd.negated ? !v : v;
            }
            case Formula::Kind::And: return rec(nd.left) && rec(nd.right);
            case Formula::Kind::Or: return rec(nd.left) || rec(nd.right);
        }
        return false;
    };
    return rec(f.root);
}

int formula_size(const Formula& f) { return f.size(); }

}  // namespace dtspan
