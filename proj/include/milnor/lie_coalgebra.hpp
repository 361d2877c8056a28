#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "milnor/rational.hpp"

namespace milnor {

// Sphere dimensions q_1..q_s of the wedge the functionals live on.
struct GradedGenerators {
    std::vector<int> degrees;

    int q(int i) const {
        if (i < 1 || i > static_cast<int>(degrees.size()))
            throw std::invalid_argument("generator index out of range");
        return degrees[static_cast<std::size_t>(i) - 1];
    }
    friend bool operator==(const GradedGenerators&, const GradedGenerators&) = default;
};

inline GradedGenerators make_generators(std::vector<int> degrees) {
    for (int q : degrees)
        if (q < 1) throw std::invalid_argument("sphere dimensions must be >= 1");
    return GradedGenerators{std::move(degrees)};
}

// deg x_I = sum q_{i_k} - (r-1)
inline int functional_degree(const GradedGenerators& g, const std::vector<int>& I) {
    if (I.empty()) throw std::invalid_argument("empty index sequence");
    int d = 1 - static_cast<int>(I.size());
    for (int i : I) d += g.q(i);
    return d;
}

// Functional x_I on the wedge described by context.
struct Functional {
    GradedGenerators context;
    std::vector<int> I;
};

inline Functional make_functional(GradedGenerators g, std::vector<int> I) {
    functional_degree(g, I);  // validates nonempty I and index range
    return Functional{std::move(g), std::move(I)};
}

// Iterated Whitehead-product shape: leaves are generator indices.
class BracketTree {
public:
    explicit BracketTree(int leaf) : leaf_(leaf) {
        if (leaf < 1) throw std::invalid_argument("leaf index must be >= 1");
    }
    BracketTree(const BracketTree& l, const BracketTree& r)
        : leaf_(0),
          left_(std::make_shared<const BracketTree>(l)),
          right_(std::make_shared<const BracketTree>(r)) {}

    bool is_leaf() const { return leaf_ > 0; }
    int leaf_index() const { return leaf_; }
    const BracketTree& left() const { return *left_; }
    const BracketTree& right() const { return *right_; }

private:
    int leaf_;
    std::shared_ptr<const BracketTree> left_, right_;
};

inline BracketTree leaf(int i) { return BracketTree(i); }
inline BracketTree node(const BracketTree& l, const BracketTree& r) { return BracketTree(l, r); }

// [i_1, [i_2, ... [i_{r-1}, i_r] ... ]]
inline BracketTree left_normed_tree(const std::vector<int>& indices) {
    if (indices.size() < 2) throw std::invalid_argument("left_normed_tree needs >= 2 leaves");
    BracketTree acc = leaf(indices.back());
    for (std::size_t i = indices.size() - 1; i-- > 0;) acc = node(leaf(indices[i]), acc);
    return acc;
}

// deg Leaf i = q_i, deg [a,b] = deg a + deg b - 1
inline int tree_degree(const GradedGenerators& g, const BracketTree& b) {
    if (b.is_leaf()) return g.q(b.leaf_index());
    return tree_degree(g, b.left()) + tree_degree(g, b.right()) - 1;
}

inline void collect_leaves(const BracketTree& b, std::vector<int>& out) {
    if (b.is_leaf()) {
        out.push_back(b.leaf_index());
    } else {
        collect_leaves(b.left(), out);
        collect_leaves(b.right(), out);
    }
}

// One term of dx_I: (x_prefix, x_suffix, sign), sign = (-1)^{deg x_prefix}.
struct CoproductTerm {
    std::vector<int> prefix, suffix;
    int sign;

    friend bool operator==(const CoproductTerm&, const CoproductTerm&) = default;
};

inline std::vector<CoproductTerm> coproduct(const GradedGenerators& g, const std::vector<int>& I) {
    functional_degree(g, I);  // validation
    std::vector<CoproductTerm> out;
    for (std::size_t k = 1; k < I.size(); ++k) {
        std::vector<int> p(I.begin(), I.begin() + k), s(I.begin() + k, I.end());
        int sign = functional_degree(g, p) % 2 ? -1 : 1;
        out.push_back(CoproductTerm{std::move(p), std::move(s), sign});
    }
    return out;
}

inline std::vector<CoproductTerm> coproduct(const Functional& x) {
    return coproduct(x.context, x.I);
}

enum class ShuffleGrading { period, invariant };

// All ways to interleave n letters with k letters: flag 0 pulls from the
// first sequence, flag 1 from the second; lexicographic order.
inline std::vector<std::vector<int>> all_shuffle_flags(std::size_t n, std::size_t k) {
    std::vector<std::vector<int>> out;
    std::vector<int> flags(n + k, 0);
    std::fill(flags.begin() + static_cast<std::ptrdiff_t>(n), flags.end(), 1);
    std::sort(flags.begin(), flags.end());
    do {
        out.push_back(flags);
    } while (std::next_permutation(flags.begin(), flags.end()));
    return out;
}

inline std::vector<int> apply_shuffle(const std::vector<int>& I, const std::vector<int>& J,
                                      const std::vector<int>& flags) {
    std::vector<int> out;
    std::size_t ii = 0, jj = 0;
    for (int f : flags) {
        if (f == 0 && ii < I.size())
            out.push_back(I[ii++]);
        else if (f == 1 && jj < J.size())
            out.push_back(J[jj++]);
        else
            throw std::invalid_argument("flags do not describe a shuffle of I and J");
    }
    if (ii != I.size() || jj != J.size())
        throw std::invalid_argument("flags do not describe a shuffle of I and J");
    return out;
}

// (-1)^{kappa}; kappa sums the grading weight over pairs a J-letter jumps
// ahead of an I-letter.  period weights (q-1)(q-1), invariant weights
// (q+1)(q+1), matching the two shuffle-relation flavors.
inline int koszul_sign(const GradedGenerators& g, const std::vector<int>& I,
                       const std::vector<int>& J, const std::vector<int>& flags,
                       ShuffleGrading grading) {
    std::vector<std::pair<bool, int>> seq;  // (from J, q)
    std::size_t ii = 0, jj = 0;
    for (int f : flags) {
        if (f == 0 && ii < I.size())
            seq.emplace_back(false, g.q(I[ii++]));
        else if (f == 1 && jj < J.size())
            seq.emplace_back(true, g.q(J[jj++]));
        else
            throw std::invalid_argument("flags do not describe a shuffle of I and J");
    }
    if (ii != I.size() || jj != J.size())
        throw std::invalid_argument("flags do not describe a shuffle of I and J");
    const int shift = grading == ShuffleGrading::period ? -1 : 1;
    long kappa = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b)
            if (seq[a].first && !seq[b].first)
                kappa += static_cast<long>(seq[b].second + shift) * (seq[a].second + shift);
    return kappa % 2 ? -1 : 1;
}

namespace detail {

inline bool left_leaning(const BracketTree& b) {
    if (b.is_leaf()) return true;
    return b.left().is_leaf() && left_leaning(b.right());
}

inline int min_leaf_degree(const GradedGenerators& g, const BracketTree& b) {
    std::vector<int> ls;
    collect_leaves(b, ls);
    int m = g.q(ls.front());
    for (int i : ls) m = std::min(m, g.q(i));
    return m;
}

inline Int pair_rec(const GradedGenerators& g, const std::vector<int>& I, const BracketTree& b) {
    if (functional_degree(g, I) != tree_degree(g, b)) return 0;
    if (b.is_leaf()) return I.size() == 1 && I.front() == b.leaf_index() ? Int(1) : Int(0);
    const int k = tree_degree(g, b.left());
    const int l = tree_degree(g, b.right());
    const int kl_sign = (static_cast<long>(k) * l) % 2 ? -1 : 1;
    Int total = 0;
    for (const CoproductTerm& t : coproduct(g, I)) {
        Int straight = pair_rec(g, t.prefix, b.left()) * pair_rec(g, t.suffix, b.right());
        Int crossed = pair_rec(g, t.prefix, b.right()) * pair_rec(g, t.suffix, b.left());
        total += t.sign * (kl_sign * straight + crossed);
    }
    return total;
}

}  // namespace detail

// Recursive pairing of x_I with an iterated Whitehead-product shape.
// When any leaf sphere is a circle the recursion is only certified on
// left-leaning nestings with pairwise distinct leaves; anything else is
// rejected rather than silently computed.
inline Int pair(const GradedGenerators& g, const std::vector<int>& I, const BracketTree& b) {
    const int dx = functional_degree(g, I);
    std::vector<int> leaves;
    collect_leaves(b, leaves);
    for (int i : leaves) g.q(i);  // range check
    if (detail::min_leaf_degree(g, b) == 1) {
        std::set<int> uniq(leaves.begin(), leaves.end());
        if (!detail::left_leaning(b) || uniq.size() != leaves.size())
            throw std::domain_error("unsupported tree shape");
    }
    const int db = tree_degree(g, b);
    if (dx != db) throw std::invalid_argument("pair: degree mismatch");
    return detail::pair_rec(g, I, b);
}

inline Int pair(const Functional& x, const BracketTree& b) { return pair(x.context, x.I, b); }

// Pairing matrix between {x_(sigma,s)} and the left-normed brackets
// [iota_{tau(1)}, [..., iota_s]] over permutations sigma, tau of 1..s-1
// (lexicographic order).  Always diagonal with +-1 entries.
struct DualBasisMatrix {
    std::vector<std::vector<int>> permutations;
    std::vector<std::vector<Int>> entries;  // entries[row sigma][col tau]
};

inline DualBasisMatrix dual_basis_matrix(const GradedGenerators& g) {
    const int s = static_cast<int>(g.degrees.size());
    if (s < 2) throw std::invalid_argument("dual_basis_matrix needs s >= 2");
    std::vector<int> base(static_cast<std::size_t>(s) - 1);
    for (int i = 0; i < s - 1; ++i) base[static_cast<std::size_t>(i)] = i + 1;
    DualBasisMatrix out;
    std::vector<int> perm = base;
    do {
        out.permutations.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const auto& sigma : out.permutations) {
        std::vector<int> I = sigma;
        I.push_back(s);
        std::vector<Int> row;
        for (const auto& tau : out.permutations) {
            std::vector<int> leaves = tau;
            leaves.push_back(s);
            row.push_back(pair(g, I, left_normed_tree(leaves)));
        }
        out.entries.push_back(std::move(row));
    }
    return out;
}

struct FunctionalResidual {
    Int value;
    bool vacuous = false;  // degree mismatch between the shuffles and the tree
};

// sum over plain shuffles sigma of (-1)^{kappa(sigma)} pair(x_{sigma(I,J)}, b).
inline FunctionalResidual shuffle_functional_residual(const GradedGenerators& g,
                                                      const std::vector<int>& I,
                                                      const std::vector<int>& J,
                                                      const BracketTree& b,
                                                      ShuffleGrading grading) {
    if (I.empty() || J.empty()) throw std::invalid_argument("empty index sequence");
    std::vector<int> all = I;
    all.insert(all.end(), J.begin(), J.end());
    if (functional_degree(g, all) != tree_degree(g, b)) return FunctionalResidual{0, true};
    Int total = 0;
    for (const auto& flags : all_shuffle_flags(I.size(), J.size())) {
        const int sign = koszul_sign(g, I, J, flags, grading);
        total += sign * pair(g, apply_shuffle(I, J, flags), b);
    }
    return FunctionalResidual{total, false};
}

}  // namespace milnor
