#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "milnor/rational.hpp"

namespace milnor {

// Finite-basis differential graded algebra over the rationals.  Degrees run
// from 0 to truncation; products landing above the truncation are zero by
// convention, so the stored tables never mention such elements.
struct Dga {
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::vector<std::vector<std::pair<int, Rat>>> diff;               // per basis index
    std::vector<std::vector<std::vector<std::pair<int, Rat>>>> mult;  // [i][j] -> sparse result
    int truncation = 0;
    bool graded_commutative = false;

    int dim() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < dim(); ++i)
            if (names[i] == name) return i;
        throw std::invalid_argument("dga: no basis element named " + name);
    }
};

// Dense coefficient vector over the full basis of one Dga.
using Chain = std::vector<Rat>;

inline Chain zero_chain(const Dga& D) { return Chain(D.dim(), Rat(0)); }

inline Chain basis_chain(const Dga& D, int idx) {
    if (idx < 0 || idx >= D.dim()) throw std::out_of_range("dga: basis index out of range");
    Chain c = zero_chain(D);
    c[static_cast<std::size_t>(idx)] = 1;
    return c;
}

inline Chain chain_of(const Dga& D, const std::vector<std::pair<std::string, Rat>>& terms) {
    Chain c = zero_chain(D);
    for (const auto& [name, coeff] : terms) c[static_cast<std::size_t>(D.index_of(name))] += coeff;
    return c;
}

inline bool chain_is_zero(const Chain& c) {
    return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
}

inline void chain_add_scaled(Chain& dst, const Rat& s, const Chain& src) {
    if (dst.size() != src.size()) throw std::invalid_argument("chain size mismatch");
    if (s == 0) return;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
}

// Degree of a homogeneous chain; nullopt for the zero chain.
inline std::optional<int> chain_degree(const Dga& D, const Chain& c) {
    if (static_cast<int>(c.size()) != D.dim()) throw std::invalid_argument("chain size mismatch");
    std::optional<int> deg;
    for (int i = 0; i < D.dim(); ++i) {
        if (c[static_cast<std::size_t>(i)] == 0) continue;
        if (!deg)
            deg = D.degrees[static_cast<std::size_t>(i)];
        else if (*deg != D.degrees[static_cast<std::size_t>(i)])
            throw std::invalid_argument("chain is not homogeneous");
    }
    return deg;
}

inline Chain apply_diff(const Dga& D, const Chain& c) {
    if (static_cast<int>(c.size()) != D.dim()) throw std::invalid_argument("chain size mismatch");
    Chain out = zero_chain(D);
    for (int i = 0; i < D.dim(); ++i) {
        const Rat& ci = c[static_cast<std::size_t>(i)];
        if (ci == 0) continue;
        for (const auto& [j, v] : D.diff[static_cast<std::size_t>(i)])
            out[static_cast<std::size_t>(j)] += ci * v;
    }
    return out;
}

inline Chain multiply(const Dga& D, const Chain& a, const Chain& b) {
    if (static_cast<int>(a.size()) != D.dim() || static_cast<int>(b.size()) != D.dim())
        throw std::invalid_argument("chain size mismatch");
    Chain out = zero_chain(D);
    for (int i = 0; i < D.dim(); ++i) {
        const Rat& ai = a[static_cast<std::size_t>(i)];
        if (ai == 0) continue;
        for (int j = 0; j < D.dim(); ++j) {
            const Rat& bj = b[static_cast<std::size_t>(j)];
            if (bj == 0) continue;
            const Rat s = ai * bj;
            for (const auto& [k, v] : D.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                out[static_cast<std::size_t>(k)] += s * v;
        }
    }
    return out;
}

// Checks every structural and algebraic invariant on the stored tables.
// Violations come back as messages naming the offending basis elements;
// an empty list means the Dga is valid.
inline std::vector<std::string> validate_dga(const Dga& D) {
    const int n = D.dim();
    if (static_cast<int>(D.degrees.size()) != n || static_cast<int>(D.diff.size()) != n ||
        static_cast<int>(D.mult.size()) != n)
        return {"table sizes disagree with basis size"};
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(D.mult[static_cast<std::size_t>(i)].size()) != n)
            return {"mult row has wrong size at " + D.names[static_cast<std::size_t>(i)]};

    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (D.degrees[iu] < 0 || D.degrees[iu] > D.truncation)
            out.push_back("degree out of range: " + D.names[iu]);
        for (const auto& [j, v] : D.diff[iu]) {
            (void)v;
            if (j < 0 || j >= n || D.degrees[static_cast<std::size_t>(j)] != D.degrees[iu] + 1) {
                out.push_back("differential is not of degree +1 on " + D.names[iu]);
                break;
            }
        }
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            for (const auto& [k, v] : D.mult[iu][ju]) {
                (void)v;
                if (k < 0 || k >= n ||
                    D.degrees[static_cast<std::size_t>(k)] != D.degrees[iu] + D.degrees[ju]) {
                    out.push_back("product is not graded: " + D.names[iu] + " * " + D.names[ju]);
                    break;
                }
            }
        }
    }
    if (!out.empty()) return out;  // degree bookkeeping is broken, skip the algebra checks

    for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (!chain_is_zero(apply_diff(D, apply_diff(D, basis_chain(D, i)))))
            out.push_back("d^2 != 0 on " + D.names[iu]);
    }
    // Pairs and triples whose total degree exceeds the truncation vanish on
    // both sides of each identity, so only the bounded ones are checked.
    for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (int j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (D.degrees[iu] + D.degrees[ju] > D.truncation) continue;
            const Chain ei = basis_chain(D, i);
            const Chain ej = basis_chain(D, j);
            Chain lhs = apply_diff(D, multiply(D, ei, ej));
            Chain rhs = multiply(D, apply_diff(D, ei), ej);
            const Rat sign = (D.degrees[iu] % 2 == 0) ? 1 : -1;
            chain_add_scaled(rhs, sign, multiply(D, ei, apply_diff(D, ej)));
            chain_add_scaled(lhs, -1, rhs);
            if (!chain_is_zero(lhs))
                out.push_back("Leibniz fails on " + D.names[iu] + " * " + D.names[ju]);
            if (D.graded_commutative) {
                Chain comm = multiply(D, ei, ej);
                const Rat csign = (D.degrees[iu] * D.degrees[ju]) % 2 == 0 ? -1 : 1;
                chain_add_scaled(comm, csign, multiply(D, ej, ei));
                if (!chain_is_zero(comm))
                    out.push_back("graded commutativity fails on " + D.names[iu] + " * " +
                                  D.names[ju]);
            }
            for (int k = 0; k < n; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                if (D.degrees[iu] + D.degrees[ju] + D.degrees[ku] > D.truncation) continue;
                const Chain ek = basis_chain(D, k);
                Chain assoc = multiply(D, multiply(D, ei, ej), ek);
                chain_add_scaled(assoc, -1, multiply(D, ei, multiply(D, ej, ek)));
                if (!chain_is_zero(assoc))
                    out.push_back("associativity fails on " + D.names[iu] + " * " + D.names[ju] +
                                  " * " + D.names[ku]);
            }
        }
    }
    return out;
}

namespace detail {

// Column echelon form of d restricted to one degree, with preimage tracking.
// Columns are processed in basis order and pivots are the first nonzero row,
// so solutions and reduced representatives are deterministic.  A reduced
// vector has zeros at every pivot, which makes it canonical modulo the image.
class DiffSolver {
public:
    DiffSolver(const Dga& D, int degree) : dga_(&D) {
        for (int j = 0; j < D.dim(); ++j) {
            if (D.degrees[static_cast<std::size_t>(j)] != degree) continue;
            Chain col = apply_diff(D, basis_chain(D, j));
            Chain pre = basis_chain(D, j);
            reduce(col, &pre, nullptr);
            if (chain_is_zero(col)) {
                kernel_.push_back(std::move(pre));
            } else {
                const int p = first_nonzero(col);
                const Rat lead = col[static_cast<std::size_t>(p)];
                for (auto& x : col) x /= lead;
                for (auto& x : pre) x /= lead;
                rows_.push_back(Row{p, std::move(col), std::move(pre)});
            }
        }
    }

    // Some x with d x = rhs, assembled from the recorded preimages; nullopt
    // when rhs is not exact.
    std::optional<Chain> solve(const Chain& rhs) const {
        Chain r = rhs;
        Chain x = zero_chain(*dga_);
        reduce(r, nullptr, &x);
        if (!chain_is_zero(r)) return std::nullopt;
        return x;
    }

    // Canonical representative of rhs modulo the image of d.
    Chain reduce_mod_image(const Chain& rhs) const {
        Chain r = rhs;
        reduce(r, nullptr, nullptr);
        return r;
    }

    const std::vector<Chain>& kernel_basis() const { return kernel_; }
    int image_rank() const { return static_cast<int>(rows_.size()); }

private:
    struct Row {
        int pivot;
        Chain col;
        Chain pre;
    };

    static int first_nonzero(const Chain& c) {
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) return static_cast<int>(i);
        return -1;
    }

    // Each stored row has zeros at all earlier pivots, so one pass in row
    // order clears every pivot from r.
    void reduce(Chain& r, Chain* pre, Chain* acc) const {
        for (const Row& row : rows_) {
            const Rat c = r[static_cast<std::size_t>(row.pivot)];
            if (c == 0) continue;
            chain_add_scaled(r, -c, row.col);
            if (pre) chain_add_scaled(*pre, -c, row.pre);
            if (acc) chain_add_scaled(*acc, c, row.pre);
        }
    }

    const Dga* dga_;
    std::vector<Row> rows_;
    std::vector<Chain> kernel_;
};

}  // namespace detail

// Representatives of a basis of ker d / im d in degree k.  Each representative
// is closed, reduced against the image and the earlier representatives, and
// normalized to leading coefficient 1.
inline std::vector<Chain> cohomology(const Dga& D, int k) {
    if (k < 0 || k > D.truncation) return {};
    detail::DiffSolver at_k(D, k);
    detail::DiffSolver below(D, k - 1);
    std::vector<Chain> reps;
    for (const Chain& v : at_k.kernel_basis()) {
        Chain r = below.reduce_mod_image(v);
        for (const Chain& prev : reps) {
            int p = -1;
            for (std::size_t t = 0; t < prev.size(); ++t)
                if (prev[t] != 0) {
                    p = static_cast<int>(t);
                    break;
                }
            chain_add_scaled(r, -r[static_cast<std::size_t>(p)], prev);
        }
        if (chain_is_zero(r)) continue;
        Rat lead = 0;
        for (const Rat& x : r)
            if (x != 0) {
                lead = x;
                break;
            }
        for (auto& x : r) x /= lead;
        reps.push_back(std::move(r));
    }
    return reps;
}

// Exterior algebra on degree-1 generators, truncated, with the differential
// extended from generator values by the Leibniz rule.  Generator differentials
// are given as combinations of generator pairs g1 < g2.
struct ExteriorDiffTerm {
    int g1 = 0;
    int g2 = 0;
    Rat coeff = 0;
};

inline Dga exterior_algebra(const std::vector<std::string>& generators,
                            const std::vector<std::vector<ExteriorDiffTerm>>& gen_diff,
                            int truncation) {
    const int n = static_cast<int>(generators.size());
    if (static_cast<int>(gen_diff.size()) != n)
        throw std::invalid_argument("exterior_algebra: one differential entry per generator");
    if (truncation < 0) throw std::invalid_argument("exterior_algebra: negative truncation");
    for (const auto& terms : gen_diff)
        for (const auto& t : terms)
            if (t.g1 < 0 || t.g2 <= t.g1 || t.g2 >= n)
                throw std::invalid_argument("exterior_algebra: bad generator pair");

    Dga D;
    D.truncation = truncation;
    D.graded_commutative = true;
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> subsets;
    for (int size = 0; size <= std::min(n, truncation); ++size) {
        std::vector<int> pick(static_cast<std::size_t>(size));
        for (int t = 0; t < size; ++t) pick[static_cast<std::size_t>(t)] = t;
        while (true) {
            index[pick] = static_cast<int>(subsets.size());
            subsets.push_back(pick);
            int t = size - 1;
            while (t >= 0 && pick[static_cast<std::size_t>(t)] == n - size + t) --t;
            if (t < 0) break;
            ++pick[static_cast<std::size_t>(t)];
            for (int s = t + 1; s < size; ++s)
                pick[static_cast<std::size_t>(s)] = pick[static_cast<std::size_t>(s - 1)] + 1;
        }
    }
    for (const auto& S : subsets) {
        std::string name;
        for (int g : S) name += generators[static_cast<std::size_t>(g)];
        D.names.push_back(S.empty() ? "1" : name);
        D.degrees.push_back(static_cast<int>(S.size()));
    }

    const int dim = D.dim();
    D.mult.assign(static_cast<std::size_t>(dim),
                  std::vector<std::vector<std::pair<int, Rat>>>(static_cast<std::size_t>(dim)));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const auto& A = subsets[static_cast<std::size_t>(i)];
            const auto& B = subsets[static_cast<std::size_t>(j)];
            if (static_cast<int>(A.size() + B.size()) > truncation) continue;
            std::vector<int> merged = A;
            merged.insert(merged.end(), B.begin(), B.end());
            long inversions = 0;
            for (int a : A)
                for (int b : B)
                    if (a > b) ++inversions;
            std::sort(merged.begin(), merged.end());
            if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) continue;
            D.mult[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {
                {index.at(merged), inversions % 2 == 0 ? Rat(1) : Rat(-1)}};
        }
    }

    D.diff.assign(static_cast<std::size_t>(dim), {});
    for (int i = 0; i < dim; ++i) {
        const auto& S = subsets[static_cast<std::size_t>(i)];
        Chain total = zero_chain(D);
        for (std::size_t s = 0; s < S.size(); ++s) {
            std::vector<int> left(S.begin(), S.begin() + static_cast<std::ptrdiff_t>(s));
            std::vector<int> right(S.begin() + static_cast<std::ptrdiff_t>(s) + 1, S.end());
            const Rat outer = (s % 2 == 0) ? 1 : -1;
            for (const auto& t : gen_diff[static_cast<std::size_t>(S[s])]) {
                if (truncation < 2) continue;  // the pair does not exist below degree 2
                Chain mid = basis_chain(D, index.at({t.g1, t.g2}));
                Chain term = multiply(D, basis_chain(D, index.at(left)), mid);
                term = multiply(D, term, basis_chain(D, index.at(right)));
                chain_add_scaled(total, outer * t.coeff, term);
            }
        }
        for (int k = 0; k < dim; ++k)
            if (total[static_cast<std::size_t>(k)] != 0)
                D.diff[static_cast<std::size_t>(i)].push_back(
                    {k, total[static_cast<std::size_t>(k)]});
    }
    return D;
}

}  // namespace milnor
