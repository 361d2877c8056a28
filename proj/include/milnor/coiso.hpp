#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "milnor/rational.hpp"

namespace milnor {

// Sparse matrix with all entries +1 or -1; p records the widest row support.
struct SignEntry {
    int row = 0;
    int col = 0;
    int value = 0;
};

struct SparseSignMatrix {
    int rows = 0;
    int cols = 0;
    int p = 0;
    std::vector<SignEntry> entries;
};

inline SparseSignMatrix make_sign_matrix(int rows, int cols, std::vector<SignEntry> entries) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("sign matrix: negative shape");
    std::vector<int> support(static_cast<std::size_t>(rows), 0);
    std::set<std::pair<int, int>> seen;
    for (const SignEntry& e : entries) {
        if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
            throw std::invalid_argument("sign matrix: entry out of range");
        if (e.value != 1 && e.value != -1)
            throw std::invalid_argument("sign matrix: entries must be +1 or -1");
        if (!seen.insert({e.row, e.col}).second)
            throw std::invalid_argument("sign matrix: duplicate entry");
        ++support[static_cast<std::size_t>(e.row)];
    }
    SparseSignMatrix A{rows, cols, 0, std::move(entries)};
    for (int s : support) A.p = std::max(A.p, s);
    return A;
}

inline std::vector<Rat> matvec(const SparseSignMatrix& A, const std::vector<Rat>& x) {
    if (static_cast<int>(x.size()) != A.cols) throw std::invalid_argument("matvec: size mismatch");
    std::vector<Rat> y(static_cast<std::size_t>(A.rows), Rat(0));
    for (const SignEntry& e : A.entries)
        y[static_cast<std::size_t>(e.row)] += Rat(e.value) * x[static_cast<std::size_t>(e.col)];
    return y;
}

inline std::vector<Rat> matvec_transpose(const SparseSignMatrix& A, const std::vector<Rat>& y) {
    if (static_cast<int>(y.size()) != A.rows)
        throw std::invalid_argument("matvec_transpose: size mismatch");
    std::vector<Rat> x(static_cast<std::size_t>(A.cols), Rat(0));
    for (const SignEntry& e : A.entries)
        x[static_cast<std::size_t>(e.col)] += Rat(e.value) * y[static_cast<std::size_t>(e.row)];
    return x;
}

// Exact solution padded with zeros outside the greedily chosen column set,
// together with the cofactor-style norm certificate.
struct BoundedSolution {
    std::vector<Rat> x;
    Rat inf_norm;
    Rat certified_bound;
};

// Row combination witnessing that no solution exists: lambda^T A = 0 while
// lambda^T b != 0.
struct InconsistencyCertificate {
    std::vector<Rat> lambda;
};

using SolveResult = std::variant<BoundedSolution, InconsistencyCertificate>;

namespace detail {

inline void vec_sub_scaled(std::vector<Rat>& dst, const Rat& f, const std::vector<Rat>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= f * src[i];
}

inline Rat inf_norm_of(const std::vector<Rat>& v) {
    Rat n = 0;
    for (const Rat& x : v) n = std::max(n, static_cast<Rat>(abs(x)));
    return n;
}

}  // namespace detail

// Gauss-Jordan elimination in natural row and column order: the first
// independent rows and their first nonzero columns form the invertible
// submatrix, every other coordinate of x is zero.  Row multipliers are
// tracked so an inconsistent system yields its certificate directly.
inline SolveResult solve_bounded(const SparseSignMatrix& A, const std::vector<Rat>& b) {
    if (static_cast<int>(b.size()) != A.rows)
        throw std::invalid_argument("solve_bounded: right-hand side has wrong length");
    const auto rows = static_cast<std::size_t>(A.rows);
    const auto cols = static_cast<std::size_t>(A.cols);
    std::vector<std::vector<Rat>> work(rows, std::vector<Rat>(cols, Rat(0)));
    for (const SignEntry& e : A.entries)
        work[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] = e.value;
    std::vector<std::vector<Rat>> mult(rows, std::vector<Rat>(rows, Rat(0)));
    for (std::size_t i = 0; i < rows; ++i) mult[i][i] = 1;
    std::vector<Rat> rhs = b;

    struct Pivot {
        std::size_t row;
        std::size_t col;
    };
    std::vector<Pivot> pivots;
    for (std::size_t i = 0; i < rows; ++i) {
        for (const Pivot& pv : pivots) {
            const Rat f = work[i][pv.col];
            if (f == 0) continue;
            detail::vec_sub_scaled(work[i], f, work[pv.row]);
            detail::vec_sub_scaled(mult[i], f, mult[pv.row]);
            rhs[i] -= f * rhs[pv.row];
        }
        std::size_t c = 0;
        while (c < cols && work[i][c] == 0) ++c;
        if (c == cols) {
            if (rhs[i] != 0) return InconsistencyCertificate{mult[i]};
            continue;
        }
        const Rat lead = work[i][c];
        for (Rat& v : work[i]) v /= lead;
        for (Rat& v : mult[i]) v /= lead;
        rhs[i] /= lead;
        for (const Pivot& pv : pivots) {
            const Rat f = work[pv.row][c];
            if (f == 0) continue;
            detail::vec_sub_scaled(work[pv.row], f, work[i]);
            detail::vec_sub_scaled(mult[pv.row], f, mult[i]);
            rhs[pv.row] -= f * rhs[i];
        }
        pivots.push_back({i, c});
    }

    BoundedSolution sol;
    sol.x.assign(cols, Rat(0));
    for (const Pivot& pv : pivots) sol.x[pv.col] = rhs[pv.row];
    if (matvec(A, sol.x) != b) throw std::logic_error("solve_bounded: residual is nonzero");
    sol.inf_norm = detail::inf_norm_of(sol.x);
    const int mn = std::min(A.rows, A.cols);
    if (mn == 0) {
        sol.certified_bound = 0;
    } else {
        const Int pk = pow(Int(A.p), static_cast<unsigned>(mn - 1));
        sol.certified_bound = Rat(mn) * Rat(pk) * detail::inf_norm_of(b);
    }
    if (sol.inf_norm > sol.certified_bound)
        throw std::logic_error("solve_bounded: certified bound violated");
    return sol;
}

// Simplicial complex given by its simplices per dimension, each written with
// strictly increasing vertex labels.  Face signs follow vertex-drop parity.
struct SimplicialComplex {
    std::vector<std::vector<std::vector<int>>> simplices;

    int dimension() const { return static_cast<int>(simplices.size()) - 1; }
    int count(int dim) const {
        if (dim < 0 || dim > dimension()) return 0;
        return static_cast<int>(simplices[static_cast<std::size_t>(dim)].size());
    }
};

inline SimplicialComplex make_complex(std::vector<std::vector<std::vector<int>>> by_dim) {
    while (!by_dim.empty() && by_dim.back().empty()) by_dim.pop_back();
    std::vector<std::map<std::vector<int>, int>> index(by_dim.size());
    for (std::size_t k = 0; k < by_dim.size(); ++k) {
        for (const auto& s : by_dim[k]) {
            if (s.size() != k + 1)
                throw std::invalid_argument("complex: simplex has wrong vertex count");
            for (std::size_t t = 0; t + 1 < s.size(); ++t)
                if (s[t] >= s[t + 1])
                    throw std::invalid_argument("complex: vertices must strictly increase");
            if (!index[k].emplace(s, static_cast<int>(index[k].size())).second)
                throw std::invalid_argument("complex: duplicate simplex");
        }
    }
    for (std::size_t k = 1; k < by_dim.size(); ++k) {
        for (const auto& s : by_dim[k]) {
            std::vector<int> face(s.size() - 1);
            for (std::size_t j = 0; j < s.size(); ++j) {
                face.clear();
                for (std::size_t t = 0; t < s.size(); ++t)
                    if (t != j) face.push_back(s[t]);
                if (index[k - 1].find(face) == index[k - 1].end())
                    throw std::invalid_argument("complex: missing face of a simplex");
            }
        }
    }
    // Double vertex drops cancel in pairs once all faces are present.
    for (std::size_t k = 2; k < by_dim.size(); ++k) {
        for (const auto& s : by_dim[k]) {
            std::map<std::vector<int>, int> acc;
            for (std::size_t j = 0; j < s.size(); ++j) {
                std::vector<int> face;
                for (std::size_t t = 0; t < s.size(); ++t)
                    if (t != j) face.push_back(s[t]);
                const int outer = j % 2 == 0 ? 1 : -1;
                for (std::size_t u = 0; u < face.size(); ++u) {
                    std::vector<int> sub;
                    for (std::size_t t = 0; t < face.size(); ++t)
                        if (t != u) sub.push_back(face[t]);
                    acc[sub] += outer * (u % 2 == 0 ? 1 : -1);
                }
            }
            for (const auto& [sub, v] : acc) {
                (void)sub;
                if (v != 0) throw std::logic_error("complex: boundary of boundary is nonzero");
            }
        }
    }
    return SimplicialComplex{std::move(by_dim)};
}

// Matrix of the coboundary map from (q-1)-cochains to q-cochains; each row has
// exactly q+1 nonzeros, one per face of the indexing q-simplex.
inline SparseSignMatrix coboundary_matrix(const SimplicialComplex& K, int q) {
    if (q < 1 || q > K.dimension() || K.count(q) == 0 || K.count(q - 1) == 0)
        throw std::invalid_argument("coboundary_matrix: empty dimension");
    std::map<std::vector<int>, int> face_index;
    const auto& faces = K.simplices[static_cast<std::size_t>(q - 1)];
    for (std::size_t i = 0; i < faces.size(); ++i) face_index[faces[i]] = static_cast<int>(i);
    std::vector<SignEntry> entries;
    const auto& tops = K.simplices[static_cast<std::size_t>(q)];
    for (std::size_t r = 0; r < tops.size(); ++r) {
        const auto& s = tops[r];
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::vector<int> face;
            for (std::size_t t = 0; t < s.size(); ++t)
                if (t != j) face.push_back(s[t]);
            entries.push_back(SignEntry{static_cast<int>(r), face_index.at(face),
                                        j % 2 == 0 ? 1 : -1});
        }
    }
    return make_sign_matrix(static_cast<int>(tops.size()), static_cast<int>(faces.size()),
                            std::move(entries));
}

// Primitive of a q-coboundary with the certified norm bound; a cochain that is
// not a coboundary comes back as the certificate pairing nontrivially with it.
inline SolveResult coboundary_primitive(const SimplicialComplex& K, int q,
                                        const std::vector<Rat>& b) {
    const SparseSignMatrix delta = coboundary_matrix(K, q);
    return solve_bounded(delta, b);
}

}  // namespace milnor
