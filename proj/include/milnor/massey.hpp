#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "milnor/dga.hpp"
#include "milnor/rational.hpp"

namespace milnor {

// Closed chain together with its degree.  The zero chain is allowed and keeps
// whatever degree it was tagged with.
struct CohomClass {
    int degree = 0;
    Chain representative;
};

inline CohomClass cohom_class(const Dga& D, const Chain& rep) {
    if (!chain_is_zero(apply_diff(D, rep)))
        throw std::invalid_argument("cohom_class: representative is not closed");
    auto deg = chain_degree(D, rep);
    return CohomClass{deg ? *deg : 0, rep};
}

inline bool class_is_zero(const Dga& D, const CohomClass& c) {
    detail::DiffSolver below(D, c.degree - 1);
    return below.solve(c.representative).has_value();
}

inline bool classes_equal(const Dga& D, const CohomClass& a, const CohomClass& b) {
    if (a.degree != b.degree) return false;
    Chain diff = a.representative;
    chain_add_scaled(diff, -1, b.representative);
    return class_is_zero(D, CohomClass{a.degree, std::move(diff)});
}

// Degree in which the product of classes of the given degrees lives.
inline int massey_degree(const std::vector<int>& q) {
    if (q.size() < 2) throw std::invalid_argument("massey_degree: need at least two degrees");
    int s = 0;
    for (int x : q) s += x;
    return s - (static_cast<int>(q.size()) - 2);
}

// Cochains a[i..j] for 1 <= i <= j <= count, (i,j) != (1,count), with the
// diagonal holding the input representatives.  Invariant: for every stored
// interval with i < j, d a[i..j] equals the signed sum of products of the
// shorter intervals that split it.
struct DefiningSystem {
    int count = 0;
    std::map<std::pair<int, int>, Chain> cochain;

    const Chain& at(int i, int j) const { return cochain.at({i, j}); }
};

struct Obstruction {
    int i = 0;
    int j = 0;
    CohomClass cls;
};

using SystemResult = std::variant<DefiningSystem, Obstruction>;

namespace detail {

inline const DiffSolver& solver_for(const Dga& D, int degree, std::map<int, DiffSolver>& cache) {
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, DiffSolver(D, degree)).first;
    return it->second;
}

inline int interval_degree(const std::vector<CohomClass>& u, int i, int j) {
    int s = 0;
    for (int t = i; t <= j; ++t) s += u[static_cast<std::size_t>(t - 1)].degree;
    return s - (j - i);
}

inline Chain interval_rhs(const Dga& D, const std::vector<CohomClass>& u,
                          const DefiningSystem& sys, int i, int j) {
    Chain rhs = zero_chain(D);
    for (int k = i; k < j; ++k) {
        const Rat sign = interval_degree(u, i, k) % 2 == 0 ? 1 : -1;
        chain_add_scaled(rhs, sign, multiply(D, sys.at(i, k), sys.at(k + 1, j)));
    }
    return rhs;
}

// Builds the system interval by interval, shortest first; `shift` may add a
// closed cochain to each solved intermediate.  Stops at the first interval
// whose right-hand side is not exact.
template <typename Shift>
SystemResult build_system(const Dga& D, const std::vector<CohomClass>& u,
                          std::map<int, DiffSolver>& solvers, Shift&& shift) {
    const int d = static_cast<int>(u.size());
    if (d < 2) throw std::invalid_argument("massey: need at least two classes");
    for (const auto& c : u) {
        if (static_cast<int>(c.representative.size()) != D.dim())
            throw std::invalid_argument("massey: representative has wrong dimension");
        if (!chain_is_zero(apply_diff(D, c.representative)))
            throw std::invalid_argument("massey: input class is not closed");
        auto deg = chain_degree(D, c.representative);
        if (deg && *deg != c.degree)
            throw std::invalid_argument("massey: class degree disagrees with representative");
    }
    DefiningSystem sys;
    sys.count = d;
    for (int i = 1; i <= d; ++i) sys.cochain[{i, i}] = u[static_cast<std::size_t>(i - 1)].representative;
    for (int gap = 1; gap <= d - 2; ++gap) {
        for (int i = 1; i + gap <= d; ++i) {
            const int j = i + gap;
            Chain rhs = interval_rhs(D, u, sys, i, j);
            if (!chain_is_zero(apply_diff(D, rhs)))
                throw std::logic_error("massey: interval right-hand side is not closed");
            const int deg = interval_degree(u, i, j);
            const DiffSolver& sv = solver_for(D, deg, solvers);
            std::optional<Chain> a = sv.solve(rhs);
            if (!a) return Obstruction{i, j, CohomClass{deg + 1, sv.reduce_mod_image(rhs)}};
            shift(deg, *a);
            sys.cochain[{i, j}] = std::move(*a);
        }
    }
    return sys;
}

}  // namespace detail

inline SystemResult defining_system(const Dga& D, const std::vector<CohomClass>& u) {
    std::map<int, detail::DiffSolver> solvers;
    return detail::build_system(D, u, solvers, [](int, Chain&) {});
}

// Signed sum of the two-block splits of the full interval; closed whenever the
// defining system satisfies its invariant.
inline Chain product_chain(const Dga& D, const std::vector<CohomClass>& u,
                           const DefiningSystem& sys) {
    Chain w = zero_chain(D);
    for (int k = 1; k < sys.count; ++k) {
        const Rat sign = detail::interval_degree(u, 1, k) % 2 == 0 ? 1 : -1;
        chain_add_scaled(w, sign, multiply(D, sys.at(1, k), sys.at(k + 1, sys.count)));
    }
    return w;
}

struct MasseyOutcome {
    std::optional<CohomClass> cls;
    std::optional<Obstruction> obstruction;
    DefiningSystem system;
    std::uint64_t seed = 0;
    int perturbations_requested = 0;
    int perturbations_same = 0;

    bool defined() const { return cls.has_value(); }
};

// The product class of the deterministic defining system, plus evidence for
// its uniqueness: each trial re-solves the system with random closed shifts
// (integer coefficients in [-3,3] over the kernel basis) added to every
// intermediate cochain and compares the resulting class.
inline MasseyOutcome massey_product(const Dga& D, const std::vector<CohomClass>& u,
                                    int perturbations = 100, std::uint64_t seed = 0) {
    std::map<int, detail::DiffSolver> solvers;
    MasseyOutcome out;
    out.seed = seed;
    out.perturbations_requested = perturbations;
    SystemResult base = detail::build_system(D, u, solvers, [](int, Chain&) {});
    if (std::holds_alternative<Obstruction>(base)) {
        out.obstruction = std::get<Obstruction>(std::move(base));
        return out;
    }
    out.system = std::get<DefiningSystem>(std::move(base));
    Chain w = product_chain(D, u, out.system);
    if (!chain_is_zero(apply_diff(D, w)))
        throw std::logic_error("massey: product chain is not closed");
    std::vector<int> degs;
    for (const auto& c : u) degs.push_back(c.degree);
    const int wdeg = massey_degree(degs);
    const detail::DiffSolver& sv = detail::solver_for(D, wdeg - 1, solvers);
    const Chain w_reduced = sv.reduce_mod_image(w);
    out.cls = CohomClass{wdeg, std::move(w)};

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int t = 0; t < perturbations; ++t) {
        SystemResult shifted =
            detail::build_system(D, u, solvers, [&](int deg, Chain& val) {
                for (const Chain& z : detail::solver_for(D, deg, solvers).kernel_basis())
                    chain_add_scaled(val, Rat(coeff(rng)), z);
            });
        if (std::holds_alternative<Obstruction>(shifted)) continue;
        Chain w2 = product_chain(D, u, std::get<DefiningSystem>(shifted));
        if (sv.reduce_mod_image(w2) == w_reduced) ++out.perturbations_same;
    }
    return out;
}

// Evaluates a functional, given as a coefficient vector over the basis, on the
// product representative.  The functional must annihilate every exact chain in
// the product degree, so the value only depends on the class.
inline Rat coefficient_extract(const Dga& D, const MasseyOutcome& outcome, const Chain& dual) {
    if (!outcome.defined())
        throw std::invalid_argument("coefficient_extract: outcome carries no class");
    if (static_cast<int>(dual.size()) != D.dim())
        throw std::invalid_argument("coefficient_extract: functional has wrong dimension");
    const int deg = outcome.cls->degree;
    for (int i = 0; i < D.dim(); ++i) {
        if (D.degrees[static_cast<std::size_t>(i)] != deg - 1) continue;
        Rat v = 0;
        const Chain img = apply_diff(D, basis_chain(D, i));
        for (int t = 0; t < D.dim(); ++t) v += dual[static_cast<std::size_t>(t)] * img[static_cast<std::size_t>(t)];
        if (v != 0)
            throw std::invalid_argument(
                "coefficient_extract: functional does not annihilate exact chains");
    }
    Rat v = 0;
    for (int t = 0; t < D.dim(); ++t)
        v += dual[static_cast<std::size_t>(t)] * outcome.cls->representative[static_cast<std::size_t>(t)];
    return v;
}

// Six degree-1 generators x1,x2,x3,y1,y2,y3 with d x_i = 0 and d y_i the
// product of the other two x's (cyclic, y2 picking up the sign from sorting),
// truncated above degree 3.  The triple product of the x classes is defined
// and nonzero here; all cup products x_i x_j are exact.
inline Dga borromean_fixture() {
    return exterior_algebra({"x1", "x2", "x3", "y1", "y2", "y3"},
                            {{},
                             {},
                             {},
                             {ExteriorDiffTerm{1, 2, Rat(1)}},
                             {ExteriorDiffTerm{0, 2, Rat(-1)}},
                             {ExteriorDiffTerm{0, 1, Rat(1)}}},
                            3);
}

}  // namespace milnor
