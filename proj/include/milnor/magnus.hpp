#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "milnor/free_group.hpp"
#include "milnor/rational.hpp"

namespace milnor {

// Monomial X_{i_1}...X_{i_k} as its index sequence; empty = constant term.
using Monomial = std::vector<int>;

inline bool has_repeated_index(const Monomial& m) {
    Monomial s = m;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
}

// Truncated series in noncommuting X_1..X_rank with integer coefficients.
// Invariants: no zero coefficients stored, monomial lengths <= maxdeg,
// indices in 1..rank.  squarefree_mode kills repeated-index monomials,
// i.e. the series lives in the quotient housing the free Milnor group.
struct NcSeries {
    int rank = 0;
    int maxdeg = 0;
    bool squarefree_mode = false;
    std::map<Monomial, Int> terms;

    friend bool operator==(const NcSeries&, const NcSeries&) = default;
};

inline NcSeries series_one(int rank, int maxdeg, bool squarefree = false) {
    if (maxdeg < 1) throw std::invalid_argument("maxdeg must be >= 1");
    NcSeries s{rank, maxdeg, squarefree, {}};
    s.terms[{}] = 1;
    return s;
}

namespace detail {
inline void series_add_term(NcSeries& s, const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto it = s.terms.find(m);
    if (it == s.terms.end()) {
        s.terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) s.terms.erase(it);
    }
}
}  // namespace detail

inline NcSeries series_mul(const NcSeries& a, const NcSeries& b) {
    if (a.rank != b.rank || a.maxdeg != b.maxdeg || a.squarefree_mode != b.squarefree_mode)
        throw std::invalid_argument("series shape mismatch in series_mul");
    NcSeries out{a.rank, a.maxdeg, a.squarefree_mode, {}};
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            if (ma.size() + mb.size() > static_cast<std::size_t>(a.maxdeg)) continue;
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            if (a.squarefree_mode && has_repeated_index(m)) continue;
            detail::series_add_term(out, m, ca * cb);
        }
    }
    return out;
}

inline Int coefficient(const NcSeries& s, const Monomial& I) {
    if (I.size() > static_cast<std::size_t>(s.maxdeg))
        throw std::invalid_argument("coefficient: monomial length exceeds truncation");
    for (int i : I)
        if (i < 1 || i > s.rank) throw std::invalid_argument("coefficient: index out of range");
    auto it = s.terms.find(I);
    return it == s.terms.end() ? Int(0) : it->second;
}

namespace detail {
// (1 + X_g)^e truncated, e of either sign; the inverse case is the finite
// geometric series in disguise since binomial(e, j) handles negative e.
inline NcSeries run_series(int rank, int maxdeg, bool squarefree, int g, const Int& e) {
    NcSeries s = series_one(rank, maxdeg, squarefree);
    const int top = squarefree ? 1 : maxdeg;
    Monomial m;
    for (int j = 1; j <= top; ++j) {
        m.push_back(g);
        series_add_term(s, m, binomial(e, static_cast<unsigned long>(j)));
    }
    return s;
}
}  // namespace detail

// Magnus expansion e_i -> 1 + X_i, e_i^{-1} -> 1 - X_i + X_i^2 - ...,
// truncated above maxdeg.  Runs of a single generator are expanded through
// one binomial factor each, so high-exponent words stay cheap.
inline NcSeries expand(const Word& w, int maxdeg, bool squarefree = false) {
    NcSeries acc = series_one(w.rank, maxdeg, squarefree);
    std::size_t i = 0;
    while (i < w.letters.size()) {
        std::size_t j = i;
        while (j < w.letters.size() && w.letters[j].gen == w.letters[i].gen &&
               w.letters[j].sign == w.letters[i].sign)
            ++j;
        Int e = Int(j - i) * w.letters[i].sign;
        acc = series_mul(acc, detail::run_series(w.rank, maxdeg, squarefree, w.letters[i].gen, e));
        i = j;
    }
    return acc;
}

inline NcSeries reduced_expand(const Word& w, int maxdeg) { return expand(w, maxdeg, true); }

// Longitude system: longitudes[i-1] is the i-th longitude written in the
// meridian generators e_1..e_r.  m is the ambient dimension and only feeds
// sign/regime bookkeeping downstream (classical links have m = 3).
struct LinkSystem {
    int r = 0;
    int m = 3;
    std::vector<Word> longitudes;
};

inline LinkSystem make_link_system(int r, int m, std::vector<Word> longitudes) {
    if (r < 1) throw std::invalid_argument("LinkSystem needs r >= 1");
    if (longitudes.size() != static_cast<std::size_t>(r))
        throw std::invalid_argument("LinkSystem needs exactly r longitudes");
    for (const Word& w : longitudes)
        if (w.rank != r) throw std::invalid_argument("longitude rank must equal r");
    return LinkSystem{r, m, std::move(longitudes)};
}

struct MuResult {
    Int value;
    bool defined = false;
    // Lower-order index subsequences with nonvanishing coefficient,
    // sorted by length then lexicographically.
    std::vector<std::vector<int>> obstructions;
};

namespace detail {
// Contiguous windows of length 2..len-1; cyclic windows too when the index
// sequence has a repeat (mirroring the repeated-index definedness hypothesis).
inline std::set<std::vector<int>> lower_subsequences(const std::vector<int>& I) {
    std::set<std::vector<int>> out;
    const std::size_t d = I.size();
    auto add_windows = [&](const std::vector<int>& seq) {
        for (std::size_t len = 2; len + 1 <= d; ++len)
            for (std::size_t start = 0; start + len <= seq.size(); ++start)
                out.insert(std::vector<int>(seq.begin() + start, seq.begin() + start + len));
    };
    add_windows(I);
    if (has_repeated_index(I)) {
        std::vector<int> rot = I;
        for (std::size_t k = 1; k < d; ++k) {
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            add_windows(rot);
        }
    }
    return out;
}
}  // namespace detail

// mu(i_1..i_d) = coefficient of X_{i_1}...X_{i_{d-1}} in the expansion of
// longitude i_d.  The full integer is reported together with the list of
// nonvanishing lower-order coefficients; no residue mod gcd is taken.
inline MuResult mu_bar(const LinkSystem& L, const std::vector<int>& I, int maxdeg = 0) {
    const std::size_t d = I.size();
    if (d < 2) throw std::invalid_argument("mu_bar needs at least 2 indices");
    for (int i : I)
        if (i < 1 || i > L.r) throw std::invalid_argument("mu_bar: index out of range");
    if (I.front() == I.back())
        throw std::invalid_argument("mu_bar: first and last index must differ");
    if (maxdeg == 0) maxdeg = static_cast<int>(d) + 1;
    if (maxdeg < static_cast<int>(d) - 1)
        throw std::invalid_argument("mu_bar: truncation below len(I)-1");

    MuResult res;
    {
        NcSeries s = expand(L.longitudes[I.back() - 1], maxdeg);
        res.value = coefficient(s, Monomial(I.begin(), I.end() - 1));
    }
    const int low_deg = std::max<int>(1, static_cast<int>(d) - 2);
    std::map<int, NcSeries> cache;
    for (const std::vector<int>& J : detail::lower_subsequences(I)) {
        const int last = J.back();
        auto it = cache.find(last);
        if (it == cache.end())
            it = cache.emplace(last, expand(L.longitudes[last - 1], low_deg)).first;
        if (coefficient(it->second, Monomial(J.begin(), J.end() - 1)) != 0)
            res.obstructions.push_back(J);
    }
    std::sort(res.obstructions.begin(), res.obstructions.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    res.defined = res.obstructions.empty();
    return res;
}

// Multiset of interleavings of I and J where slots may overlap on equal
// indices (each overlap shortens the result).  For disjoint index sets this
// is the plain shuffle multiset.  Magnus coefficient functionals are exactly
// multiplicative against this product, which is what shuffle_residual probes.
inline std::map<Monomial, Int> shuffles(const std::vector<int>& I, const std::vector<int>& J) {
    const std::size_t n = I.size(), k = J.size();
    // dp[i][j] = interleavings of the first i letters of I with the first j of J.
    std::vector<std::vector<std::map<Monomial, Int>>> dp(
        n + 1, std::vector<std::map<Monomial, Int>>(k + 1));
    dp[0][0][{}] = 1;
    auto extend = [](std::map<Monomial, Int>& dst, const std::map<Monomial, Int>& src, int letter) {
        for (const auto& [m, mult] : src) {
            Monomial ext = m;
            ext.push_back(letter);
            dst[ext] += mult;
        }
    };
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= k; ++j) {
            if (i + j == 0) continue;
            auto& cell = dp[i][j];
            if (i > 0) extend(cell, dp[i - 1][j], I[i - 1]);
            if (j > 0) extend(cell, dp[i][j - 1], J[j - 1]);
            if (i > 0 && j > 0 && I[i - 1] == J[j - 1]) extend(cell, dp[i - 1][j - 1], I[i - 1]);
        }
    }
    return dp[n][k];
}

// c(I)c(J) - sum over interleavings; identically 0 on every expand() output.
inline Int shuffle_residual(const NcSeries& s, const std::vector<int>& I,
                            const std::vector<int>& J) {
    if (I.size() + J.size() > static_cast<std::size_t>(s.maxdeg))
        throw std::invalid_argument("shuffle_residual: len(I)+len(J) exceeds truncation");
    Int residual = coefficient(s, I) * coefficient(s, J);
    for (const auto& [m, mult] : shuffles(I, J)) residual -= mult * coefficient(s, m);
    return residual;
}

struct AdditivityCheck {
    bool holds = false;    // coefficient(uv, I) == coefficient(u, I) + coefficient(v, I)
    bool vacuous = false;  // hypothesis violated; holds reported true by convention
};

// When every proper contiguous subsequence of I has zero coefficient in both
// factors, the I-coefficient is additive under concatenation.
inline AdditivityCheck concat_additivity_check(const Word& u, const Word& v,
                                               const std::vector<int>& I) {
    if (I.empty()) throw std::invalid_argument("concat_additivity_check: empty index sequence");
    const int D = static_cast<int>(I.size());
    NcSeries su = expand(u, D), sv = expand(v, D);
    for (std::size_t len = 1; len < I.size(); ++len) {
        for (std::size_t start = 0; start + len <= I.size(); ++start) {
            Monomial sub(I.begin() + start, I.begin() + start + len);
            if (coefficient(su, sub) != 0 || coefficient(sv, sub) != 0)
                return AdditivityCheck{true, true};
        }
    }
    Int lhs = coefficient(expand(concat(u, v), D), I);
    Int rhs = coefficient(su, I) + coefficient(sv, I);
    return AdditivityCheck{lhs == rhs, false};
}

}  // namespace milnor
