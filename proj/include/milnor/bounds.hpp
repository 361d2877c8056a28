#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "free_group.hpp"
#include "magnus.hpp"
#include "rational.hpp"

namespace milnor {

// Integer powers of rationals.  Negative exponents invert, so the base must
// be nonzero for those.
inline Rat rat_pow(const Rat& x, const Int& e) {
    if (e == 0) return Rat(1);
    const bool neg = e < 0;
    if (x == 0) {
        if (neg) throw std::invalid_argument("rat_pow: zero base with negative exponent");
        return Rat(0);
    }
    Int a = neg ? Int(-e) : e;
    if (a > std::numeric_limits<unsigned>::max())
        throw std::invalid_argument("rat_pow: exponent too large");
    const unsigned k = a.convert_to<unsigned>();
    const Int n = pow(Int(numerator(x)), k);
    const Int d = pow(Int(denominator(x)), k);
    return neg ? Rat(d) / Rat(n) : Rat(n) / Rat(d);
}

// log2 of a positive integer to double precision, safe for values far beyond
// double range.  Display use only; every comparison in this header is exact.
inline double log2_estimate(const Int& v) {
    if (v <= 0) throw std::invalid_argument("log2_estimate: value must be positive");
    const unsigned b = msb(v);
    if (b <= 52) return std::log2(v.convert_to<double>());
    const unsigned shift = b - 52;
    const Int top = v >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

inline double log2_estimate(const Rat& v) {
    if (v <= 0) throw std::invalid_argument("log2_estimate: value must be positive");
    return log2_estimate(Int(numerator(v))) - log2_estimate(Int(denominator(v)));
}

namespace detail {

// Factorial-tail bounds lo <= e <= hi with hi - lo = 2/(K+1)!.
inline std::pair<Rat, Rat> e_bounds(int terms) {
    Rat lo = 0;
    Int fact = 1;
    for (int k = 0; k <= terms; ++k) {
        if (k > 0) fact *= k;
        lo += Rat(1) / Rat(fact);
    }
    const Rat tail = Rat(2) / Rat(fact * (terms + 1));
    return {lo, lo + tail};
}

}  // namespace detail

// Sign of e^E - r for rational E and r, computed exactly.  e^E = r can only
// happen at E = 0, so interval refinement on e always separates the two
// sides after finitely many steps.
inline int compare_exp_rational(const Rat& E, const Rat& r) {
    if (r <= 0) return 1;
    if (E == 0) return r == 1 ? 0 : (r < 1 ? 1 : -1);

    Int a = numerator(E);
    const Int b = denominator(E);
    bool flipped = false;
    Rat target = r;
    if (a < 0) {
        a = -a;
        target = Rat(1) / r;
        flipped = true;
    }
    // Now deciding e^{a/b} vs target with a, b > 0, i.e. e^a vs target^b.
    const Rat tb = rat_pow(target, b);
    if (tb <= 1) return flipped ? -1 : 1;
    // 2 < e < 4 sandwiches e^a between 2^a and 4^a.  Bit lengths settle any
    // comparison that is off by more than a factor of two per unit exponent,
    // so enormous exponents never reach the series below.
    const Int tn = numerator(tb), td = denominator(tb);
    const Int upper_log2 = Int(msb(tn)) + 1 - Int(msb(td));  // tb < 2^this
    const Int lower_log2 = Int(msb(tn)) - Int(msb(td)) - 1;  // tb > 2^this
    if (a >= upper_log2) return flipped ? -1 : 1;
    if (2 * a <= lower_log2) return flipped ? 1 : -1;
    for (int terms = 4; terms <= (1 << 12); terms *= 2) {
        const auto [lo, hi] = detail::e_bounds(terms);
        if (rat_pow(lo, a) > tb) return flipped ? -1 : 1;
        if (rat_pow(hi, a) < tb) return flipped ? 1 : -1;
    }
    throw std::logic_error("compare_exp_rational: refinement failed to separate");
}

// A bound is either an exact rational or exp(E) for exact rational E.  The
// exponential form is kept symbolic; materializing e^E would be both inexact
// and astronomically large.
struct BoundValue {
    bool is_exponential = false;
    Rat value;             // meaningful when finite
    Rat natural_exponent;  // meaningful when exponential

    static BoundValue finite(const Rat& v) { return {false, v, 0}; }
    static BoundValue exponential(const Rat& e) { return {true, 0, e}; }
};

inline int compare_bound(const BoundValue& a, const BoundValue& b) {
    if (!a.is_exponential && !b.is_exponential)
        return a.value == b.value ? 0 : (a.value < b.value ? -1 : 1);
    if (a.is_exponential && b.is_exponential) {
        if (a.natural_exponent == b.natural_exponent) return 0;
        return a.natural_exponent < b.natural_exponent ? -1 : 1;
    }
    if (a.is_exponential) return compare_exp_rational(a.natural_exponent, b.value);
    return -compare_exp_rational(b.natural_exponent, a.value);
}

inline int compare_bound(const BoundValue& a, const Rat& r) {
    return compare_bound(a, BoundValue::finite(r));
}

inline double log2_estimate(const BoundValue& v) {
    if (!v.is_exponential) return log2_estimate(v.value);
    // log2(e^E) = E / ln 2.
    const double E = numerator(v.natural_exponent).convert_to<double>() /
                     denominator(v.natural_exponent).convert_to<double>();
    return E * 1.4426950408889634;
}

// A d-component link of spheres S^{p_1} x ... inside S^m, plus the index
// sequence of the invariant under discussion.  component_dims[i] is the
// dimension of sphere i+1; indices entries reference components 1-based.
struct LinkDimensions {
    int m = 0;
    std::vector<int> component_dims;
    std::vector<int> indices;
};

inline LinkDimensions make_link_dimensions(int m, std::vector<int> component_dims,
                                           std::vector<int> indices) {
    if (m < 3) throw std::invalid_argument("link dimensions: need m >= 3");
    if (component_dims.empty())
        throw std::invalid_argument("link dimensions: need at least one component");
    for (int p : component_dims)
        if (p < 1 || p > m - 2)
            throw std::invalid_argument("link dimensions: component dims must lie in [1, m-2]");
    if (indices.empty()) throw std::invalid_argument("link dimensions: empty index sequence");
    for (int i : indices)
        if (i < 1 || i > static_cast<int>(component_dims.size()))
            throw std::invalid_argument("link dimensions: index out of range");
    return LinkDimensions{m, std::move(component_dims), std::move(indices)};
}

inline int codim_q(const LinkDimensions& L, int component) {
    return L.m - L.component_dims[component - 1] - 1;
}

// The invariant lives in degree zero exactly when the dimensions balance.
// Both forms below are the same identity written through p and through
// q = m - p - 1; check_dimension reports them separately so a disagreement
// would expose an arithmetic slip.
struct DimensionCheck {
    bool p_form = false;
    bool q_form = false;
    bool holds() const { return p_form && q_form; }
};

inline DimensionCheck check_dimension(const LinkDimensions& L) {
    const int d = static_cast<int>(L.indices.size());
    Int p_sum = 0, q_sum = 0;
    for (int i : L.indices) {
        p_sum += L.component_dims[i - 1];
        q_sum += codim_q(L, i);
    }
    DimensionCheck c;
    c.p_form = p_sum == Int(L.m - 2) * (d - 1) + 1;
    c.q_form = q_sum - (d - 2) == L.m - 1;
    return c;
}

enum class RegimeKind {
    Linking,                // d = 2
    PolynomialDistinct,     // distinct indices, some referenced dim = 1
    PolynomialRepeated,     // repeated indices, some referenced dim = 1
    Exponential,            // every referenced dim >= 2
    BilipschitzPolynomial,  // distinct indices, bilipschitz constant available
};

inline std::string regime_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::Linking: return "linking";
        case RegimeKind::PolynomialDistinct: return "polynomial-distinct";
        case RegimeKind::PolynomialRepeated: return "polynomial-repeated";
        case RegimeKind::Exponential: return "exponential";
        case RegimeKind::BilipschitzPolynomial: return "bilipschitz-polynomial";
    }
    throw std::logic_error("regime_name: unknown kind");
}

// tau_exponent is the power of 1/tau in the bound.  For the exponential
// regime it sits inside exp(); everywhere else the bound is a plain power.
// l_exponent is the power of the bilipschitz constant, zero elsewhere.
struct Regime {
    RegimeKind kind = RegimeKind::Linking;
    int m = 0;
    int d = 0;
    Int tau_exponent = 0;
    Int l_exponent = 0;
};

namespace detail {

inline Regime make_regime(RegimeKind kind, int m, int d) {
    Regime r;
    r.kind = kind;
    r.m = m;
    r.d = d;
    switch (kind) {
        case RegimeKind::Linking:
            r.tau_exponent = m + 1;
            break;
        case RegimeKind::PolynomialDistinct:
            r.tau_exponent = Int(m + 1) * (d - 1);
            break;
        case RegimeKind::PolynomialRepeated:
            r.tau_exponent = Int(2) * (m + 1) * (d - 1);
            break;
        case RegimeKind::Exponential:
            r.tau_exponent = m;
            break;
        case RegimeKind::BilipschitzPolynomial:
            r.tau_exponent = Int(m) + 2 * d - 3;
            r.l_exponent = Int(2 * m - 5) * (d - 2);
            break;
    }
    return r;
}

}  // namespace detail

inline Regime classify_regime(const LinkDimensions& L) {
    const int d = static_cast<int>(L.indices.size());
    if (d < 2) throw std::invalid_argument("classify_regime: need at least two indices");
    if (!check_dimension(L).holds())
        throw std::invalid_argument("classify_regime: dimension constraint fails");
    if (d == 2) return detail::make_regime(RegimeKind::Linking, L.m, 2);

    bool has_dim_one = false;
    for (int i : L.indices) has_dim_one |= L.component_dims[i - 1] == 1;
    const std::set<int> uniq(L.indices.begin(), L.indices.end());
    const bool distinct = static_cast<int>(uniq.size()) == d;

    if (has_dim_one)
        return detail::make_regime(
            distinct ? RegimeKind::PolynomialDistinct : RegimeKind::PolynomialRepeated, L.m, d);
    return detail::make_regime(RegimeKind::Exponential, L.m, d);
}

// Separate entry point: the bilipschitz bound is an extra option for the
// distinct-index case, not a branch of the dichotomy above.
inline Regime bilipschitz_regime(const LinkDimensions& L) {
    const int d = static_cast<int>(L.indices.size());
    if (d < 3) throw std::invalid_argument("bilipschitz_regime: need at least three indices");
    if (!check_dimension(L).holds())
        throw std::invalid_argument("bilipschitz_regime: dimension constraint fails");
    const std::set<int> uniq(L.indices.begin(), L.indices.end());
    if (static_cast<int>(uniq.size()) != d)
        throw std::invalid_argument("bilipschitz_regime: indices must be distinct");
    Regime r = detail::make_regime(RegimeKind::BilipschitzPolynomial, L.m, d);
    // Under the dimension constraint, sum of (q_i + 1) collapses to the
    // stored tau exponent; a mismatch would mean the formulas drifted apart.
    Int s = 0;
    for (int i : L.indices) s += codim_q(L, i) + 1;
    if (s != r.tau_exponent)
        throw std::logic_error("bilipschitz_regime: exponent cross-check failed");
    return r;
}

struct BoundConstants {
    Rat c_m = 1;   // linking-regime constant
    Rat c_md = 1;  // constant for every other regime
};

// Upper bound for |invariant| at thickness tau.  bilip is the bilipschitz
// constant of the components and is consumed only by the bilipschitz regime.
inline BoundValue upper_bound(const Regime& regime, const Rat& tau,
                              const std::optional<Rat>& bilip = std::nullopt,
                              const BoundConstants& constants = {}) {
    if (!(tau > 0) || tau > 1)
        throw std::invalid_argument("upper_bound: tau must lie in (0, 1]");
    if (constants.c_m <= 0 || constants.c_md <= 0)
        throw std::invalid_argument("upper_bound: constants must be positive");
    const Rat inv = Rat(1) / tau;
    switch (regime.kind) {
        case RegimeKind::Linking:
            return BoundValue::finite(constants.c_m * rat_pow(inv, regime.tau_exponent));
        case RegimeKind::PolynomialDistinct:
        case RegimeKind::PolynomialRepeated:
            return BoundValue::finite(constants.c_md * rat_pow(inv, regime.tau_exponent));
        case RegimeKind::Exponential:
            return BoundValue::exponential(constants.c_md * rat_pow(inv, regime.tau_exponent));
        case RegimeKind::BilipschitzPolynomial: {
            if (!bilip) throw std::invalid_argument("upper_bound: bilipschitz constant required");
            if (*bilip < 1)
                throw std::invalid_argument("upper_bound: bilipschitz constant must be >= 1");
            return BoundValue::finite(constants.c_md * rat_pow(inv, regime.tau_exponent) *
                                      rat_pow(*bilip, regime.l_exponent));
        }
    }
    throw std::logic_error("upper_bound: unknown regime");
}

enum class FamilyKind { Polynomial, Exponential };

namespace detail {

// exp-family values need n^m bits each; cap mirrors the word-length cap so
// runaway requests fail loudly instead of exhausting memory.
inline constexpr long family_bit_cap = 1L << 26;

}  // namespace detail

// Invariant value realized by the explicit link families at lattice
// parameter n (thickness comparable to 1/n).  The polynomial family uses
// d - 1 components of dimension m - 2 and one of dimension 1; the
// exponential family needs codimension > 2 on at least two components,
// which forces m >= 5 and d >= 3.
inline Int example_family_value(FamilyKind kind, int m, int d, int n) {
    if (n < 1) throw std::invalid_argument("example_family_value: need n >= 1");
    if (kind == FamilyKind::Polynomial) {
        if (m < 3 || d < 2)
            throw std::invalid_argument("example_family_value: polynomial family needs m >= 3, d >= 2");
        return pow(Int(n), static_cast<unsigned long>((m + 1) * (d - 1)));
    }
    if (m < 5 || d < 3)
        throw std::invalid_argument("example_family_value: exponential family needs m >= 5, d >= 3");
    const Int bits = pow(Int(n), static_cast<unsigned long>(m));
    if (bits > detail::family_bit_cap)
        throw std::length_error("example_family_value: value would exceed the bit cap");
    return Int(1) << bits.convert_to<unsigned long>();
}

struct DichotomyRow {
    int n = 0;
    Rat tau;
    std::optional<Int> poly_value;
    std::optional<Int> exp_value;
    BoundValue poly_bound;
    BoundValue exp_bound;
    bool poly_consistent = true;
    bool exp_consistent = true;
};

struct DichotomyTable {
    int m = 0;
    int d = 0;
    bool poly_applies = false;
    bool exp_applies = false;
    std::vector<DichotomyRow> rows;
    // First n whose exponential family value beats the polynomial-regime
    // bound; past this point no polynomial bound with these constants can
    // hold for the exponential family.
    std::optional<int> crossover;
};

inline DichotomyTable dichotomy_table(int m, int d, int n_min, int n_max,
                                      const BoundConstants& constants = {}) {
    if (m < 3 || d < 2) throw std::invalid_argument("dichotomy_table: need m >= 3, d >= 2");
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("dichotomy_table: bad n range");
    DichotomyTable t;
    t.m = m;
    t.d = d;
    t.poly_applies = true;
    t.exp_applies = m >= 5 && d >= 3;
    const Regime poly = detail::make_regime(
        d == 2 ? RegimeKind::Linking : RegimeKind::PolynomialDistinct, m, d);
    const Regime expo = detail::make_regime(RegimeKind::Exponential, m, d);
    for (int n = n_min; n <= n_max; ++n) {
        DichotomyRow row;
        row.n = n;
        row.tau = Rat(1) / n;
        row.poly_bound = upper_bound(poly, row.tau, std::nullopt, constants);
        row.exp_bound = upper_bound(expo, row.tau, std::nullopt, constants);
        row.poly_value = example_family_value(FamilyKind::Polynomial, m, d, n);
        row.poly_consistent = compare_bound(row.poly_bound, Rat(*row.poly_value)) >= 0;
        if (t.exp_applies) {
            row.exp_value = example_family_value(FamilyKind::Exponential, m, d, n);
            row.exp_consistent = compare_bound(row.exp_bound, Rat(*row.exp_value)) >= 0;
            if (!t.crossover && compare_bound(row.poly_bound, Rat(*row.exp_value)) < 0)
                t.crossover = n;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

enum class FkVariant { Single, Multi };

// Iterated commutator words whose powers certify thickness bounds.  Single
// uses two generators, [x,[x,...[x,y]...]] with q copies of x; multi uses
// q + 1 distinct generators left-normed.
inline Word fk_word(int q, FkVariant variant) {
    if (q < 1) throw std::invalid_argument("fk_word: need q >= 1");
    if (variant == FkVariant::Single) {
        const Word x = reduce({Letter{1, 1}}, 2);
        Word w = reduce({Letter{2, 1}}, 2);
        for (int t = 0; t < q; ++t) w = commutator(x, w);
        return w;
    }
    std::vector<std::pair<int, Int>> exps;
    for (int g = 1; g <= q + 1; ++g) exps.emplace_back(g, 1);
    return left_normed(exps);
}

// Leading coefficient of the expansion of fk_word(q, variant)^{2^l}: the
// coefficient of the lexicographically least monomial of minimal positive
// degree.  The power is taken on the truncated series by l squarings, so l
// up to the hundreds is fine even though the literal word would not fit in
// memory.
inline Int fk_telescope_coefficient(int q, int l, FkVariant variant) {
    if (l < 0) throw std::invalid_argument("fk_telescope_coefficient: need l >= 0");
    const Word w = fk_word(q, variant);
    NcSeries s = expand(w, q + 1);
    for (int t = 0; t < l; ++t) s = series_mul(s, s);
    const Monomial* best = nullptr;
    for (const auto& [mon, coeff] : s.terms) {
        if (mon.empty()) continue;
        if (!best || mon.size() < best->size() ||
            (mon.size() == best->size() && mon < *best))
            best = &mon;
    }
    if (!best) throw std::logic_error("fk_telescope_coefficient: no leading term");
    return s.terms.at(*best);
}

// tau^root <= rhs, i.e. tau <= (C / (c 2^l))^{1 / (10(q+1))}.  exact_log2
// is populated only when rhs is a power of two; otherwise log2(rhs) is
// irrational and only an estimate makes sense.
struct FkThicknessBound {
    int q = 0;
    int l = 0;
    int root = 0;
    Rat rhs;
    std::optional<Rat> exact_log2;

    bool admits(const Rat& tau) const {
        if (!(tau > 0)) throw std::invalid_argument("FkThicknessBound: tau must be positive");
        return rat_pow(tau, root) <= rhs;
    }
    double log2_bound_estimate() const { return log2_estimate(rhs) / root; }
};

inline FkThicknessBound fk_thickness_bound(int q, int l, const Rat& c = 1, const Rat& C = 1) {
    if (q < 1 || l < 0) throw std::invalid_argument("fk_thickness_bound: need q >= 1, l >= 0");
    if (c <= 0 || C <= 0)
        throw std::invalid_argument("fk_thickness_bound: constants must be positive");
    FkThicknessBound b;
    b.q = q;
    b.l = l;
    b.root = 10 * (q + 1);
    b.rhs = C / (c * rat_pow(Rat(2), l));
    const Int num = numerator(b.rhs), den = denominator(b.rhs);
    const bool num_pow2 = num > 0 && lsb(num) == msb(num);
    const bool den_pow2 = den > 0 && lsb(den) == msb(den);
    if (num_pow2 && den_pow2)
        b.exact_log2 = Rat(Int(msb(num)) - Int(msb(den))) / b.root;
    return b;
}

}  // namespace milnor
