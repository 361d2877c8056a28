#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "milnor/rational.hpp"

namespace milnor {

// One letter of a free-group word: generator index (1-based) and a sign.
struct Letter {
    int gen;
    int sign;  // +1 or -1
    friend bool operator==(const Letter&, const Letter&) = default;
};

// Freely reduced word in the free group on e_1..e_rank.
// Invariant: letters never contain an adjacent inverse pair, every index
// lies in 1..rank.  Construct through reduce() or the operations below.
struct Word {
    int rank = 0;
    std::vector<Letter> letters;

    friend bool operator==(const Word&, const Word&) = default;
    bool empty() const { return letters.empty(); }
};

// Words are materialized eagerly; this caps the letter count so that
// huge exponents fail loudly instead of exhausting memory.  Series-level
// powering (see magnus.hpp / bounds.hpp) handles exponents past the cap.
inline constexpr std::size_t kMaxWordLetters = std::size_t(1) << 25;

namespace detail {
inline void push_reduced(std::vector<Letter>& out, const Letter& l) {
    if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
        out.pop_back();
    else
        out.push_back(l);
}
}  // namespace detail

inline Word reduce(const std::vector<Letter>& raw, int rank) {
    if (rank < 0) throw std::invalid_argument("negative rank");
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (const Letter& l : raw) {
        if (l.gen < 1 || l.gen > rank)
            throw std::invalid_argument("letter index out of range 1..rank");
        if (l.sign != 1 && l.sign != -1)
            throw std::invalid_argument("letter sign must be +1 or -1");
        detail::push_reduced(out, l);
    }
    return Word{rank, std::move(out)};
}

inline Word identity(int rank) { return Word{rank, {}}; }

inline Word invert(const Word& w) {
    std::vector<Letter> out;
    out.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        out.push_back(Letter{it->gen, -it->sign});
    return Word{w.rank, std::move(out)};  // reversal of a reduced word is reduced
}

inline Word concat(const Word& u, const Word& v) {
    if (u.rank != v.rank) throw std::invalid_argument("rank mismatch in concat");
    std::vector<Letter> out = u.letters;
    for (const Letter& l : v.letters) detail::push_reduced(out, l);
    return Word{u.rank, std::move(out)};
}

inline std::size_t word_length(const Word& w) { return w.letters.size(); }

// Reduced w^k for arbitrary-precision k.  Uses the cyclic decomposition
// w = u c u^{-1} (c cyclically reduced) so the result is built in one pass.
inline Word power(const Word& w, const Int& k) {
    if (k == 0 || w.empty()) return identity(w.rank);
    const Word base = k < 0 ? invert(w) : w;
    Int e = abs(k);
    // Peel matching conjugating letters off both ends.
    std::size_t lo = 0, hi = base.letters.size();
    while (hi - lo >= 2 && base.letters[lo].gen == base.letters[hi - 1].gen &&
           base.letters[lo].sign == -base.letters[hi - 1].sign) {
        ++lo;
        --hi;
    }
    const std::size_t core = hi - lo;
    Int total = Int(2 * lo) + Int(core) * e;
    if (total > Int(kMaxWordLetters))
        throw std::length_error("power: materialized word would exceed the letter cap");
    std::vector<Letter> out;
    out.reserve(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < lo; ++i) out.push_back(base.letters[i]);
    for (Int rep = 0; rep < e; ++rep)
        for (std::size_t i = lo; i < hi; ++i) out.push_back(base.letters[i]);
    for (std::size_t i = hi; i < base.letters.size(); ++i) out.push_back(base.letters[i]);
    return Word{base.rank, std::move(out)};
}

inline Word commutator(const Word& u, const Word& v) {
    if (u.rank != v.rank) throw std::invalid_argument("rank mismatch in commutator");
    return concat(concat(u, v), concat(invert(u), invert(v)));
}

// [e_{i1}^{a1}, [e_{i2}^{a2}, ... [e_{i_{k-1}}^{a_{k-1}}, e_{ik}^{ak}] ... ]].
// rank defaults to the largest generator index used.
inline Word left_normed(const std::vector<std::pair<int, Int>>& exponents, int rank = 0) {
    if (exponents.size() < 2)
        throw std::invalid_argument("left_normed needs at least 2 entries");
    int max_gen = 0;
    for (const auto& [g, a] : exponents) {
        if (g < 1) throw std::invalid_argument("generator index must be >= 1");
        if (g > max_gen) max_gen = g;
    }
    if (rank == 0) rank = max_gen;
    if (rank < max_gen) throw std::invalid_argument("rank smaller than a generator index");
    auto gen_power = [&](std::size_t i) {
        return power(Word{rank, {Letter{exponents[i].first, 1}}}, exponents[i].second);
    };
    Word acc = gen_power(exponents.size() - 1);
    for (std::size_t i = exponents.size() - 1; i-- > 0;)
        acc = commutator(gen_power(i), acc);
    return acc;
}

}  // namespace milnor
