#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coiso.hpp"
#include "dga.hpp"
#include "free_group.hpp"
#include "magnus.hpp"
#include "rational.hpp"

namespace milnor {

// Insertion-ordered documents keep field layout stable, which the CLI
// relies on for byte-identical reruns.
using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "v1";

namespace detail {

inline const Json& require_field(const Json& j, const char* name) {
    if (!j.is_object())
        throw std::invalid_argument(std::string("expected an object with field \"") + name + "\"");
    auto it = j.find(name);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing field \"") + name + "\"");
    return *it;
}

inline void require_document(const Json& j, const char* kind) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != schema_version)
        throw std::invalid_argument("field \"schema\": unsupported version");
    if (j.contains("kind") && j.at("kind").get<std::string>() != kind)
        throw std::invalid_argument(std::string("field \"kind\": expected \"") + kind + "\"");
}

inline const Int& factored_threshold() {
    static const Int t = pow(Int(10), 30);
    return t;
}

}  // namespace detail

// Integers serialize as plain decimal up to 10^30 and as "2^k*m" beyond,
// with m the odd part; both forms parse back.
inline std::string int_to_string(const Int& v) {
    const Int a = v < 0 ? Int(-v) : v;
    if (a <= detail::factored_threshold()) return v.str();
    const unsigned k = lsb(a);
    const Int m = a >> k;
    std::string out = v < 0 ? "-" : "";
    return out + "2^" + std::to_string(k) + "*" + m.str();
}

inline Int int_from_string(std::string s) {
    bool neg = false;
    if (!s.empty() && s.front() == '-') {
        neg = true;
        s.erase(s.begin());
    }
    Int v;
    const auto caret = s.find('^');
    if (caret == std::string::npos) {
        v = parse_int(s);
    } else {
        if (s.substr(0, caret) != "2") throw std::invalid_argument("factored integers use base 2");
        auto star = s.find('*', caret);
        std::size_t mult_len = 1;
        if (star == std::string::npos) {
            star = s.find("\xc2\xb7", caret);  // middle dot
            mult_len = 2;
        }
        if (star == std::string::npos)
            throw std::invalid_argument("factored integer needs an odd part");
        const Int k = parse_int(s.substr(caret + 1, star - caret - 1));
        if (k < 0 || k > (1 << 26)) throw std::invalid_argument("factored exponent out of range");
        v = parse_int(s.substr(star + mult_len)) << k.convert_to<unsigned>();
    }
    return neg ? Int(-v) : v;
}

inline Json json_of_int(const Int& v) { return int_to_string(v); }

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) return int_from_string(j.get<std::string>());
    throw std::invalid_argument("expected an integer or integer string");
}

inline Json json_of_rat(const Rat& v) { return to_string(v); }

inline Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(int_from_string(s));
        return Rat(int_from_string(s.substr(0, slash))) /
               Rat(int_from_string(s.substr(slash + 1)));
    }
    throw std::invalid_argument("expected a rational string");
}

inline Json json_of_word(const Word& w) {
    Json letters = Json::array();
    for (const Letter& l : w.letters) letters.push_back({l.gen, l.sign});
    Json j;
    j["rank"] = w.rank;
    j["letters"] = std::move(letters);
    return j;
}

// Accepts unreduced letter lists; the result is always freely reduced.
inline Word word_from_json(const Json& j) {
    detail::require_document(j, "word");
    const int rank = detail::require_field(j, "rank").get<int>();
    std::vector<Letter> raw;
    for (const Json& entry : detail::require_field(j, "letters")) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("field \"letters\": entries are [generator, sign] pairs");
        raw.push_back(Letter{entry.at(0).get<int>(), entry.at(1).get<int>()});
    }
    return reduce(raw, rank);
}

inline Json json_of_link_system(const LinkSystem& L) {
    Json j;
    j["schema"] = schema_version;
    j["kind"] = "link-system";
    j["r"] = L.r;
    j["m"] = L.m;
    Json longs = Json::array();
    for (const Word& w : L.longitudes) longs.push_back(json_of_word(w));
    j["longitudes"] = std::move(longs);
    return j;
}

inline LinkSystem link_system_from_json(const Json& j) {
    detail::require_document(j, "link-system");
    const int r = detail::require_field(j, "r").get<int>();
    const int m = detail::require_field(j, "m").get<int>();
    std::vector<Word> longs;
    for (const Json& wj : detail::require_field(j, "longitudes"))
        longs.push_back(word_from_json(wj));
    return make_link_system(r, m, std::move(longs));
}

inline Json json_of_sign_matrix(const SparseSignMatrix& A) {
    Json j;
    j["schema"] = schema_version;
    j["kind"] = "sign-matrix";
    j["rows"] = A.rows;
    j["cols"] = A.cols;
    Json entries = Json::array();
    for (const SignEntry& e : A.entries) entries.push_back({e.row, e.col, e.value});
    j["entries"] = std::move(entries);
    return j;
}

inline SparseSignMatrix sign_matrix_from_json(const Json& j) {
    detail::require_document(j, "sign-matrix");
    const int rows = detail::require_field(j, "rows").get<int>();
    const int cols = detail::require_field(j, "cols").get<int>();
    std::vector<SignEntry> entries;
    for (const Json& e : detail::require_field(j, "entries")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("field \"entries\": entries are [row, col, value]");
        entries.push_back(SignEntry{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    }
    return make_sign_matrix(rows, cols, std::move(entries));
}

inline Json json_of_rat_vector(const std::vector<Rat>& v) {
    Json j = Json::array();
    for (const Rat& x : v) j.push_back(json_of_rat(x));
    return j;
}

inline std::vector<Rat> rat_vector_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
    std::vector<Rat> v;
    for (const Json& x : j) v.push_back(rat_from_json(x));
    return v;
}

inline Json json_of_complex(const SimplicialComplex& K) {
    Json j;
    j["schema"] = schema_version;
    j["kind"] = "complex";
    j["simplices"] = K.simplices;
    return j;
}

inline SimplicialComplex complex_from_json(const Json& j) {
    detail::require_document(j, "complex");
    const Json& by_dim = detail::require_field(j, "simplices");
    if (!by_dim.is_array())
        throw std::invalid_argument("field \"simplices\": expected an array per dimension");
    return make_complex(by_dim.get<std::vector<std::vector<std::vector<int>>>>());
}

// Exterior differential graded algebras: degree-1 generators with
// differentials given as combinations of generator pairs.
inline Dga exterior_dga_from_json(const Json& j) {
    detail::require_document(j, "exterior-dga");
    const auto generators =
        detail::require_field(j, "generators").get<std::vector<std::string>>();
    const int truncation = detail::require_field(j, "truncation").get<int>();
    std::vector<std::vector<ExteriorDiffTerm>> diff;
    for (const Json& per_gen : detail::require_field(j, "diff")) {
        std::vector<ExteriorDiffTerm> terms;
        for (const Json& t : per_gen) {
            if (!t.is_array() || t.size() != 3)
                throw std::invalid_argument("field \"diff\": entries are [g1, g2, coeff]");
            terms.push_back(ExteriorDiffTerm{t.at(0).get<int>(), t.at(1).get<int>(),
                                             rat_from_json(t.at(2))});
        }
        diff.push_back(std::move(terms));
    }
    return exterior_algebra(generators, diff, truncation);
}

inline Json json_of_chain(const Dga& D, const Chain& c) {
    Json j = Json::array();
    for (int i = 0; i < D.dim(); ++i)
        if (c[static_cast<std::size_t>(i)] != 0)
            j.push_back({Json(D.names[static_cast<std::size_t>(i)]),
                         json_of_rat(c[static_cast<std::size_t>(i)])});
    return j;
}

inline Chain chain_from_json(const Dga& D, const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a chain as [name, coeff] pairs");
    Chain c = zero_chain(D);
    for (const Json& term : j) {
        if (!term.is_array() || term.size() != 2)
            throw std::invalid_argument("chain entries are [name, coeff] pairs");
        const int idx = D.index_of(term.at(0).get<std::string>());
        c[static_cast<std::size_t>(idx)] += rat_from_json(term.at(1));
    }
    return c;
}

}  // namespace milnor
