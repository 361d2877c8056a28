#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace milnor {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline std::string to_string(const Int& v) { return v.str(); }

// Canonical form: "p" for integers, "p/q" otherwise (q > 0, lowest terms).
inline std::string to_string(const Rat& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

inline Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    try {
        return Int(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer literal: " + s);
    }
}

// Accepts "p" or "p/q" with q != 0.
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int p = parse_int(s.substr(0, slash));
    Int q = parse_int(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(p, q);
}

// Exact binomial C(n, k) for arbitrary-precision n and small k >= 0.
inline Int binomial(const Int& n, unsigned long k) {
    Int num = 1, den = 1;
    for (unsigned long t = 0; t < k; ++t) {
        num *= n - Int(t);
        den *= Int(t + 1);
    }
    return num / den;  // always exact
}

}  // namespace milnor
