#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace boost {

// Under C++20 the reversed mixed-type comparison templates in Boost.Rational
// recurse into each other; exact overloads take precedence.
#define QTRACE_RATIONAL_EQ(T)                                                                         \
    inline bool operator==(const rational<std::int64_t>& a, T b) {                                 \
        return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);              \
    }                                                                                             \
    inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }                \
    inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }             \
    inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
QTRACE_RATIONAL_EQ(int)
QTRACE_RATIONAL_EQ(long)
QTRACE_RATIONAL_EQ(long long)
#undef QTRACE_RATIONAL_EQ

}  // namespace boost

namespace qtrace::sym {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p" or "p/q"; throws UsageError on anything else.
Rational parse_rational(const std::string& text);

}  // namespace qtrace::sym
