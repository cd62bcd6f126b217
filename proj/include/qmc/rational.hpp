#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace qmc {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& q) { return q.template convert_to<double>(); }

inline std::string fraction_string(const BigRat& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

// a/b as an exact rational, b > 0
inline BigRat make_rat(std::uint64_t a, std::uint64_t b) {
    return BigRat(BigInt(a), BigInt(b));
}

} // namespace qmc
