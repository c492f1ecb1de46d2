#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace renormlab {

// Group orders overflow 64 bits quickly (the quotient orders grow like
// (pq)^{3l}), so all orders are exact big integers.
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& n) { return n.str(); }

}  // namespace renormlab
