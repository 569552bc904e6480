#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace qzeta {

using Rational = boost::multiprecision::cpp_rational;

// Exact Bernoulli number B_n (B_1 = -1/2). Backs bernoulli() in
// qcore.hpp; exposed so tests can check the defining recurrence in
// rational arithmetic.
Rational bernoulli_rational(int n);

} // namespace qzeta
