#pragma once

// Multiprecision scalar for the identity suite.  Requires MPFR and GMP at
// link time.

#include <boost/multiprecision/mpfr.hpp>

namespace sobomark {

/// 150 significant decimal digits, expression templates off.
using Precise = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<150>,
                                              boost::multiprecision::et_off>;

}  // namespace sobomark
