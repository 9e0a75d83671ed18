// Copyright 2026 The Geomatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOMATCH_SCALAR_HPP_
#define GEOMATCH_SCALAR_HPP_

// Numeric abstraction shared by every algorithm in the library. Two
// realizations exist: exact rationals (GMP) and doubles with a zero
// threshold. Algorithms only talk to numbers through ScalarTraits.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "geomatch/errors.hpp"

namespace geomatch {

using Rational = mpq_class;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr const char* kName = "rational";

  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool is_positive(const Rational& x) { return sgn(x) > 0; }
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_double(double x) { return Rational(x); }
  static std::string to_string(const Rational& x) { return x.get_str(); }
  static bool is_integral(const Rational& x) { return x.get_den() == 1; }

  // floor(x / side) for side > 0.
  static std::int64_t floor_div(const Rational& x, const Rational& side) {
    Rational q = x / side;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!fl.fits_slong_p()) throw InputError("coordinate out of grid range");
    return fl.get_si();
  }

  // Some value s >= sqrt(x), x >= 0, and s > 0.
  static Rational sqrt_upper(const Rational& x) {
    Rational s(std::sqrt(x.get_d()) * (1.0 + 1e-12) + 1e-300);
    if (sgn(s) <= 0) s = 1;
    while (s * s < x) s *= 2;
    return s;
  }

  // Exact square root when x is a perfect rational square, otherwise the
  // rational closest to the double square root.
  static Rational sqrt(const Rational& x) {
    if (sgn(x) < 0) throw InputError("square root of a negative value");
    if (mpz_perfect_square_p(x.get_num_mpz_t()) &&
        mpz_perfect_square_p(x.get_den_mpz_t())) {
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
      Rational r(n, d);
      r.canonicalize();
      return r;
    }
    return Rational(std::sqrt(x.get_d()));
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr const char* kName = "float";

  // Quantities with magnitude below this count as zero.
  static inline double zero_threshold = 1e-9;

  static bool is_zero(double x) { return std::fabs(x) < zero_threshold; }
  static bool is_positive(double x) { return x >= zero_threshold; }
  static bool is_negative(double x) { return x <= -zero_threshold; }
  static bool equal(double a, double b) { return is_zero(a - b); }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static std::string to_string(double x);
  static bool is_integral(double x) { return std::floor(x) == x; }
  static std::int64_t floor_div(double x, double side) {
    return static_cast<std::int64_t>(std::floor(x / side));
  }
  static double sqrt_upper(double x) {
    double s = std::sqrt(x) * (1.0 + 1e-12);
    return s > 0 ? s : 1.0;
  }
  static double sqrt(double x) { return std::sqrt(x); }
};

// Parses "12", "-0.25", "1e-3" or "3/7". Decimal input is converted to a
// rational exactly; throws InputError on malformed text.
Rational parse_rational(std::string_view text);

template <class S>
S parse_scalar(std::string_view text);

template <>
inline Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
inline double parse_scalar<double>(std::string_view text) {
  return parse_rational(text).get_d();
}

}  // namespace geomatch

#endif  // GEOMATCH_SCALAR_HPP_
