// Copyright 2026 The ohs Authors
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

#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "ohs/rational.hpp"

namespace ohs {

// Arbitrary-precision rational for aggregates (objective values, LP pivots)
// whose denominators outgrow 64 bits.
using BigRational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline BigRational to_big(const Rational& r) {
  return BigRational(BigInt(r.num()), BigInt(r.den()));
}

inline std::string big_str(const BigRational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double big_to_double(const BigRational& r) {
  return r.convert_to<double>();
}

}  // namespace ohs
