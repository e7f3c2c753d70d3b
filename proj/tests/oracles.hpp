// Test-only oracles, independent of the library paths they check.
#pragma once

#include <complex>
#include <vector>

#include "qsgd/qcore/matrix.hpp"

namespace qsgd::test {

// Plain cubic-time product written against flat indexing; checks the library's
// operator* without sharing its loop structure.
inline CMatrix naive_product(const CMatrix& a, const CMatrix& b) {
  const int n = a.dim();
  CMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cdouble acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

// Matrix exponential by raw Taylor summation on a pre-scaled argument with
// repeated squaring; no shared code with qsgd::expm's loop.
inline CMatrix taylor_expm(const CMatrix& a, int terms = 60) {
  int squarings = 0;
  double norm = a.max_abs() * a.dim();
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  CMatrix scaled = a;
  scaled *= std::pow(0.5, squarings);
  CMatrix sum = CMatrix::identity(a.dim());
  CMatrix power = CMatrix::identity(a.dim());
  double factorial = 1.0;
  for (int k = 1; k <= terms; ++k) {
    power = naive_product(power, scaled);
    factorial *= k;
    CMatrix term = power;
    term *= 1.0 / factorial;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = naive_product(sum, sum);
  return sum;
}

// Gamma0 via the closed form (B + tr(B) I) / 3, an algebraic identity for the
// six-state average; independent of the library's basis-sum implementation.
inline CMatrix gamma0_closed_form(const CMatrix& b) {
  CMatrix out = b;
  CMatrix id = CMatrix::identity(2);
  id *= b.trace();
  out += id;
  out *= 1.0 / 3.0;
  return out;
}

}  // namespace qsgd::test
