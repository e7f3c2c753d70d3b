// Copyright 2026 The qsgd authors
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

#include <vector>

#include "qsgd/qcore/matrix.hpp"

namespace qsgd {

struct EigenSystem {
  std::vector<double> values;  // descending
  CMatrix vectors;             // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations for complex Hermitian matrices (dimension <= 64
/// here). Convergence: off-diagonal Frobenius norm <= 1e-12, at most 100
/// sweeps. Input must be Hermitian within 1e-10.
EigenSystem hermitian_eigensystem(const CMatrix& a);
std::vector<double> hermitian_eigenvalues(const CMatrix& a);

/// Sum of absolute eigenvalues (Schatten 1-norm) of a Hermitian matrix.
double trace_norm(const CMatrix& a);

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
CMatrix expm(const CMatrix& a);

}  // namespace qsgd
