// Copyright 2026 The eigstab Authors.
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

#ifndef EIGSTAB_GRADCHECK_HPP_
#define EIGSTAB_GRADCHECK_HPP_

#include <functional>
#include <vector>

#include "eigstab/linalg.hpp"

namespace eigstab {

inline constexpr double kDefaultFiniteDiffStep = 1e-5;
inline constexpr double kDefaultExplosionThreshold = 1e8;

struct ComparisonResult {
  // ||candidate - reference||_F / max(1, ||reference||_F); +inf unless both
  // inputs are finite.
  double relative_error = 0.0;
  double max_abs_diff = 0.0;
  bool both_finite = true;
};

using SymmetricLoss = std::function<double(const SymmetricMatrix &)>;
using MatrixLoss = std::function<double(const Matrix &)>;

// Central differences of `loss` along the n(n+1)/2 symmetric directions
// E_ii = e_i e_i^T and E_ij = e_i e_j^T + e_j e_i^T. Returns the symmetric
// G with <G, E> equal to each directional derivative, which is the
// symmetrized form of any unconstrained gradient. Throws OracleFailure on
// a non-finite loss value.
Matrix finite_diff_gradient(const SymmetricLoss &loss, const SymmetricMatrix &m,
                            double h = kDefaultFiniteDiffStep);

// Entrywise central differences for a loss over an unconstrained matrix.
Matrix finite_diff_matrix(const MatrixLoss &loss, const Matrix &x, double h = kDefaultFiniteDiffStep);

// Throws ShapeError when shapes differ.
ComparisonResult compare(const Matrix &candidate, const Matrix &reference);

// True iff g has a non-finite entry or ||g||_F > threshold.
bool detect_explosion(const Matrix &g, double threshold = kDefaultExplosionThreshold);

// L(M) = sum_i c_i^T v_i(M), with each eigenvector's sign chosen to agree
// with the matching column of `reference` so the loss stays smooth under
// perturbation.
SymmetricLoss eigenvector_loss(std::vector<Vector> cotangents, Matrix reference);

}  // namespace eigstab

#endif  // EIGSTAB_GRADCHECK_HPP_
