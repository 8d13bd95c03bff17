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

#ifndef EIGSTAB_EIG_GRAD_HPP_
#define EIGSTAB_EIG_GRAD_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "eigstab/linalg.hpp"

namespace eigstab {

// Power iterations used in the backward pass unless overridden. Covers
// consecutive eigenvalue ratios up to 0.85 at the 0.05 truncation level.
inline constexpr int kDefaultPowerIterations = 19;

// Default diagonal shift for covariance matrices.
inline constexpr double kDefaultEpsilon = 1e-4;

// dL/dM for one backward computation.
struct GradientReport {
  Matrix grad;
  double frobenius_norm = 0.0;
  bool finite = true;
  // Upper bound n K / denom * ||dL/dv|| that applies to the gradient, or
  // +inf where no such bound exists (analytical gradients).
  double bound = 0.0;

  static GradientReport make(Matrix grad, double bound);
};

// v <- M v / ||M v||. Throws ZeroIterate when M v == 0.
Vector power_iteration_step(const SymmetricMatrix &m, const Vector &v);

// v^T M v / v^T v. Throws ZeroVector when v == 0.
double rayleigh_quotient(const SymmetricMatrix &m, const Vector &v);

// Removes the projection of M on v: sym(M - M v v^T).
SymmetricMatrix deflate(const SymmetricMatrix &m, const Vector &v);

// Backward of the power iteration seeded with the exact dominant
// eigenvector v of M:
//
//   dL/dM = sum_{j<K} M^j (I - v v^T) / ||M v||^{j+1} * grad_v * v^T
//
// evaluated by Horner accumulation of matrix-vector products, so M^j is
// never formed. The reported bound is n K / ||M v|| * ||grad_v||.
GradientReport pi_gradient_dominant(const SymmetricMatrix &m, const Vector &v,
                                    const Vector &grad_v, int iterations = kDefaultPowerIterations);

// Analytical eigenvector gradient for the dominant eigenvector:
// sum_{i>=2} v_i v_i^T grad_v1 v_1^T / (lambda_1 - lambda_i). Repeated
// eigenvalues produce non-finite entries; this is reported, never thrown.
GradientReport ed_gradient_analytical(const EigenDecomposition &eig, const Vector &grad_v1);

// Analytical gradient for cotangents on the leading grad_vs.size()
// eigenvectors, plus optional eigenvalue cotangents:
// V (Kt^T o (V^T G) + diag(grad_values)) V^T, Kt_ij = 1/(lambda_i - lambda_j).
GradientReport ed_gradient_analytical(const EigenDecomposition &eig, std::span<const Vector> grad_vs,
                                      std::span<const double> grad_values = {});

// (1/l1) sum_{j<K} (li/l1)^j. Throws DomainError unless l1 > 0 and
// 0 <= li <= l1, and K >= 1.
double geometric_coefficient(double l1, double li, int iterations);

// Smallest K >= 1 with ratio^K <= tol, i.e. ceil(ln tol / ln ratio).
int k_min(double ratio, double tol = 0.05);

// (n K / denom) * grad_v_norm.
double gradient_bound(Eigen::Index n, int iterations, double denom, double grad_v_norm);

// One deflation step: the matrix the eigenvector was taken from, the
// eigenvector and its Rayleigh quotient against that matrix.
struct DeflationStep {
  SymmetricMatrix deflated;
  Vector vector;
  double rayleigh = 0.0;
};

struct DeflationTape {
  std::vector<DeflationStep> steps;
  double epsilon = kDefaultEpsilon;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(steps.size()); }
  Eigen::Index dim() const { return steps.empty() ? 0 : steps.front().deflated.dim(); }
};

// Records the first `rank` deflation steps of `regularized` using the
// exact eigenvectors from `eig` (typically sym_eigen(regularized)).
DeflationTape record_deflation(const SymmetricMatrix &regularized, const EigenDecomposition &eig,
                               Eigen::Index rank, double epsilon);

// dL/dM through the whole deflation sequence. grad_vs[i] is the cotangent
// of the i-th eigenvector; grad_values[i] (optional) the cotangent of its
// Rayleigh quotient. Each step applies pi_gradient_dominant to its deflated
// matrix; cotangents flow between steps through the exact differential of
// the deflation update. The result is symmetrized.
GradientReport full_backward(const DeflationTape &tape, std::span<const Vector> grad_vs,
                             int iterations = kDefaultPowerIterations);
GradientReport full_backward(const DeflationTape &tape, std::span<const Vector> grad_vs,
                             std::span<const double> grad_values, int iterations);

// Reverse-mode rule for D(A, v) = sym(A - A v v^T) with symmetric A.
// Given the cotangent `out_bar` of D, adds into a_bar and v_bar.
void deflation_backward(const Matrix &a, const Vector &v, const Matrix &out_bar, Matrix &a_bar,
                        Vector &v_bar);

// ---------------------------------------------------------------------------
// Randomly initialized power-iteration deflation, used as a baseline.

struct PowerIterationStep {
  SymmetricMatrix deflated;
  // iterates[0] is the random start, iterates.back() the estimate.
  std::vector<Vector> iterates;
  double rayleigh = 0.0;

  const Vector &estimate() const { return iterates.back(); }
};

struct PowerIterationTape {
  std::vector<PowerIterationStep> steps;

  Eigen::Index rank() const { return static_cast<Eigen::Index>(steps.size()); }
};

// Runs `rank` deflation steps, each with `iterations` power iterations
// from a seeded random unit vector.
PowerIterationTape power_iteration_deflation(const SymmetricMatrix &m, Eigen::Index rank,
                                             int iterations, std::uint64_t seed);

// Unrolled backward through every power iteration and deflation step.
GradientReport power_iteration_backward(const PowerIterationTape &tape,
                                        std::span<const Vector> grad_vs,
                                        std::span<const double> grad_values = {});

}  // namespace eigstab

#endif  // EIGSTAB_EIG_GRAD_HPP_
