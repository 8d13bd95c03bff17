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

#include "eigstab/eig_grad.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eigstab/errors.hpp"

namespace eigstab {

namespace {

Matrix symmetrized(const Matrix &a) { return 0.5 * (a + a.transpose()); }

double stacked_norm(std::span<const Vector> vs) {
  double sum = 0.0;
  for (const Vector &v : vs) sum += v.squaredNorm();
  return std::sqrt(sum);
}

}  // namespace

GradientReport GradientReport::make(Matrix grad, double bound) {
  GradientReport report;
  report.finite = grad.allFinite();
  report.frobenius_norm = report.finite ? grad.norm() : std::numeric_limits<double>::infinity();
  report.grad = std::move(grad);
  report.bound = bound;
  return report;
}

Vector power_iteration_step(const SymmetricMatrix &m, const Vector &v) {
  Vector mv = m.matrix() * v;
  const double norm = mv.norm();
  if (norm == 0.0) throw ZeroIterate("power_iteration_step: M v is zero");
  return mv / norm;
}

double rayleigh_quotient(const SymmetricMatrix &m, const Vector &v) {
  const double vv = v.squaredNorm();
  if (vv == 0.0) throw ZeroVector("rayleigh_quotient: zero vector");
  return v.dot(m.matrix() * v) / vv;
}

SymmetricMatrix deflate(const SymmetricMatrix &m, const Vector &v) {
  const Vector mv = m.matrix() * v;
  return SymmetricMatrix(m.matrix() - mv * v.transpose());
}

GradientReport pi_gradient_dominant(const SymmetricMatrix &m, const Vector &v, const Vector &grad_v,
                                    int iterations) {
  if (iterations < 1) throw DomainError("pi_gradient_dominant: iterations must be >= 1");
  const Matrix &a = m.matrix();
  const double rho = (a * v).norm();
  if (rho == 0.0) throw ZeroIterate("pi_gradient_dominant: M v is zero");

  // acc <- u + M acc / rho, K - 1 times, then divide by rho once more.
  const Vector u = grad_v - v * v.dot(grad_v);
  Vector acc = u;
  for (int j = 1; j < iterations; ++j) acc = u + (a * acc) / rho;
  acc /= rho;

  return GradientReport::make(acc * v.transpose(),
                              gradient_bound(m.dim(), iterations, rho, grad_v.norm()));
}

GradientReport ed_gradient_analytical(const EigenDecomposition &eig, const Vector &grad_v1) {
  const Eigen::Index n = eig.dim();
  Vector w = Vector::Zero(n);
  for (Eigen::Index i = 1; i < n; ++i) {
    const Vector vi = eig.vectors.col(i);
    w += vi * (vi.dot(grad_v1) / (eig.values(0) - eig.values(i)));
  }
  return GradientReport::make(w * eig.vectors.col(0).transpose(),
                              std::numeric_limits<double>::infinity());
}

GradientReport ed_gradient_analytical(const EigenDecomposition &eig, std::span<const Vector> grad_vs,
                                      std::span<const double> grad_values) {
  const Eigen::Index n = eig.dim();
  const auto r = static_cast<Eigen::Index>(grad_vs.size());
  if (r > n) throw ShapeError("ed_gradient_analytical: more cotangents than eigenvectors");
  if (!grad_values.empty() && static_cast<Eigen::Index>(grad_values.size()) != r)
    throw ShapeError("ed_gradient_analytical: grad_values length must match grad_vs");

  Matrix g(n, r);
  for (Eigen::Index k = 0; k < r; ++k) g.col(k) = grad_vs[static_cast<std::size_t>(k)];
  // F(i, k) = v_i^T g_k / (lambda_k - lambda_i), i != k.
  Matrix f = eig.vectors.transpose() * g;
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) {
        f(i, k) = grad_values.empty() ? 0.0 : grad_values[static_cast<std::size_t>(k)];
      } else {
        f(i, k) /= eig.values(k) - eig.values(i);
      }
    }
  }
  return GradientReport::make(eig.vectors * f * eig.vectors.leftCols(r).transpose(),
                              std::numeric_limits<double>::infinity());
}

double geometric_coefficient(double l1, double li, int iterations) {
  if (!(l1 > 0.0)) throw DomainError("geometric_coefficient: lambda_1 must be positive");
  if (!(li >= 0.0 && li <= l1)) throw DomainError("geometric_coefficient: need 0 <= lambda_i <= lambda_1");
  if (iterations < 1) throw DomainError("geometric_coefficient: iterations must be >= 1");
  if (li == l1) return iterations / l1;
  const double q = li / l1;
  return (1.0 - std::pow(q, iterations)) / (1.0 - q) / l1;
}

int k_min(double ratio, double tol) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("k_min: ratio must lie in (0, 1)");
  if (!(tol > 0.0 && tol < 1.0)) throw DomainError("k_min: tol must lie in (0, 1)");
  // The slack absorbs log rounding when ratio^K == tol exactly.
  const double k = std::ceil(std::log(tol) / std::log(ratio) - 1e-9);
  return k < 1.0 ? 1 : static_cast<int>(k);
}

double gradient_bound(Eigen::Index n, int iterations, double denom, double grad_v_norm) {
  if (!(denom > 0.0)) throw DomainError("gradient_bound: denominator must be positive");
  return static_cast<double>(n) * iterations / denom * grad_v_norm;
}

DeflationTape record_deflation(const SymmetricMatrix &regularized, const EigenDecomposition &eig,
                               Eigen::Index rank, double epsilon) {
  if (rank < 0 || rank > eig.dim()) throw ShapeError("record_deflation: rank out of range");
  DeflationTape tape;
  tape.epsilon = epsilon;
  tape.steps.reserve(static_cast<std::size_t>(rank));
  SymmetricMatrix current = regularized;
  for (Eigen::Index i = 0; i < rank; ++i) {
    Vector v = eig.vectors.col(i);
    double lambda = rayleigh_quotient(current, v);
    SymmetricMatrix next = i + 1 < rank ? deflate(current, v) : SymmetricMatrix();
    tape.steps.push_back({std::move(current), std::move(v), lambda});
    current = std::move(next);
  }
  return tape;
}

void deflation_backward(const Matrix &a, const Vector &v, const Matrix &out_bar, Matrix &a_bar,
                        Vector &v_bar) {
  const Matrix b = symmetrized(out_bar);
  const Vector bv = b * v;
  a_bar += b - 0.5 * (bv * v.transpose() + v * bv.transpose());
  v_bar -= a * bv + b * (a * v);
}

GradientReport full_backward(const DeflationTape &tape, std::span<const Vector> grad_vs, int iterations) {
  return full_backward(tape, grad_vs, {}, iterations);
}

GradientReport full_backward(const DeflationTape &tape, std::span<const Vector> grad_vs,
                             std::span<const double> grad_values, int iterations) {
  const Eigen::Index rank = tape.rank();
  if (static_cast<Eigen::Index>(grad_vs.size()) != rank)
    throw ShapeError("full_backward: expected " + std::to_string(rank) + " cotangents, got " +
                     std::to_string(grad_vs.size()));
  if (!grad_values.empty() && static_cast<Eigen::Index>(grad_values.size()) != rank)
    throw ShapeError("full_backward: grad_values length must match the tape rank");

  const Eigen::Index n = tape.dim();
  const double bound = tape.epsilon > 0.0
                           ? gradient_bound(n, iterations, tape.epsilon, stacked_norm(grad_vs))
                           : std::numeric_limits<double>::infinity();
  if (rank == 0) return GradientReport::make(Matrix::Zero(n, n), bound);

  // carry holds dL/dM~_{i+1} while processing step i.
  Matrix carry = Matrix::Zero(n, n);
  for (Eigen::Index i = rank - 1; i >= 0; --i) {
    const DeflationStep &step = tape.steps[static_cast<std::size_t>(i)];
    const Matrix &a = step.deflated.matrix();
    const Vector &v = step.vector;

    Vector g = grad_vs[static_cast<std::size_t>(i)];
    Matrix a_bar = Matrix::Zero(n, n);
    if (i + 1 < rank) deflation_backward(a, v, carry, a_bar, g);
    if (!grad_values.empty()) {
      const double lambda_bar = grad_values[static_cast<std::size_t>(i)];
      const double vv = v.squaredNorm();
      a_bar += (lambda_bar / vv) * v * v.transpose();
      g += (2.0 * lambda_bar / vv) * (a * v - step.rayleigh * v);
    }
    a_bar += pi_gradient_dominant(step.deflated, v, g, iterations).grad;
    carry = std::move(a_bar);
  }
  return GradientReport::make(symmetrized(carry), bound);
}

}  // namespace eigstab
