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

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "eigstab/eig_grad.hpp"
#include "eigstab/errors.hpp"

namespace eigstab {

PowerIterationTape power_iteration_deflation(const SymmetricMatrix &m, Eigen::Index rank, int iterations,
                                             std::uint64_t seed) {
  if (rank < 0 || rank > m.dim()) throw ShapeError("power_iteration_deflation: rank out of range");
  if (iterations < 1) throw DomainError("power_iteration_deflation: iterations must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PowerIterationTape tape;
  SymmetricMatrix current = m;
  for (Eigen::Index i = 0; i < rank; ++i) {
    Vector v(m.dim());
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
    v.normalize();

    PowerIterationStep step{current, {v}, 0.0};
    step.iterates.reserve(static_cast<std::size_t>(iterations) + 1);
    for (int k = 0; k < iterations; ++k) step.iterates.push_back(power_iteration_step(current, step.iterates.back()));
    step.rayleigh = rayleigh_quotient(current, step.estimate());
    SymmetricMatrix next = deflate(current, step.estimate());
    tape.steps.push_back(std::move(step));
    current = std::move(next);
  }
  return tape;
}

GradientReport power_iteration_backward(const PowerIterationTape &tape, std::span<const Vector> grad_vs,
                                        std::span<const double> grad_values) {
  const Eigen::Index rank = tape.rank();
  if (static_cast<Eigen::Index>(grad_vs.size()) != rank)
    throw ShapeError("power_iteration_backward: expected " + std::to_string(rank) + " cotangents");
  if (!grad_values.empty() && static_cast<Eigen::Index>(grad_values.size()) != rank)
    throw ShapeError("power_iteration_backward: grad_values length must match the tape rank");
  if (rank == 0) return GradientReport::make(Matrix(), std::numeric_limits<double>::infinity());

  const Eigen::Index n = tape.steps.front().deflated.dim();
  Matrix carry = Matrix::Zero(n, n);
  for (Eigen::Index i = rank - 1; i >= 0; --i) {
    const PowerIterationStep &step = tape.steps[static_cast<std::size_t>(i)];
    const Matrix &a = step.deflated.matrix();
    const Vector &estimate = step.estimate();

    Vector g = grad_vs[static_cast<std::size_t>(i)];
    Matrix a_bar = Matrix::Zero(n, n);
    if (i + 1 < rank) deflation_backward(a, estimate, carry, a_bar, g);
    if (!grad_values.empty()) {
      const double lambda_bar = grad_values[static_cast<std::size_t>(i)];
      const double vv = estimate.squaredNorm();
      a_bar += (lambda_bar / vv) * estimate * estimate.transpose();
      g += (2.0 * lambda_bar / vv) * (a * estimate - step.rayleigh * estimate);
    }
    // v^(k+1) = M v^(k) / ||M v^(k)||, unrolled from the last iterate.
    for (std::size_t k = step.iterates.size() - 1; k-- > 0;) {
      const Vector &prev = step.iterates[k];
      const Vector &next = step.iterates[k + 1];
      const double rho = (a * prev).norm();
      const Vector u = (g - next * next.dot(g)) / rho;
      a_bar += u * prev.transpose();
      g = a * u;
    }
    carry = std::move(a_bar);
  }
  return GradientReport::make(0.5 * (carry + carry.transpose()), std::numeric_limits<double>::infinity());
}

}  // namespace eigstab
