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

#include "eigstab/gradcheck.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eigstab/errors.hpp"

namespace eigstab {

namespace {

double checked(double value) {
  if (!std::isfinite(value)) throw OracleFailure("finite differences: loss evaluated to a non-finite value");
  return value;
}

}  // namespace

Matrix finite_diff_gradient(const SymmetricLoss &loss, const SymmetricMatrix &m, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_gradient: step must be positive");
  const Eigen::Index n = m.dim();
  Matrix grad(n, n);
  Matrix probe = m.matrix();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      auto shift = [&](double delta) {
        probe(i, j) += delta;
        if (i != j) probe(j, i) += delta;
      };
      shift(h);
      const double plus = checked(loss(SymmetricMatrix(probe)));
      shift(-2.0 * h);
      const double minus = checked(loss(SymmetricMatrix(probe)));
      shift(h);
      probe(i, j) = m(i, j);
      probe(j, i) = m(j, i);

      double derivative = (plus - minus) / (2.0 * h);
      // <G, E_ij> = 2 G_ij off the diagonal.
      if (i != j) derivative *= 0.5;
      grad(i, j) = derivative;
      grad(j, i) = derivative;
    }
  }
  return grad;
}

Matrix finite_diff_matrix(const MatrixLoss &loss, const Matrix &x, double h) {
  if (!(h > 0.0)) throw DomainError("finite_diff_matrix: step must be positive");
  Matrix grad(x.rows(), x.cols());
  Matrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      probe(i, j) = x(i, j) + h;
      const double plus = checked(loss(probe));
      probe(i, j) = x(i, j) - h;
      const double minus = checked(loss(probe));
      probe(i, j) = x(i, j);
      grad(i, j) = (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

ComparisonResult compare(const Matrix &candidate, const Matrix &reference) {
  if (candidate.rows() != reference.rows() || candidate.cols() != reference.cols()) {
    throw ShapeError("compare: shape mismatch (" + std::to_string(candidate.rows()) + "x" +
                     std::to_string(candidate.cols()) + " vs " + std::to_string(reference.rows()) + "x" +
                     std::to_string(reference.cols()) + ")");
  }
  ComparisonResult result;
  result.both_finite = candidate.allFinite() && reference.allFinite();
  if (!result.both_finite) {
    result.relative_error = std::numeric_limits<double>::infinity();
    result.max_abs_diff = std::numeric_limits<double>::infinity();
    return result;
  }
  const Matrix diff = candidate - reference;
  result.max_abs_diff = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  result.relative_error = diff.norm() / std::max(1.0, reference.norm());
  return result;
}

bool detect_explosion(const Matrix &g, double threshold) {
  return !g.allFinite() || g.norm() > threshold;
}

SymmetricLoss eigenvector_loss(std::vector<Vector> cotangents, Matrix reference) {
  return [cotangents = std::move(cotangents), reference = std::move(reference)](const SymmetricMatrix &m) {
    const EigenDecomposition eig = sym_eigen(m);
    double total = 0.0;
    for (std::size_t i = 0; i < cotangents.size(); ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      Vector v = eig.vectors.col(col);
      if (v.dot(reference.col(col)) < 0.0) v = -v;
      total += cotangents[i].dot(v);
    }
    return total;
  };
}

}  // namespace eigstab
