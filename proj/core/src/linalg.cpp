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

#include "eigstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "eigstab/errors.hpp"

namespace eigstab {

SymmetricMatrix::SymmetricMatrix(const Matrix &entries) {
  if (entries.rows() != entries.cols()) {
    throw ShapeError("SymmetricMatrix: expected a square matrix, got " +
                     std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  if (!entries.allFinite()) throw DomainError("SymmetricMatrix: non-finite entry");
  entries_ = 0.5 * (entries + entries.transpose());
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
  return SymmetricMatrix(Matrix::Identity(n, n));
}

SymmetricMatrix SymmetricMatrix::zeros(Eigen::Index n) { return SymmetricMatrix(Matrix::Zero(n, n)); }

SymmetricMatrix SymmetricMatrix::diagonal(const Vector &diag) {
  return SymmetricMatrix(Matrix(diag.asDiagonal()));
}

void fix_signs(Matrix &vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

namespace {

double off_diagonal_norm(const Matrix &a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

// Zeroes a(p, q) with one Jacobi rotation, accumulating into v.
void rotate(Matrix &a, Matrix &v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Eigen::Index n = a.rows();

  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double arp = a(r, p);
    const double arq = a(r, q);
    a(r, p) = c * arp - s * arq;
    a(p, r) = a(r, p);
    a(r, q) = s * arp + c * arq;
    a(q, r) = a(r, q);
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    const double vrp = v(r, p);
    const double vrq = v(r, q);
    v(r, p) = c * vrp - s * vrq;
    v(r, q) = s * vrp + c * vrq;
  }
}

}  // namespace

EigenDecomposition sym_eigen(const SymmetricMatrix &m, const JacobiOptions &options) {
  const Eigen::Index n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double threshold = options.tolerance * m.frobenius_norm();

  bool converged = off_diagonal_norm(a) <= threshold;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) != 0.0) rotate(a, v, p, q);
      }
    }
    converged = off_diagonal_norm(a) <= threshold;
  }
  if (!converged) {
    throw EigensolverFailure("sym_eigen: no convergence after " +
                             std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  fix_signs(out.vectors);
  return out;
}

SymmetricMatrix regularize(const SymmetricMatrix &m, double eps) {
  if (!(eps > 0.0)) throw DomainError("regularize: epsilon must be positive");
  Matrix shifted = m.matrix();
  shifted.diagonal().array() += eps;
  return SymmetricMatrix(shifted);
}

void SpectrumSpec::validate() const {
  if (dim < 1) throw ConfigError("spectrum: dim must be at least 1");
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitSpectrum>) {
          if (static_cast<Eigen::Index>(p.eigenvalues.size()) != dim)
            throw ConfigError("spectrum: explicit eigenvalue count must equal dim");
        } else if constexpr (std::is_same_v<T, GeometricSpectrum>) {
          if (!(p.ratio > 0.0 && p.ratio <= 1.0))
            throw ConfigError("spectrum: ratio must lie in (0, 1]");
          if (!(p.scale >= 0.0)) throw ConfigError("spectrum: scale must be non-negative");
        } else {
          if (p.count < 1) throw ConfigError("spectrum: cluster count must be at least 1");
          if (!(p.gap >= 0.0)) throw ConfigError("spectrum: gap must be non-negative");
          if (!(p.tail_ratio > 0.0 && p.tail_ratio <= 1.0))
            throw ConfigError("spectrum: tail ratio must lie in (0, 1]");
        }
      },
      profile);
  Vector values = eigenvalues();
  if (!values.allFinite() || (values.array() < 0.0).any())
    throw ConfigError("spectrum: eigenvalues must be finite and non-negative");
}

Vector SpectrumSpec::eigenvalues() const {
  Vector values(dim);
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitSpectrum>) {
          for (Eigen::Index i = 0; i < dim && i < static_cast<Eigen::Index>(p.eigenvalues.size()); ++i)
            values(i) = p.eigenvalues[static_cast<std::size_t>(i)];
        } else if constexpr (std::is_same_v<T, GeometricSpectrum>) {
          double value = p.scale;
          for (Eigen::Index i = 0; i < dim; ++i, value *= p.ratio) values(i) = value;
        } else {
          double value = p.scale;
          for (Eigen::Index i = 0; i < dim; ++i) {
            if (i > 0) value = i < p.count ? value - p.gap : value * p.tail_ratio;
            values(i) = value;
          }
        }
      },
      profile);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

std::string SpectrumSpec::describe() const {
  std::ostringstream out;
  out.precision(6);
  std::visit(
      [&](const auto &p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExplicitSpectrum>) {
          out << "explicit:";
          for (std::size_t i = 0; i < p.eigenvalues.size(); ++i) out << (i ? ";" : "") << p.eigenvalues[i];
        } else if constexpr (std::is_same_v<T, GeometricSpectrum>) {
          out << "geometric:r=" << p.ratio;
        } else {
          out << "clustered:k=" << p.count << ";gap=" << p.gap << ";r=" << p.tail_ratio;
        }
      },
      profile);
  return out.str();
}

Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix &r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

SymmetricMatrix generate_matrix(const SpectrumSpec &spec) {
  spec.validate();
  const Matrix q = random_orthogonal(spec.dim, spec.seed);
  return SymmetricMatrix(q * spec.eigenvalues().asDiagonal() * q.transpose());
}

}  // namespace eigstab
