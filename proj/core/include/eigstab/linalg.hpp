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

#ifndef EIGSTAB_LINALG_HPP_
#define EIGSTAB_LINALG_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace eigstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense real symmetric matrix. Construction symmetrizes the input as
// (A + A^T) / 2 and rejects non-finite entries, so entries(i, j) and
// entries(j, i) are bitwise equal afterwards.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Matrix &entries);

  static SymmetricMatrix identity(Eigen::Index n);
  static SymmetricMatrix zeros(Eigen::Index n);
  static SymmetricMatrix diagonal(const Vector &diag);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix &matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  double frobenius_norm() const { return entries_.norm(); }

 private:
  Matrix entries_;
};

// Eigenvalues sorted in non-increasing order, eigenvectors as matching
// unit columns. The entry of largest magnitude in each eigenvector is
// non-negative (lowest index wins ties).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  Eigen::Index dim() const { return values.size(); }
  Vector vector(Eigen::Index i) const { return vectors.col(i); }
};

struct JacobiOptions {
  // Converged once ||offdiag(A)||_F <= tolerance * ||M||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

// Full eigendecomposition by cyclic Jacobi rotations. Deterministic for
// identical input. Throws EigensolverFailure when max_sweeps is exhausted.
EigenDecomposition sym_eigen(const SymmetricMatrix &m, const JacobiOptions &options = {});

// Returns M + eps * I. Throws DomainError unless eps > 0.
SymmetricMatrix regularize(const SymmetricMatrix &m, double eps);

// Flips eigenvector columns so that the largest-magnitude entry of each is
// non-negative.
void fix_signs(Matrix &vectors);

// Synthetic spectra for test and benchmark matrices.
struct ExplicitSpectrum {
  std::vector<double> eigenvalues;
};

// lambda_i = scale * ratio^(i-1).
struct GeometricSpectrum {
  double ratio = 0.5;
  double scale = 1.0;
};

// The top `count` eigenvalues are scale, scale - gap, scale - 2 gap, ...;
// the remaining ones decay geometrically from the last clustered value.
struct ClusteredSpectrum {
  int count = 2;
  double gap = 0.0;
  double tail_ratio = 0.5;
  double scale = 1.0;
};

using SpectrumProfile = std::variant<ExplicitSpectrum, GeometricSpectrum, ClusteredSpectrum>;

struct SpectrumSpec {
  Eigen::Index dim = 0;
  SpectrumProfile profile;
  std::uint64_t seed = 0;

  // Throws ConfigError for negative eigenvalues, ratio outside (0, 1],
  // negative gap, or an explicit list whose length differs from dim.
  void validate() const;
  // Eigenvalues in non-increasing order.
  Vector eigenvalues() const;
  // Compact description safe for CSV cells, e.g. "geometric:r=0.5".
  std::string describe() const;
};

// Haar-distributed orthogonal matrix from a seeded Gaussian QR.
Matrix random_orthogonal(Eigen::Index n, std::uint64_t seed);

// Q diag(lambda) Q^T with Q = random_orthogonal(dim, seed).
SymmetricMatrix generate_matrix(const SpectrumSpec &spec);

// Text format: first line n, then n rows of n values. Output uses %.17g.
void write_matrix(std::ostream &out, const Matrix &m);
Matrix read_matrix(std::istream &in);

}  // namespace eigstab

#endif  // EIGSTAB_LINALG_HPP_
