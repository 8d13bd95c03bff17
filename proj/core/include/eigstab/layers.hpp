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

#ifndef EIGSTAB_LAYERS_HPP_
#define EIGSTAB_LAYERS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "eigstab/eig_grad.hpp"
#include "eigstab/linalg.hpp"

namespace eigstab {

// c x n feature matrix: c channels, n samples. Entries finite, n >= 2.
class Batch {
 public:
  Batch() = default;
  explicit Batch(Matrix features);

  Eigen::Index channels() const { return features_.rows(); }
  Eigen::Index samples() const { return features_.cols(); }
  const Matrix &features() const { return features_; }

 private:
  Matrix features_;
};

enum class Mode { train, eval };

// How eigenvector gradients are computed inside a layer.
//   hybrid: exact eigensolver forward, power-iteration backward.
//   svd:    exact eigensolver forward, analytical backward.
//   pi:     randomly initialized power iterations forward and backward.
enum class GradientMethod { hybrid, svd, pi };

const char *to_string(GradientMethod method);
GradientMethod parse_gradient_method(const std::string &name);

// Fields shared by the whitening and denoising layers.
struct NormLayerParams {
  Vector running_mean;
  Matrix running_subspace;
  Vector gamma;
  Vector beta;
  double momentum = 0.1;
  double epsilon = kDefaultEpsilon;
  int groups = 1;

  GradientMethod method = GradientMethod::hybrid;
  // Forward iterations per deflation step for GradientMethod::pi.
  int pi_iterations = kDefaultPowerIterations;
  // Advanced after every train-mode forward that uses GradientMethod::pi.
  std::uint64_t pi_seed = 0;
  bool warn_on_fallback = true;

  Eigen::Index channels() const { return gamma.size(); }
  Eigen::Index group_size() const { return channels() / groups; }
  // Throws ConfigError on inconsistent sizes or out-of-range settings.
  void validate() const;

 protected:
  void init(Eigen::Index channels, int group_count);
};

struct ZcaLayerState : NormLayerParams {
  static ZcaLayerState create(Eigen::Index channels, int groups = 1);
};

struct FixedRank {
  Eigen::Index rank = 1;
};

struct EnergyThreshold {
  double threshold = 0.95;
};

using PcaMode = std::variant<FixedRank, EnergyThreshold>;

struct PcaConfig : NormLayerParams {
  PcaMode mode = EnergyThreshold{};
  // Running per-channel standard deviation used by eval-mode standardization.
  Vector running_std;

  static PcaConfig create(Eigen::Index channels, PcaMode mode, int groups = 1);
  void validate() const;
};

// ---------------------------------------------------------------------------
// Truncated eigendecomposition of a regularized covariance matrix.

struct TruncationRule {
  double epsilon = kDefaultEpsilon;
  // Break when |rayleigh_i - lambda_i| / lambda_i reaches this value.
  double rayleigh_tolerance = 0.1;
  // Break before index i when the energy fraction of the eigenpairs already
  // accepted reaches this value.
  std::optional<double> energy_guard = 1.0 - 1e-4;
  // Stop after accepting index i once its cumulative energy fraction
  // reaches this value.
  std::optional<double> energy_target;
  Eigen::Index max_rank = -1;
};

struct TruncatedEigen {
  EigenDecomposition eig;      // empty for GradientMethod::pi
  DeflationTape tape;          // hybrid and svd
  PowerIterationTape pi_tape;  // pi
  Eigen::Index rank = 0;

  // Accepted eigenvectors as columns.
  Matrix vectors() const;
  // Rayleigh-quotient eigenvalues of the accepted eigenvectors.
  Vector rayleigh() const;
};

// The forward deflation loop: walks eigenpairs in order, computing each
// Rayleigh quotient on the deflated matrix, and breaks on the first index
// with lambda_i <= epsilon, a Rayleigh/eigensolver disagreement, or an
// exhausted energy guard. Throws DegenerateBatch when nothing is accepted.
TruncatedEigen truncated_eigen(const SymmetricMatrix &m, const TruncationRule &rule,
                               GradientMethod method = GradientMethod::hybrid, int pi_iterations = kDefaultPowerIterations,
                               std::uint64_t pi_seed = 0);

// Smallest e whose cumulative eigenvalue fraction reaches threshold; the
// full count always qualifies.
Eigen::Index select_rank_by_energy(const Vector &eigenvalues, double threshold);

// ---------------------------------------------------------------------------

enum class LayerKind { zca, pca };

struct GroupTape {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
  bool degenerate = false;
  TruncatedEigen decomposition;
  // S (whitening) or P (projector) for this group.
  Matrix transform;
  // Sample covariance of the normalized input before the epsilon shift.
  Matrix covariance;
};

struct LayerTape {
  LayerKind kind = LayerKind::zca;
  GradientMethod method = GradientMethod::hybrid;
  double epsilon = kDefaultEpsilon;
  Vector mean;
  Vector stddev;      // pca only
  Matrix centered;    // input minus its per-channel mean
  Matrix normalized;  // centered (zca) or standardized (pca) input
  Matrix pre_affine;
  Vector gamma;
  std::vector<GroupTape> groups;
};

struct LayerOutput {
  Batch output;
  std::optional<LayerTape> tape;  // set in train mode only
};

struct LayerGradients {
  Matrix grad_x;
  Vector grad_gamma;
  Vector grad_beta;
};

// Splits the rows of x into G contiguous blocks, applies op to each and
// reassembles them in order. Throws ShapeError unless G divides c.
Matrix group_apply(const Matrix &x, int groups, const std::function<Matrix(const Matrix &)> &op);

// ZCA whitening. Train mode uses batch statistics, records a tape and
// updates the running statistics; eval mode delegates to zca_eval.
LayerOutput zca_forward(const Batch &x, ZcaLayerState &state, Mode mode);
Batch zca_eval(const Batch &x, const ZcaLayerState &state);
LayerGradients zca_backward(const LayerTape &tape, const Matrix &grad_y,
                            int iterations = kDefaultPowerIterations);

// PCA denoising: standardize, project onto the leading eigenvectors of the
// covariance, scale and shift.
LayerOutput pca_forward(const Batch &x, PcaConfig &config, Mode mode);
Batch pca_eval(const Batch &x, const PcaConfig &config);
LayerGradients pca_backward(const LayerTape &tape, const Matrix &grad_y,
                            int iterations = kDefaultPowerIterations);

// Layer state checkpoints: one named array per line,
//   <name> <ndim> <shape...> <values...>
// preceded by a header naming the layer kind.
void write_state(std::ostream &out, const ZcaLayerState &state);
void write_state(std::ostream &out, const PcaConfig &config);
ZcaLayerState read_zca_state(std::istream &in);
PcaConfig read_pca_state(std::istream &in);

}  // namespace eigstab

#endif  // EIGSTAB_LAYERS_HPP_
