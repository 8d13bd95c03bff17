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
#include <string>

#include "eigstab/errors.hpp"
#include "eigstab/layers.hpp"
#include "layer_internal.hpp"

namespace eigstab {

Batch pca_eval(const Batch &x, const PcaConfig &config) {
  config.validate();
  if (x.channels() != config.channels()) throw ShapeError("pca_eval: channel count mismatch");
  const Vector denom = config.running_std.array() + config.epsilon;
  const Matrix standardized =
      denom.cwiseInverse().asDiagonal() * (x.features().colwise() - config.running_mean);
  return Batch(internal::affine(config.running_subspace * standardized, config.gamma, config.beta));
}

LayerOutput pca_forward(const Batch &x, PcaConfig &config, Mode mode) {
  if (mode == Mode::eval) return {pca_eval(x, config), std::nullopt};
  config.validate();
  if (x.channels() != config.channels()) throw ShapeError("pca_forward: channel count mismatch");

  const Eigen::Index d = config.group_size();
  const auto n = static_cast<double>(x.samples());

  LayerTape tape;
  tape.kind = LayerKind::pca;
  tape.method = config.method;
  tape.epsilon = config.epsilon;
  tape.gamma = config.gamma;
  tape.mean = x.features().rowwise().mean();
  tape.centered = x.features().colwise() - tape.mean;
  tape.stddev = (tape.centered.array().square().rowwise().sum() / n).sqrt();
  const Vector denom = tape.stddev.array() + config.epsilon;
  tape.normalized = denom.cwiseInverse().asDiagonal() * tape.centered;
  tape.pre_affine.resize(x.channels(), x.samples());

  TruncationRule rule;
  rule.epsilon = config.epsilon;
  rule.energy_guard.reset();
  if (const auto *fixed = std::get_if<FixedRank>(&config.mode)) {
    rule.max_rank = fixed->rank;
  } else {
    rule.energy_target = std::get<EnergyThreshold>(config.mode).threshold;
  }

  for (int g = 0; g < config.groups; ++g) {
    GroupTape group;
    group.offset = g * d;
    group.size = d;
    const auto xg = tape.normalized.middleRows(group.offset, d);
    group.covariance = xg * xg.transpose() / n;
    const SymmetricMatrix m = regularize(SymmetricMatrix(group.covariance), config.epsilon);
    try {
      group.decomposition = truncated_eigen(m, rule, config.method, config.pi_iterations,
                                            internal::group_seed(config.pi_seed, g));
      // A full set of orthonormal vectors spans everything: P = I exactly.
      const Matrix v = group.decomposition.vectors();
      group.transform = group.decomposition.rank == d ? Matrix::Identity(d, d) : Matrix(v * v.transpose());
    } catch (const DegenerateBatch &) {
      group.degenerate = true;
      group.transform = Matrix::Identity(d, d);
      if (config.warn_on_fallback)
        internal::warn("pca group " + std::to_string(g) + " kept no eigenpair; using the identity transform");
    }
    tape.pre_affine.middleRows(group.offset, d) = group.transform * xg;
    tape.groups.push_back(std::move(group));
  }

  Batch output(internal::affine(tape.pre_affine, config.gamma, config.beta));

  const double m = config.momentum;
  for (const GroupTape &group : tape.groups) {
    if (group.degenerate) continue;
    auto mean = config.running_mean.segment(group.offset, group.size);
    mean = m * tape.mean.segment(group.offset, group.size) + (1.0 - m) * mean;
    auto stddev = config.running_std.segment(group.offset, group.size);
    stddev = m * tape.stddev.segment(group.offset, group.size) + (1.0 - m) * stddev;
    auto block = config.running_subspace.block(group.offset, group.offset, group.size, group.size);
    block = m * group.transform + (1.0 - m) * block;
  }
  if (config.method == GradientMethod::pi) ++config.pi_seed;

  return {std::move(output), std::move(tape)};
}

LayerGradients pca_backward(const LayerTape &tape, const Matrix &grad_y, int iterations) {
  if (tape.kind != LayerKind::pca) throw ConfigError("pca_backward: tape was recorded by a different layer");
  LayerGradients grads;
  const Matrix grad_pre = internal::affine_backward(tape, grad_y, grads);
  const Eigen::Index samples = tape.normalized.cols();
  const auto n = static_cast<double>(samples);

  Matrix grad_std(grad_pre.rows(), grad_pre.cols());
  for (const GroupTape &group : tape.groups) {
    const auto xg = tape.normalized.middleRows(group.offset, group.size);
    const auto gg = grad_pre.middleRows(group.offset, group.size);
    auto out = grad_std.middleRows(group.offset, group.size);
    out = group.transform.transpose() * gg;
    if (group.degenerate || group.decomposition.rank == group.size) continue;

    // P = sum_i v_i v_i^T
    const Matrix grad_p = gg * xg.transpose();
    const Matrix v = group.decomposition.vectors();
    const Matrix grad_v = (grad_p + grad_p.transpose()) * v;
    const Vector grad_lambda = Vector::Zero(v.cols());
    const Matrix grad_m = internal::eigen_backward(group, tape.method, grad_v, grad_lambda, iterations);
    out += (grad_m + grad_m.transpose()) * xg / n;
  }

  // y = x~ / (sigma + eps), sigma^2 = mean(x~^2), x~ = x - mean(x).
  Matrix grad_centered(grad_std.rows(), samples);
  for (Eigen::Index r = 0; r < grad_std.rows(); ++r) {
    const double sigma = tape.stddev(r);
    const double s = sigma + tape.epsilon;
    const auto centered = tape.centered.row(r);
    grad_centered.row(r) = grad_std.row(r) / s;
    if (sigma > 0.0) {
      const double grad_sigma = -grad_std.row(r).dot(centered) / (s * s);
      grad_centered.row(r) += (grad_sigma / (n * sigma)) * centered;
    }
  }
  grads.grad_x = grad_centered.colwise() - grad_centered.rowwise().mean();
  return grads;
}

}  // namespace eigstab
