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

namespace {

void check_channels(const Batch &x, const NormLayerParams &params) {
  if (x.channels() != params.channels())
    throw ShapeError("layer expects " + std::to_string(params.channels()) + " channels, got " +
                     std::to_string(x.channels()));
}

}  // namespace

Batch zca_eval(const Batch &x, const ZcaLayerState &state) {
  state.validate();
  check_channels(x, state);
  const Matrix centered = x.features().colwise() - state.running_mean;
  return Batch(internal::affine(state.running_subspace * centered, state.gamma, state.beta));
}

LayerOutput zca_forward(const Batch &x, ZcaLayerState &state, Mode mode) {
  if (mode == Mode::eval) return {zca_eval(x, state), std::nullopt};
  state.validate();
  check_channels(x, state);

  const Eigen::Index d = state.group_size();
  const auto n = static_cast<double>(x.samples());

  LayerTape tape;
  tape.kind = LayerKind::zca;
  tape.method = state.method;
  tape.epsilon = state.epsilon;
  tape.gamma = state.gamma;
  tape.mean = x.features().rowwise().mean();
  tape.centered = x.features().colwise() - tape.mean;
  tape.normalized = tape.centered;
  tape.pre_affine.resize(x.channels(), x.samples());

  TruncationRule rule;
  rule.epsilon = state.epsilon;

  for (int g = 0; g < state.groups; ++g) {
    GroupTape group;
    group.offset = g * d;
    group.size = d;
    const auto xg = tape.normalized.middleRows(group.offset, d);
    group.covariance = xg * xg.transpose() / n;
    const SymmetricMatrix m = regularize(SymmetricMatrix(group.covariance), state.epsilon);
    try {
      group.decomposition = truncated_eigen(m, rule, state.method, state.pi_iterations,
                                            internal::group_seed(state.pi_seed, g));
      const Matrix v = group.decomposition.vectors();
      const Vector scale = group.decomposition.rayleigh().array().rsqrt();
      group.transform = v * scale.asDiagonal() * v.transpose();
    } catch (const DegenerateBatch &) {
      group.degenerate = true;
      group.transform = Matrix::Identity(d, d);
      if (state.warn_on_fallback)
        internal::warn("zca group " + std::to_string(g) + " kept no eigenpair; using the identity transform");
    }
    tape.pre_affine.middleRows(group.offset, d) = group.transform * xg;
    tape.groups.push_back(std::move(group));
  }

  Batch output(internal::affine(tape.pre_affine, state.gamma, state.beta));

  for (const GroupTape &group : tape.groups) {
    if (group.degenerate) continue;
    auto mean = state.running_mean.segment(group.offset, group.size);
    mean = state.momentum * tape.mean.segment(group.offset, group.size) + (1.0 - state.momentum) * mean;
    auto block = state.running_subspace.block(group.offset, group.offset, group.size, group.size);
    block = state.momentum * group.transform + (1.0 - state.momentum) * block;
  }
  if (state.method == GradientMethod::pi) ++state.pi_seed;

  return {std::move(output), std::move(tape)};
}

LayerGradients zca_backward(const LayerTape &tape, const Matrix &grad_y, int iterations) {
  if (tape.kind != LayerKind::zca) throw ConfigError("zca_backward: tape was recorded by a different layer");
  LayerGradients grads;
  const Matrix grad_pre = internal::affine_backward(tape, grad_y, grads);
  const auto n = static_cast<double>(tape.normalized.cols());

  Matrix grad_centered(grad_pre.rows(), grad_pre.cols());
  for (const GroupTape &group : tape.groups) {
    const auto xg = tape.normalized.middleRows(group.offset, group.size);
    const auto gg = grad_pre.middleRows(group.offset, group.size);
    auto out = grad_centered.middleRows(group.offset, group.size);
    // Y0 = S X~
    out = group.transform.transpose() * gg;
    if (group.degenerate) continue;

    // S = sum_i rayleigh_i^{-1/2} v_i v_i^T
    const Matrix grad_s = gg * xg.transpose();
    const Matrix grad_s_sym = grad_s + grad_s.transpose();
    const Matrix v = group.decomposition.vectors();
    const Vector lambda = group.decomposition.rayleigh();
    Matrix grad_v(v.rows(), v.cols());
    Vector grad_lambda(v.cols());
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
      const double inv_sqrt = 1.0 / std::sqrt(lambda(i));
      grad_v.col(i) = inv_sqrt * (grad_s_sym * v.col(i));
      grad_lambda(i) = -0.5 * inv_sqrt / lambda(i) * v.col(i).dot(grad_s * v.col(i));
    }
    const Matrix grad_m = internal::eigen_backward(group, tape.method, grad_v, grad_lambda, iterations);
    // M = X~ X~^T / n + eps I
    out += (grad_m + grad_m.transpose()) * xg / n;
  }
  grads.grad_x = grad_centered.colwise() - grad_centered.rowwise().mean();
  return grads;
}

}  // namespace eigstab
