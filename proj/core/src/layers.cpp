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
#include <iostream>
#include <random>
#include <string>

#include "eigstab/errors.hpp"
#include "eigstab/layers.hpp"
#include "layer_internal.hpp"
#include "seed.hpp"

namespace eigstab {

Batch::Batch(Matrix features) : features_(std::move(features)) {
  if (features_.cols() < 2) throw ShapeError("Batch: need at least 2 samples");
  if (features_.rows() < 1) throw ShapeError("Batch: need at least 1 channel");
  if (!features_.allFinite()) throw DomainError("Batch: non-finite entry");
}

const char *to_string(GradientMethod method) {
  switch (method) {
    case GradientMethod::hybrid:
      return "hybrid";
    case GradientMethod::svd:
      return "svd";
    case GradientMethod::pi:
      return "pi";
  }
  return "?";
}

GradientMethod parse_gradient_method(const std::string &name) {
  if (name == "hybrid") return GradientMethod::hybrid;
  if (name == "svd") return GradientMethod::svd;
  if (name == "pi") return GradientMethod::pi;
  throw ConfigError("unknown gradient method '" + name + "' (expected svd, pi or hybrid)");
}

void NormLayerParams::init(Eigen::Index channels, int group_count) {
  running_mean = Vector::Zero(channels);
  running_subspace = Matrix::Identity(channels, channels);
  gamma = Vector::Ones(channels);
  beta = Vector::Zero(channels);
  groups = group_count;
}

void NormLayerParams::validate() const {
  const Eigen::Index c = gamma.size();
  if (c < 1) throw ConfigError("layer: no channels");
  if (beta.size() != c || running_mean.size() != c || running_subspace.rows() != c ||
      running_subspace.cols() != c)
    throw ConfigError("layer: parameter sizes disagree with the channel count " + std::to_string(c));
  if (!(momentum > 0.0 && momentum <= 1.0)) throw ConfigError("layer: momentum must lie in (0, 1]");
  if (!(epsilon > 0.0)) throw ConfigError("layer: epsilon must be positive");
  if (groups < 1 || c % groups != 0)
    throw ConfigError("layer: groups (" + std::to_string(groups) + ") must divide the channel count (" +
                      std::to_string(c) + ")");
  if (!running_subspace.allFinite() || !running_mean.allFinite())
    throw ConfigError("layer: running statistics are not finite");
  if (pi_iterations < 1) throw ConfigError("layer: pi_iterations must be >= 1");
}

ZcaLayerState ZcaLayerState::create(Eigen::Index channels, int groups) {
  ZcaLayerState state;
  state.init(channels, groups);
  state.validate();
  return state;
}

PcaConfig PcaConfig::create(Eigen::Index channels, PcaMode mode, int groups) {
  PcaConfig config;
  config.init(channels, groups);
  config.mode = mode;
  config.running_std = Vector::Ones(channels);
  config.validate();
  return config;
}

void PcaConfig::validate() const {
  NormLayerParams::validate();
  if (running_std.size() != channels()) throw ConfigError("pca: running_std size mismatch");
  if (const auto *fixed = std::get_if<FixedRank>(&mode)) {
    if (fixed->rank < 1 || fixed->rank > group_size())
      throw ConfigError("pca: fixed rank must lie in [1, group size " + std::to_string(group_size()) + "]");
  } else {
    const double t = std::get<EnergyThreshold>(mode).threshold;
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("pca: energy threshold must lie in (0, 1]");
  }
}

Matrix TruncatedEigen::vectors() const {
  if (!pi_tape.steps.empty()) {
    Matrix v(pi_tape.steps.front().deflated.dim(), rank);
    for (Eigen::Index i = 0; i < rank; ++i) v.col(i) = pi_tape.steps[static_cast<std::size_t>(i)].estimate();
    return v;
  }
  Matrix v(tape.dim(), rank);
  for (Eigen::Index i = 0; i < rank; ++i) v.col(i) = tape.steps[static_cast<std::size_t>(i)].vector;
  return v;
}

Vector TruncatedEigen::rayleigh() const {
  Vector values(rank);
  for (Eigen::Index i = 0; i < rank; ++i) {
    const auto k = static_cast<std::size_t>(i);
    values(i) = pi_tape.steps.empty() ? tape.steps[k].rayleigh : pi_tape.steps[k].rayleigh;
  }
  return values;
}

Eigen::Index select_rank_by_energy(const Vector &eigenvalues, double threshold) {
  const Eigen::Index n = eigenvalues.size();
  const double total = eigenvalues.sum();
  double cumulative = 0.0;
  for (Eigen::Index e = 1; e < n; ++e) {
    cumulative += eigenvalues(e - 1);
    if (cumulative / total >= threshold) return e;
  }
  return n;
}

TruncatedEigen truncated_eigen(const SymmetricMatrix &m, const TruncationRule &rule, GradientMethod method,
                               int pi_iterations, std::uint64_t pi_seed) {
  const Eigen::Index d = m.dim();
  const Eigen::Index max_rank = rule.max_rank < 0 ? d : std::min(d, rule.max_rank);
  TruncatedEigen out;
  out.tape.epsilon = rule.epsilon;

  std::mt19937_64 rng(pi_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double total = 0.0;
  if (method == GradientMethod::pi) {
    total = m.matrix().trace();
  } else {
    out.eig = sym_eigen(m);
    total = out.eig.values.sum();
  }

  SymmetricMatrix current = m;
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < max_rank; ++i) {
    if (rule.energy_guard && cumulative / total >= *rule.energy_guard) break;

    double lambda;
    if (method == GradientMethod::pi) {
      Vector v(d);
      for (Eigen::Index k = 0; k < d; ++k) v(k) = normal(rng);
      v.normalize();
      PowerIterationStep step{current, {v}, 0.0};
      for (int k = 0; k < pi_iterations; ++k) step.iterates.push_back(power_iteration_step(current, step.iterates.back()));
      step.rayleigh = rayleigh_quotient(current, step.estimate());
      lambda = step.rayleigh;
      if (lambda <= rule.epsilon) break;
      out.pi_tape.steps.push_back(std::move(step));
    } else {
      lambda = out.eig.values(i);
      if (lambda <= rule.epsilon) break;
      Vector v = out.eig.vectors.col(i);
      const double rayleigh = rayleigh_quotient(current, v);
      if (std::abs(rayleigh - lambda) / lambda >= rule.rayleigh_tolerance) break;
      out.tape.steps.push_back({current, std::move(v), rayleigh});
    }
    ++out.rank;
    cumulative += lambda;

    const double fraction = out.rank == d ? 1.0 : cumulative / total;
    if (rule.energy_target && fraction >= *rule.energy_target) break;
    if (out.rank < max_rank) {
      const Vector &v = method == GradientMethod::pi ? out.pi_tape.steps.back().estimate()
                                                     : out.tape.steps.back().vector;
      current = deflate(current, v);
    }
  }
  if (out.rank == 0) throw DegenerateBatch("truncated_eigen: no eigenpair passed the truncation guards");
  return out;
}

Matrix group_apply(const Matrix &x, int groups, const std::function<Matrix(const Matrix &)> &op) {
  if (groups < 1 || x.rows() % groups != 0)
    throw ShapeError("group_apply: " + std::to_string(groups) + " groups do not divide " +
                     std::to_string(x.rows()) + " channels");
  const Eigen::Index d = x.rows() / groups;
  Matrix out(x.rows(), x.cols());
  for (int g = 0; g < groups; ++g) {
    Matrix block = op(x.middleRows(g * d, d));
    if (block.rows() != d || block.cols() != x.cols()) throw ShapeError("group_apply: op changed the block shape");
    out.middleRows(g * d, d) = block;
  }
  return out;
}

namespace internal {

Matrix eigen_backward(const GroupTape &group, GradientMethod method, const Matrix &v_bar,
                      const Vector &lambda_bar, int iterations) {
  const TruncatedEigen &dec = group.decomposition;
  std::vector<Vector> grad_vs(static_cast<std::size_t>(dec.rank));
  std::vector<double> grad_values(static_cast<std::size_t>(dec.rank));
  for (Eigen::Index i = 0; i < dec.rank; ++i) {
    grad_vs[static_cast<std::size_t>(i)] = v_bar.col(i);
    grad_values[static_cast<std::size_t>(i)] = lambda_bar(i);
  }
  switch (method) {
    case GradientMethod::hybrid:
      return full_backward(dec.tape, grad_vs, grad_values, iterations).grad;
    case GradientMethod::svd: {
      const Matrix g = ed_gradient_analytical(dec.eig, grad_vs, grad_values).grad;
      return 0.5 * (g + g.transpose());
    }
    case GradientMethod::pi:
      return power_iteration_backward(dec.pi_tape, grad_vs, grad_values).grad;
  }
  return {};
}

std::uint64_t group_seed(std::uint64_t base, int group) {
  return derive_seed(base, static_cast<std::uint64_t>(group), 0);
}

void warn(std::string_view message) { std::clog << "eigstab: warning: " << message << '\n'; }

Matrix affine(const Matrix &x, const Vector &gamma, const Vector &beta) {
  return (gamma.asDiagonal() * x).colwise() + beta;
}

Matrix affine_backward(const LayerTape &tape, const Matrix &grad_y, LayerGradients &grads) {
  if (grad_y.rows() != tape.pre_affine.rows() || grad_y.cols() != tape.pre_affine.cols())
    throw ShapeError("backward: grad_y shape does not match the forward output");
  grads.grad_beta = grad_y.rowwise().sum();
  grads.grad_gamma = grad_y.cwiseProduct(tape.pre_affine).rowwise().sum();
  return tape.gamma.asDiagonal() * grad_y;
}

}  // namespace internal

}  // namespace eigstab
