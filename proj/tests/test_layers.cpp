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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eigstab/errors.hpp"
#include "eigstab/gradcheck.hpp"
#include "eigstab/layers.hpp"
#include "test_util.hpp"

namespace eigstab {
namespace {

using testing::randn;
using testing::with_covariance;

Matrix sample_cov(const Matrix &x) {
  const Matrix c = x.colwise() - x.rowwise().mean();
  return c * c.transpose() / static_cast<double>(x.cols());
}

// Batch whose covariance has eigenvalue ratio `ratio` between neighbours.
Matrix separated_batch(Eigen::Index c, Eigen::Index n, double ratio, std::uint64_t seed) {
  Vector scale(c);
  for (Eigen::Index i = 0; i < c; ++i) scale(i) = std::pow(ratio, 0.5 * static_cast<double>(i));
  return random_orthogonal(c, seed) * scale.asDiagonal() * randn(c, n, seed + 1000);
}

ZcaLayerState quiet_zca(Eigen::Index c, int groups = 1) {
  ZcaLayerState s = ZcaLayerState::create(c, groups);
  s.warn_on_fallback = false;
  return s;
}

PcaConfig quiet_pca(Eigen::Index c, PcaMode mode, int groups = 1) {
  PcaConfig p = PcaConfig::create(c, mode, groups);
  p.warn_on_fallback = false;
  return p;
}

double inner(const Matrix &a, const Matrix &b) { return (a.array() * b.array()).sum(); }

TEST(Batch, Validation) {
  EXPECT_THROW(Batch(Matrix::Zero(3, 1)), ShapeError);
  Matrix bad = Matrix::Zero(2, 3);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Batch{bad}, DomainError);
}

TEST(LayerParams, Validation) {
  EXPECT_THROW(ZcaLayerState::create(6, 4), ConfigError);
  ZcaLayerState s = ZcaLayerState::create(4);
  s.momentum = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s.momentum = 0.1;
  s.epsilon = -1;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(PcaConfig::create(4, FixedRank{5}), ConfigError);
  EXPECT_THROW(PcaConfig::create(4, EnergyThreshold{0.0}), ConfigError);
  EXPECT_THROW(PcaConfig::create(4, EnergyThreshold{1.5}), ConfigError);
  EXPECT_EQ(parse_gradient_method("hybrid"), GradientMethod::hybrid);
  EXPECT_THROW(parse_gradient_method("qr"), ConfigError);
}

TEST(ZcaForward, InitialState) {
  const ZcaLayerState s = ZcaLayerState::create(3);
  EXPECT_EQ(s.running_mean, Vector::Zero(3));
  EXPECT_EQ(s.running_subspace, Matrix::Identity(3, 3));
  EXPECT_EQ(s.gamma, Vector::Ones(3));
  EXPECT_EQ(s.beta, Vector::Zero(3));
  EXPECT_EQ(s.momentum, 0.1);
  EXPECT_EQ(s.epsilon, 1e-4);
}

TEST(ZcaForward, DiagonalCovariance) {
  const double a = 2.0, b = 0.5;
  Matrix target = Matrix::Zero(2, 2);
  target(0, 0) = a;
  target(1, 1) = b;
  const Matrix x = with_covariance(randn(2, 50, 3), target);
  ZcaLayerState s = quiet_zca(2);
  const auto out = zca_forward(Batch(x), s, Mode::train);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0 / std::sqrt(a + 1e-4);
  expected(1, 1) = 1.0 / std::sqrt(b + 1e-4);
  EXPECT_LE((out.tape->groups[0].transform - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ZcaForward, PreWhitenedIsNearIdentity) {
  const Matrix x = with_covariance(randn(4, 100, 4), Matrix::Identity(4, 4));
  ZcaLayerState s = quiet_zca(4);
  const auto out = zca_forward(Batch(x), s, Mode::train);
  EXPECT_LE((out.tape->pre_affine - x).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(ZcaForward, WhitensGaussianBatch) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix mix = randn(8, 8, seed);
    const Matrix x = mix * randn(8, 256, seed + 50);
    ZcaLayerState s = quiet_zca(8);
    const auto out = zca_forward(Batch(x), s, Mode::train);
    const Matrix v = out.tape->groups[0].decomposition.vectors();
    const Matrix on_subspace = v.transpose() * sample_cov(out.tape->pre_affine) * v;
    EXPECT_LE((on_subspace - Matrix::Identity(v.cols(), v.cols())).norm(), 0.02);
    const Vector eig = sym_eigen(SymmetricMatrix(on_subspace)).values;
    const double lmax = sym_eigen(SymmetricMatrix(sample_cov(x))).values(0);
    EXPECT_LE(eig.maxCoeff(), 1.02);
    EXPECT_GE(eig.minCoeff(), 1.0 - 10 * 1e-4 / lmax - 0.02);
  }
}

TEST(ZcaForward, TransformIsSymmetric) {
  ZcaLayerState s = quiet_zca(6);
  const auto out = zca_forward(Batch(randn(6, 40, 2)), s, Mode::train);
  const Matrix &t = out.tape->groups[0].transform;
  EXPECT_LE((t - t.transpose()).norm(), 1e-10);
}

TEST(ZcaForward, RunningStatisticsUpdate) {
  const Matrix x = randn(3, 20, 6).array() + 2.0;
  ZcaLayerState s = quiet_zca(3);
  const auto out = zca_forward(Batch(x), s, Mode::train);
  const Vector mu = x.rowwise().mean();
  const Matrix &st = out.tape->groups[0].transform;
  EXPECT_EQ(s.running_mean, Vector(0.1 * mu));
  EXPECT_EQ(s.running_subspace, Matrix(0.1 * st + 0.9 * Matrix::Identity(3, 3)));
}

TEST(ZcaForward, RankDeficientTruncates) {
  const Matrix x = randn(4, 2, 1) * randn(2, 30, 2);
  ZcaLayerState s = quiet_zca(4);
  const auto out = zca_forward(Batch(x), s, Mode::train);
  EXPECT_EQ(out.tape->groups[0].decomposition.rank, 2);
}

TEST(ZcaForward, DegenerateFallsBackToIdentity) {
  Matrix x = Matrix::Ones(3, 10);
  x.row(1) *= 5.0;
  ZcaLayerState s = quiet_zca(3);
  s.gamma << 1, 2, 3;
  const ZcaLayerState before = s;
  const auto out = zca_forward(Batch(x), s, Mode::train);
  EXPECT_TRUE(out.tape->groups[0].degenerate);
  EXPECT_EQ(out.tape->groups[0].transform, Matrix::Identity(3, 3));
  EXPECT_EQ(s.running_mean, before.running_mean);
  EXPECT_EQ(s.running_subspace, before.running_subspace);
  EXPECT_LE(out.output.features().norm(), 1e-12);
  EXPECT_THROW(truncated_eigen(regularize(SymmetricMatrix::zeros(3), 1e-4), TruncationRule{}), DegenerateBatch);
}

TEST(ZcaForward, EvalIsPure) {
  ZcaLayerState s = quiet_zca(4);
  zca_forward(Batch(randn(4, 30, 1)), s, Mode::train);
  const ZcaLayerState snapshot = s;
  const Batch probe(randn(4, 7, 2));
  const auto a = zca_forward(probe, s, Mode::eval);
  const auto b = zca_forward(probe, s, Mode::eval);
  EXPECT_FALSE(a.tape.has_value());
  EXPECT_EQ(a.output.features(), b.output.features());
  EXPECT_EQ(s.running_subspace, snapshot.running_subspace);
  EXPECT_EQ(s.running_mean, snapshot.running_mean);
  const Matrix expected =
      (s.running_subspace * (probe.features().colwise() - s.running_mean)).array().colwise() * s.gamma.array();
  EXPECT_LE((a.output.features() - (expected.colwise() + s.beta)).norm(), 1e-12);
}

TEST(ZcaBackward, AffineGradients) {
  ZcaLayerState s = quiet_zca(4);
  s.gamma = randn(4, 5);
  s.beta = randn(4, 6);
  const auto out = zca_forward(Batch(separated_batch(4, 32, 0.4, 1)), s, Mode::train);
  const Matrix gy = randn(4, 32, 7);
  const auto g = zca_backward(*out.tape, gy);
  EXPECT_LE((g.grad_beta - gy.rowwise().sum()).norm(), 1e-12);
  EXPECT_LE((g.grad_gamma - gy.cwiseProduct(out.tape->pre_affine).rowwise().sum()).norm(), 1e-12);
  const auto zero = zca_backward(*out.tape, Matrix::Zero(4, 32));
  EXPECT_EQ(zero.grad_x.norm() + zero.grad_gamma.norm() + zero.grad_beta.norm(), 0.0);
}

// Input gradients for every method against finite differences of <G, f(X)>.
void check_layer_gradient(bool pca, GradientMethod method, int iterations, double tolerance) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Matrix x = separated_batch(4, 32, 0.3, seed);
    const Matrix gy = randn(4, 32, seed + 99);
    auto forward = [&](const Matrix &input) {
      if (pca) {
        PcaConfig p = quiet_pca(4, FixedRank{2});
        p.method = method;
        return pca_forward(Batch(input), p, Mode::train);
      }
      ZcaLayerState s = quiet_zca(4);
      s.method = method;
      return zca_forward(Batch(input), s, Mode::train);
    };
    const auto out = forward(x);
    const auto g = pca ? pca_backward(*out.tape, gy, iterations) : zca_backward(*out.tape, gy, iterations);
    const Matrix fd =
        finite_diff_matrix([&](const Matrix &input) { return inner(gy, forward(input).output.features()); }, x);
    EXPECT_LE(compare(g.grad_x, fd).relative_error, tolerance) << "seed " << seed;
  }
}

TEST(ZcaBackward, HybridMatchesFiniteDifferences) { check_layer_gradient(false, GradientMethod::hybrid, 19, 1e-3); }
TEST(ZcaBackward, SvdMatchesFiniteDifferences) { check_layer_gradient(false, GradientMethod::svd, 19, 1e-6); }
TEST(ZcaBackward, HybridConvergesWithLargeK) { check_layer_gradient(false, GradientMethod::hybrid, 300, 1e-7); }
TEST(PcaBackward, HybridMatchesFiniteDifferences) { check_layer_gradient(true, GradientMethod::hybrid, 19, 1e-3); }
TEST(PcaBackward, SvdMatchesFiniteDifferences) { check_layer_gradient(true, GradientMethod::svd, 19, 1e-6); }
TEST(PcaBackward, HybridConvergesWithLargeK) { check_layer_gradient(true, GradientMethod::hybrid, 300, 1e-7); }

// At neighbour ratio q the truncated series leaves an error of order q^K.
TEST(ZcaBackward, TruncationErrorTracksRatio) {
  const double q = 0.85;
  const int k_tight = k_min(q, 1e-3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix target = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) target(i, i) = std::pow(q, i);
    const Matrix rot = random_orthogonal(4, seed);
    const Matrix x = with_covariance(randn(4, 32, seed), rot * target * rot.transpose());
    const Matrix gy = randn(4, 32, seed + 50);
    auto forward = [&](const Matrix &input) {
      ZcaLayerState s = quiet_zca(4);
      return zca_forward(Batch(input), s, Mode::train);
    };
    const auto out = forward(x);
    const Matrix fd =
        finite_diff_matrix([&](const Matrix &input) { return inner(gy, forward(input).output.features()); }, x);
    EXPECT_LE(compare(zca_backward(*out.tape, gy, 19).grad_x, fd).relative_error, std::pow(q, 19));
    EXPECT_LE(compare(zca_backward(*out.tape, gy, k_tight).grad_x, fd).relative_error, 1e-3);
  }
}

TEST(ZcaBackward, GroupedMatchesFiniteDifferences) {
  const Matrix x = separated_batch(6, 40, 0.3, 5);
  const Matrix gy = randn(6, 40, 6);
  auto forward = [&](const Matrix &input) {
    ZcaLayerState s = quiet_zca(6, 3);
    return zca_forward(Batch(input), s, Mode::train);
  };
  const auto g = zca_backward(*forward(x).tape, gy, 60);
  const Matrix fd =
      finite_diff_matrix([&](const Matrix &input) { return inner(gy, forward(input).output.features()); }, x);
  EXPECT_LE(compare(g.grad_x, fd).relative_error, 1e-6);
}

TEST(ZcaBackward, TruncatedMatchesFiniteDifferences) {
  // Rank-deficient data: the truncated eigenpairs sit at epsilon.
  const Matrix x = randn(5, 3, 1) * randn(3, 30, 2);
  const Matrix gy = randn(5, 30, 3);
  auto forward = [&](const Matrix &input) {
    ZcaLayerState s = quiet_zca(5);
    return zca_forward(Batch(input), s, Mode::train);
  };
  const auto out = forward(x);
  ASSERT_EQ(out.tape->groups[0].decomposition.rank, 3);
  const auto g = zca_backward(*out.tape, gy, 200);
  const Matrix fd =
      finite_diff_matrix([&](const Matrix &input) { return inner(gy, forward(input).output.features()); }, x);
  EXPECT_LE(compare(g.grad_x, fd).relative_error, 1e-5);
}

TEST(ZcaForward, PowerIterationMethod) {
  const Matrix x = separated_batch(4, 64, 0.3, 2);
  ZcaLayerState exact = quiet_zca(4);
  ZcaLayerState pi = quiet_zca(4);
  pi.method = GradientMethod::pi;
  pi.pi_iterations = 80;
  const auto a = zca_forward(Batch(x), exact, Mode::train);
  const auto b = zca_forward(Batch(x), pi, Mode::train);
  EXPECT_LE((a.output.features() - b.output.features()).norm(), 1e-6 * a.output.features().norm());
  EXPECT_EQ(pi.pi_seed, 1u);
  const Matrix gy = randn(4, 64, 3);
  const auto ga = zca_backward(*a.tape, gy, 200);
  const auto gb = zca_backward(*b.tape, gy, 200);
  EXPECT_LE(compare(gb.grad_x, ga.grad_x).relative_error, 1e-5);
}

TEST(PcaForward, SelectRankByEnergy) {
  Vector l(3);
  l << 0.90, 0.06, 0.04;
  EXPECT_EQ(select_rank_by_energy(l, 0.95), 2);
  EXPECT_EQ(select_rank_by_energy(l, 0.90), 1);
  EXPECT_EQ(select_rank_by_energy(l, 1.0), 3);
}

TEST(PcaForward, EnergyThresholdPicksRank) {
  Vector values(3);
  values << 0.90, 0.06, 0.04;
  const Matrix q = random_orthogonal(3, 4);
  const Matrix x = with_covariance(randn(3, 200, 5), q * values.asDiagonal() * q.transpose());
  // Standardization reshapes the spectrum; compare with the rule applied to it.
  PcaConfig p = quiet_pca(3, EnergyThreshold{0.95});
  const auto out = pca_forward(Batch(x), p, Mode::train);
  const Matrix z = out.tape->normalized;
  const Vector spectrum = sym_eigen(regularize(SymmetricMatrix(sample_cov(z)), 1e-4)).values;
  EXPECT_EQ(out.tape->groups[0].decomposition.rank, select_rank_by_energy(spectrum, 0.95));
}

TEST(PcaForward, FixedRankOneProjectsOntoFirstAxis) {
  Matrix target = Matrix::Zero(4, 4);
  target.diagonal() << 4, 1, 0.5, 0.25;
  const Matrix x = with_covariance(randn(4, 80, 7), target);
  PcaConfig p = quiet_pca(4, FixedRank{1});
  const auto out = pca_forward(Batch(x), p, Mode::train);
  const Matrix &y0 = out.tape->pre_affine;
  EXPECT_LE(y0.bottomRows(3).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((y0.row(0) - out.tape->normalized.row(0)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(PcaForward, ProjectorProperties) {
  PcaConfig p = quiet_pca(6, FixedRank{3});
  const auto out = pca_forward(Batch(randn(6, 50, 8)), p, Mode::train);
  const Matrix &proj = out.tape->groups[0].transform;
  EXPECT_LE((proj * proj - proj).norm(), 1e-9);
  const Matrix &y0 = out.tape->pre_affine;
  for (Eigen::Index j = 0; j < y0.cols(); ++j)
    EXPECT_LE(((Matrix::Identity(6, 6) - proj) * y0.col(j)).norm(), 1e-8 * y0.col(j).norm());
}

TEST(PcaForward, FullThresholdReproducesStandardizedInput) {
  const Matrix x = randn(5, 40, 9);
  PcaConfig p = quiet_pca(5, EnergyThreshold{1.0});
  const auto out = pca_forward(Batch(x), p, Mode::train);
  const Vector mu = x.rowwise().mean();
  const Matrix centered = x.colwise() - mu;
  const Vector sigma = (centered.array().square().rowwise().sum() / 40.0).sqrt();
  const Matrix standardized = centered.array().colwise() / (sigma.array() + 1e-4);
  EXPECT_LE((out.tape->pre_affine - standardized).cwiseAbs().maxCoeff(), 1e-6);
}

// Closed-form backward of x -> (x - mean) / (std + eps) per row.
Matrix standardize_backward(const Matrix &x, const Matrix &grad, double eps) {
  const auto n = static_cast<double>(x.cols());
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Eigen::RowVectorXd c = x.row(r).array() - x.row(r).mean();
    const double sigma = std::sqrt(c.squaredNorm() / n);
    const double s = sigma + eps;
    const double grad_sigma = -grad.row(r).dot(c) / (s * s);
    Eigen::RowVectorXd g = grad.row(r) / s + grad_sigma * c / (n * sigma);
    out.row(r) = g.array() - g.mean();
  }
  return out;
}

TEST(PcaBackward, FullThresholdIsStandardizationOnly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix x = randn(4, 32, seed);
    PcaConfig p = quiet_pca(4, EnergyThreshold{1.0});
    const auto out = pca_forward(Batch(x), p, Mode::train);
    ASSERT_EQ(out.tape->groups[0].decomposition.rank, 4);
    const Matrix gy = randn(4, 32, seed + 20);
    const auto g = pca_backward(*out.tape, gy, 19);
    EXPECT_LE((g.grad_x - standardize_backward(x, gy, 1e-4)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(PcaBackward, ZeroGradient) {
  PcaConfig p = quiet_pca(4, FixedRank{2});
  const auto out = pca_forward(Batch(randn(4, 32, 1)), p, Mode::train);
  const auto g = pca_backward(*out.tape, Matrix::Zero(4, 32));
  EXPECT_EQ(g.grad_x.norm() + g.grad_gamma.norm() + g.grad_beta.norm(), 0.0);
}

TEST(PcaForward, RunningStatsAndEval) {
  const Matrix x = randn(4, 30, 3).array() * 2.0 + 1.0;
  PcaConfig p = quiet_pca(4, FixedRank{2});
  const auto out = pca_forward(Batch(x), p, Mode::train);
  EXPECT_EQ(p.running_mean, Vector(0.1 * x.rowwise().mean()));
  EXPECT_EQ(p.running_subspace, Matrix(0.1 * out.tape->groups[0].transform + 0.9 * Matrix::Identity(4, 4)));
  EXPECT_EQ(p.running_std, Vector(0.1 * out.tape->stddev + 0.9 * Vector::Ones(4)));
  const PcaConfig snapshot = p;
  const Batch probe(randn(4, 5, 4));
  const Batch y = pca_eval(probe, p);
  const Matrix z = (probe.features().colwise() - p.running_mean).array().colwise() / (p.running_std.array() + 1e-4);
  EXPECT_LE((y.features() - p.running_subspace * z).norm(), 1e-12);
  EXPECT_EQ(p.running_subspace, snapshot.running_subspace);
}

TEST(GroupApply, Basics) {
  const Matrix x = randn(6, 5, 1);
  const auto twice = [](const Matrix &b) { return Matrix(2 * b); };
  EXPECT_EQ(group_apply(x, 1, twice), Matrix(2 * x));
  EXPECT_EQ(group_apply(x, 3, twice), Matrix(2 * x));
  EXPECT_THROW(group_apply(x, 4, twice), ShapeError);
  const auto rows = [](const Matrix &b) { return Matrix::Constant(b.rows(), b.cols(), static_cast<double>(b.rows())); };
  EXPECT_EQ(group_apply(x, 2, rows), Matrix::Constant(6, 5, 3.0));
}

TEST(GroupApply, PerChannelZcaIsStandardization) {
  const Matrix x = (randn(5, 64, 2).array().colwise() * Eigen::ArrayXd::LinSpaced(5, 0.5, 3.0)).matrix();
  ZcaLayerState s = quiet_zca(5, 5);
  s.epsilon = 1e-10;
  const auto out = zca_forward(Batch(x), s, Mode::train);
  const Matrix c = x.colwise() - x.rowwise().mean();
  const Vector sigma = (c.array().square().rowwise().sum() / 64.0).sqrt();
  const Matrix expected = c.array().colwise() / sigma.array();
  EXPECT_LE((out.tape->pre_affine - expected).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(GroupApply, BlockDiagonalMatchesUngrouped) {
  Matrix target = Matrix::Zero(6, 6);
  const Matrix a = randn(3, 3, 4), b = randn(3, 3, 5);
  target.topLeftCorner(3, 3) = a * a.transpose() + Matrix::Identity(3, 3);
  target.bottomRightCorner(3, 3) = b * b.transpose() + Matrix::Identity(3, 3);
  const Matrix x = with_covariance(randn(6, 100, 6), target);
  ZcaLayerState whole = quiet_zca(6, 1);
  ZcaLayerState split = quiet_zca(6, 2);
  const auto y1 = zca_forward(Batch(x), whole, Mode::train);
  const auto y2 = zca_forward(Batch(x), split, Mode::train);
  EXPECT_LE((y1.output.features() - y2.output.features()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(StateIo, ZcaRoundTrip) {
  ZcaLayerState s = quiet_zca(4, 2);
  s.method = GradientMethod::pi;
  zca_forward(Batch(randn(4, 30, 1)), s, Mode::train);
  s.gamma = randn(4, 2);
  std::stringstream buffer;
  write_state(buffer, s);
  const ZcaLayerState r = read_zca_state(buffer);
  EXPECT_EQ(r.running_mean, s.running_mean);
  EXPECT_EQ(r.running_subspace, s.running_subspace);
  EXPECT_EQ(r.gamma, s.gamma);
  EXPECT_EQ(r.beta, s.beta);
  EXPECT_EQ(r.groups, 2);
  EXPECT_EQ(r.method, GradientMethod::pi);
  EXPECT_EQ(r.pi_seed, s.pi_seed);
}

TEST(StateIo, PcaRoundTrip) {
  PcaConfig p = quiet_pca(4, EnergyThreshold{0.9});
  pca_forward(Batch(randn(4, 30, 2)), p, Mode::train);
  std::stringstream buffer;
  write_state(buffer, p);
  const PcaConfig r = read_pca_state(buffer);
  EXPECT_EQ(r.running_std, p.running_std);
  EXPECT_EQ(r.running_subspace, p.running_subspace);
  ASSERT_TRUE(std::holds_alternative<EnergyThreshold>(r.mode));
  EXPECT_EQ(std::get<EnergyThreshold>(r.mode).threshold, 0.9);
  std::stringstream wrong_kind;
  write_state(wrong_kind, p);
  EXPECT_THROW(read_zca_state(wrong_kind), ParseError);
  std::istringstream junk("eigstab-layer-state 1 zca\ngamma 1 2 1\n");
  EXPECT_THROW(read_zca_state(junk), ParseError);
}

}  // namespace
}  // namespace eigstab
