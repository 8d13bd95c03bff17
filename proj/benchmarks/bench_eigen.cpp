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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "eigstab/eig_grad.hpp"
#include "eigstab/layers.hpp"

namespace {

using namespace eigstab;

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

void BM_SymEigen(benchmark::State &state) {
  const SymmetricMatrix m = generate_matrix({state.range(0), GeometricSpectrum{0.9}, 1});
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SymEigen)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_PiGradientDominant(benchmark::State &state) {
  const Eigen::Index n = state.range(0);
  const SymmetricMatrix m = generate_matrix({n, GeometricSpectrum{0.9}, 2});
  const Vector v = sym_eigen(m).vector(0);
  const Vector g = gaussian(n, 1, 3).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(pi_gradient_dominant(m, v, g, kDefaultPowerIterations));
}
BENCHMARK(BM_PiGradientDominant)->RangeMultiplier(2)->Range(4, 128);

void BM_FullBackward(benchmark::State &state) {
  const Eigen::Index n = state.range(0);
  const SymmetricMatrix m = regularize(generate_matrix({n, GeometricSpectrum{0.8}, 4}), kDefaultEpsilon);
  const DeflationTape tape = record_deflation(m, sym_eigen(m), n, kDefaultEpsilon);
  std::vector<Vector> cot;
  for (Eigen::Index i = 0; i < n; ++i) cot.push_back(gaussian(n, 1, 10 + static_cast<std::uint64_t>(i)).col(0));
  for (auto _ : state) benchmark::DoNotOptimize(full_backward(tape, cot));
}
BENCHMARK(BM_FullBackward)->RangeMultiplier(2)->Range(4, 64);

void BM_AnalyticalBackward(benchmark::State &state) {
  const Eigen::Index n = state.range(0);
  const EigenDecomposition eig = sym_eigen(generate_matrix({n, GeometricSpectrum{0.8}, 4}));
  std::vector<Vector> cot;
  for (Eigen::Index i = 0; i < n; ++i) cot.push_back(gaussian(n, 1, 10 + static_cast<std::uint64_t>(i)).col(0));
  for (auto _ : state) benchmark::DoNotOptimize(ed_gradient_analytical(eig, cot));
}
BENCHMARK(BM_AnalyticalBackward)->RangeMultiplier(2)->Range(4, 64);

// args: channels, groups
void BM_ZcaTrainStep(benchmark::State &state) {
  const Eigen::Index c = state.range(0);
  const auto groups = static_cast<int>(state.range(1));
  const Batch x(gaussian(c, 128, 5));
  const Matrix gy = gaussian(c, 128, 6);
  for (auto _ : state) {
    ZcaLayerState s = ZcaLayerState::create(c, groups);
    const LayerOutput out = zca_forward(x, s, Mode::train);
    benchmark::DoNotOptimize(zca_backward(*out.tape, gy));
  }
}
BENCHMARK(BM_ZcaTrainStep)->Args({16, 1})->Args({64, 1})->Args({64, 4})->Args({64, 16});

void BM_PcaTrainStep(benchmark::State &state) {
  const Eigen::Index c = state.range(0);
  const Batch x(gaussian(c, 128, 7));
  const Matrix gy = gaussian(c, 128, 8);
  for (auto _ : state) {
    PcaConfig p = PcaConfig::create(c, EnergyThreshold{0.95});
    const LayerOutput out = pca_forward(x, p, Mode::train);
    benchmark::DoNotOptimize(pca_backward(*out.tape, gy));
  }
}
BENCHMARK(BM_PcaTrainStep)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
