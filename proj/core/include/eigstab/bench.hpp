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

#ifndef EIGSTAB_BENCH_HPP_
#define EIGSTAB_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigstab/eig_grad.hpp"
#include "eigstab/layers.hpp"

namespace eigstab::bench {

// ---------------------------------------------------------------------------
// Spectrum stress benchmark.

struct SpectrumBenchConfig {
  std::vector<Eigen::Index> dims{8};
  // Geometric decay ratio; with gaps, the decay ratio of the tail below the
  // top eigenvalue pair.
  std::vector<double> ratios{0.5};
  // lambda_1 - lambda_2 of the generated matrix. Empty means purely
  // geometric spectra.
  std::vector<double> gaps;
  // Trials per (dim, ratio, gap) combination.
  int trials = 10;
  std::vector<GradientMethod> methods{GradientMethod::svd, GradientMethod::pi, GradientMethod::hybrid};
  int iterations = kDefaultPowerIterations;
  double epsilon = kDefaultEpsilon;
  // Number of leading eigenvectors that enter the loss sum_i c_i^T v_i.
  Eigen::Index vectors = 1;
  bool finite_differences = true;
  double fd_step = 1e-5;
  double explosion_threshold = 1e8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrialRecord {
  int trial_id = 0;
  GradientMethod method = GradientMethod::hybrid;
  std::string spectrum;
  Eigen::Index dim = 0;
  int iterations = 0;
  double grad_norm = 0.0;
  // +inf when exploded; nan when finite differences were disabled.
  double fd_relative_error = 0.0;
  bool exploded = false;
  double wall_time_ms = 0.0;
  // n K / eps * ||dL/dv|| for hybrid, +inf otherwise.
  double bound = 0.0;
  double cotangent_norm = 0.0;
};

// Records sorted by (trial_id, method order in config).
std::vector<TrialRecord> run_spectrum_bench(const SpectrumBenchConfig &config);

// ---------------------------------------------------------------------------
// Micro-training harness.

enum class LayerChoice { none, bn_like, zca, pca };
enum class Dataset { mixture, duplicated };

const char *to_string(LayerChoice layer);
LayerChoice parse_layer(const std::string &name);
const char *to_string(Dataset dataset);
Dataset parse_dataset(const std::string &name);

struct TrainBenchConfig {
  LayerChoice layer = LayerChoice::none;
  GradientMethod method = GradientMethod::hybrid;
  // Group sizes d; the hidden width must be a multiple of each.
  std::vector<Eigen::Index> group_sizes{64};
  int trials = 5;
  int epochs = 5;
  double lr = 0.1;
  int batch_size = 128;
  int iterations = kDefaultPowerIterations;
  double epsilon = kDefaultEpsilon;
  // PCA retained rank selection; energy threshold 0.95 when neither is set.
  std::optional<double> energy;
  std::optional<Eigen::Index> rank;

  Dataset dataset = Dataset::mixture;
  int classes = 8;
  int input_dim = 64;
  int hidden = 64;
  int train_points = 4096;
  int test_points = 1024;
  double divergence_threshold = 1e3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainRecord {
  int trial_id = 0;
  LayerChoice layer = LayerChoice::none;
  GradientMethod method = GradientMethod::hybrid;
  Eigen::Index group_size = 0;
  int epochs = 0;
  double final_loss = 0.0;
  bool diverged = false;
  double accuracy = 0.0;
};

// Seeded Gaussian-mixture classification set: features x labels.
struct LabeledData {
  Matrix features;
  std::vector<int> labels;
};

// mixture: class means N(0, 0.3^2 I) plus unit Gaussian noise.
// duplicated: classes-many base features, each repeated to fill input_dim,
// scaled by 0.25, so hidden covariances have an exactly repeated
// near-zero eigenvalue cluster.
std::pair<LabeledData, LabeledData> make_dataset(const TrainBenchConfig &config, std::uint64_t seed);

std::vector<TrainRecord> run_train_bench(const TrainBenchConfig &config);

// ---------------------------------------------------------------------------

// The 14 tabulated (ratio, minimum K) pairs.
std::vector<std::pair<double, int>> kmin_table(double tol = 0.05);

// CSV output: header row, comma-separated, reals as %.10g, booleans 0/1.
void write_csv(std::ostream &out, const std::vector<TrialRecord> &records);
void write_csv(std::ostream &out, const std::vector<TrainRecord> &records);
void write_kmin_csv(std::ostream &out, const std::vector<std::pair<double, int>> &table);

std::string format_real(double value);

}  // namespace eigstab::bench

#endif  // EIGSTAB_BENCH_HPP_
