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

// eigstab: spectrum stress benchmarks, micro-training runs and the k_min table.
//
//   eigstab spectrum --dim 8,16 --ratio 0.5,0.9 --gap 0,1e-8 --method all
//   eigstab train --layer zca --method hybrid --group-size 4,8,16
//   eigstab kmin

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigstab/bench.hpp"
#include "eigstab/errors.hpp"

namespace {

using namespace eigstab;

struct Common {
  std::uint64_t seed = 0;
  int trials = 0;
  std::string out;
  double epsilon = kDefaultEpsilon;
  int iterations = kDefaultPowerIterations;
};

void add_common(CLI::App *app, Common &common, int default_trials) {
  common.trials = default_trials;
  app->add_option("--seed", common.seed, "Base seed for every random draw")->capture_default_str();
  app->add_option("--trials", common.trials, "Trials per configuration")->capture_default_str();
  app->add_option("--out", common.out, "Write CSV here instead of stdout");
  app->add_option("--epsilon", common.epsilon, "Covariance regularization")->capture_default_str();
  app->add_option("--iters", common.iterations, "Power-iteration terms K")->capture_default_str();
}

template <typename Write>
void emit(const std::string &path, Write write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot open --out file '" + path + "'");
  write(file);
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

std::vector<GradientMethod> parse_methods(const std::string &name) {
  if (name == "all") return {GradientMethod::svd, GradientMethod::pi, GradientMethod::hybrid};
  if (name != "svd" && name != "pi" && name != "hybrid")
    throw ConfigError("spectrum: --method must be svd, pi, hybrid or all (got '" + name + "')");
  return {parse_gradient_method(name)};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Stable eigendecomposition gradients: benchmarks and tables"};
  app.require_subcommand(1);

  Common spectrum_common;
  bench::SpectrumBenchConfig spectrum;
  std::string spectrum_method = "all";
  bool no_fd = false;
  auto *spectrum_cmd = app.add_subcommand("spectrum", "Gradient stress test on synthetic spectra");
  add_common(spectrum_cmd, spectrum_common, spectrum.trials);
  spectrum_cmd->add_option("--dim", spectrum.dims, "Matrix dimensions")->delimiter(',')->capture_default_str();
  spectrum_cmd->add_option("--ratio", spectrum.ratios, "Geometric decay ratios in (0, 1]")
      ->delimiter(',')
      ->capture_default_str();
  spectrum_cmd->add_option("--gap", spectrum.gaps, "Top eigengaps; switches to clustered spectra")->delimiter(',');
  spectrum_cmd->add_option("--method", spectrum_method, "svd, pi, hybrid or all")->capture_default_str();
  spectrum_cmd->add_option("--vectors", spectrum.vectors, "Leading eigenvectors in the loss")->capture_default_str();
  spectrum_cmd->add_option("--fd-step", spectrum.fd_step, "Finite-difference step")->capture_default_str();
  spectrum_cmd->add_flag("--no-fd", no_fd, "Skip the finite-difference reference");

  Common train_common;
  bench::TrainBenchConfig train;
  std::string layer = "none", train_method = "hybrid", dataset = "mixture";
  std::optional<double> energy;
  std::optional<Eigen::Index> rank;
  auto *train_cmd = app.add_subcommand("train", "Two-layer perceptron stability runs");
  add_common(train_cmd, train_common, train.trials);
  train_cmd->add_option("--layer", layer, "none, bn, zca or pca")->capture_default_str();
  train_cmd->add_option("--method", train_method, "svd, pi or hybrid")->capture_default_str();
  train_cmd->add_option("--group-size", train.group_sizes, "Channels per group")->delimiter(',')->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--lr", train.lr, "SGD learning rate")->capture_default_str();
  auto *energy_opt = train_cmd->add_option("--energy", energy, "PCA energy threshold in (0, 1]");
  train_cmd->add_option("--rank", rank, "PCA fixed rank")->excludes(energy_opt);
  train_cmd->add_option("--dataset", dataset, "mixture or duplicated")->capture_default_str();

  double tol = 0.05;
  std::string kmin_out;
  auto *kmin_cmd = app.add_subcommand("kmin", "Minimum K per eigenvalue ratio");
  kmin_cmd->add_option("--tol", tol, "Residual tolerance on (ratio)^K")->capture_default_str();
  kmin_cmd->add_option("--out", kmin_out, "Write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*spectrum_cmd) {
      spectrum.seed = spectrum_common.seed;
      spectrum.trials = spectrum_common.trials;
      spectrum.epsilon = spectrum_common.epsilon;
      spectrum.iterations = spectrum_common.iterations;
      spectrum.methods = parse_methods(spectrum_method);
      spectrum.finite_differences = !no_fd;
      const auto records = bench::run_spectrum_bench(spectrum);
      emit(spectrum_common.out, [&](std::ostream &out) { bench::write_csv(out, records); });
    } else if (*train_cmd) {
      train.seed = train_common.seed;
      train.trials = train_common.trials;
      train.epsilon = train_common.epsilon;
      train.iterations = train_common.iterations;
      train.layer = bench::parse_layer(layer);
      train.method = parse_gradient_method(train_method);
      train.dataset = bench::parse_dataset(dataset);
      train.energy = energy;
      train.rank = rank;
      if ((energy || rank) && train.layer != bench::LayerChoice::pca)
        throw ConfigError("train: --energy and --rank only apply to --layer pca");
      const auto records = bench::run_train_bench(train);
      emit(train_common.out, [&](std::ostream &out) { bench::write_csv(out, records); });
    } else {
      const auto table = bench::kmin_table(tol);
      emit(kmin_out, [&](std::ostream &out) { bench::write_kmin_csv(out, table); });
    }
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
