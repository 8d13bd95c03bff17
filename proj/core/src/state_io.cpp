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

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "eigstab/errors.hpp"
#include "eigstab/layers.hpp"

namespace eigstab {

namespace {

constexpr const char *kHeader = "eigstab-layer-state";
constexpr int kVersion = 1;

struct NamedArray {
  std::vector<Eigen::Index> shape;
  std::vector<double> values;
};

using ArrayMap = std::map<std::string, NamedArray>;

void put(std::ostream &out, const std::string &name, const std::vector<Eigen::Index> &shape, const double *data,
         Eigen::Index count) {
  out << name << ' ' << shape.size();
  for (Eigen::Index s : shape) out << ' ' << s;
  char buf[32];
  for (Eigen::Index i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data[i]);
    out << ' ' << buf;
  }
  out << '\n';
}

void put_scalar(std::ostream &out, const std::string &name, double value) { put(out, name, {}, &value, 1); }

void put_vector(std::ostream &out, const std::string &name, const Vector &v) {
  put(out, name, {v.size()}, v.data(), v.size());
}

void put_matrix(std::ostream &out, const std::string &name, const Matrix &m) {
  // Row-major on disk.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = m;
  put(out, name, {m.rows(), m.cols()}, rows.data(), rows.size());
}

void write_common(std::ostream &out, const NormLayerParams &p) {
  put_scalar(out, "momentum", p.momentum);
  put_scalar(out, "epsilon", p.epsilon);
  put_scalar(out, "groups", p.groups);
  put_scalar(out, "method", static_cast<double>(static_cast<int>(p.method)));
  put_scalar(out, "pi_iterations", p.pi_iterations);
  put_scalar(out, "pi_seed", static_cast<double>(p.pi_seed));
  put_vector(out, "running_mean", p.running_mean);
  put_matrix(out, "running_subspace", p.running_subspace);
  put_vector(out, "gamma", p.gamma);
  put_vector(out, "beta", p.beta);
}

ArrayMap read_arrays(std::istream &in, const std::string &kind) {
  std::string header, found_kind;
  int version = 0;
  if (!(in >> header >> version >> found_kind) || header != kHeader)
    throw ParseError("layer state: missing '" + std::string(kHeader) + "' header");
  if (version != kVersion) throw ParseError("layer state: unsupported version " + std::to_string(version));
  if (found_kind != kind) throw ParseError("layer state: expected kind '" + kind + "', found '" + found_kind + "'");

  ArrayMap arrays;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name)) continue;
    std::size_t ndim = 0;
    if (!(fields >> ndim) || ndim > 2) throw ParseError("layer state: bad rank for '" + name + "'");
    NamedArray array;
    Eigen::Index count = 1;
    for (std::size_t k = 0; k < ndim; ++k) {
      Eigen::Index extent = -1;
      if (!(fields >> extent) || extent < 0) throw ParseError("layer state: bad shape for '" + name + "'");
      array.shape.push_back(extent);
      count *= extent;
    }
    array.values.resize(static_cast<std::size_t>(count));
    for (double &value : array.values) {
      std::string token;
      if (!(fields >> token)) throw ParseError("layer state: too few values for '" + name + "'");
      try {
        value = std::stod(token);
      } catch (const std::logic_error &) {
        throw ParseError("layer state: bad value '" + token + "' in '" + name + "'");
      }
    }
    std::string extra;
    if (fields >> extra) throw ParseError("layer state: too many values for '" + name + "'");
    arrays[name] = std::move(array);
  }
  return arrays;
}

const NamedArray &require(const ArrayMap &arrays, const std::string &name, std::size_t ndim) {
  auto it = arrays.find(name);
  if (it == arrays.end()) throw ParseError("layer state: missing array '" + name + "'");
  if (it->second.shape.size() != ndim) throw ParseError("layer state: '" + name + "' has the wrong rank");
  return it->second;
}

double get_scalar(const ArrayMap &arrays, const std::string &name) { return require(arrays, name, 0).values[0]; }

Vector get_vector(const ArrayMap &arrays, const std::string &name) {
  const NamedArray &a = require(arrays, name, 1);
  return Eigen::Map<const Vector>(a.values.data(), a.shape[0]);
}

Matrix get_matrix(const ArrayMap &arrays, const std::string &name) {
  const NamedArray &a = require(arrays, name, 2);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      a.values.data(), a.shape[0], a.shape[1]);
}

void read_common(const ArrayMap &arrays, NormLayerParams &p) {
  p.momentum = get_scalar(arrays, "momentum");
  p.epsilon = get_scalar(arrays, "epsilon");
  p.groups = static_cast<int>(get_scalar(arrays, "groups"));
  const int method = static_cast<int>(get_scalar(arrays, "method"));
  if (method < 0 || method > 2) throw ParseError("layer state: unknown method code");
  p.method = static_cast<GradientMethod>(method);
  p.pi_iterations = static_cast<int>(get_scalar(arrays, "pi_iterations"));
  p.pi_seed = static_cast<std::uint64_t>(get_scalar(arrays, "pi_seed"));
  p.running_mean = get_vector(arrays, "running_mean");
  p.running_subspace = get_matrix(arrays, "running_subspace");
  p.gamma = get_vector(arrays, "gamma");
  p.beta = get_vector(arrays, "beta");
}

}  // namespace

void write_state(std::ostream &out, const ZcaLayerState &state) {
  out << kHeader << ' ' << kVersion << " zca\n";
  write_common(out, state);
}

void write_state(std::ostream &out, const PcaConfig &config) {
  out << kHeader << ' ' << kVersion << " pca\n";
  write_common(out, config);
  put_vector(out, "running_std", config.running_std);
  if (const auto *fixed = std::get_if<FixedRank>(&config.mode)) {
    put_scalar(out, "mode_rank", static_cast<double>(fixed->rank));
  } else {
    put_scalar(out, "mode_energy", std::get<EnergyThreshold>(config.mode).threshold);
  }
}

ZcaLayerState read_zca_state(std::istream &in) {
  const ArrayMap arrays = read_arrays(in, "zca");
  ZcaLayerState state;
  read_common(arrays, state);
  try {
    state.validate();
  } catch (const ConfigError &e) {
    throw ParseError(std::string("layer state: ") + e.what());
  }
  return state;
}

PcaConfig read_pca_state(std::istream &in) {
  const ArrayMap arrays = read_arrays(in, "pca");
  PcaConfig config;
  read_common(arrays, config);
  config.running_std = get_vector(arrays, "running_std");
  if (arrays.count("mode_rank")) {
    config.mode = FixedRank{static_cast<Eigen::Index>(get_scalar(arrays, "mode_rank"))};
  } else {
    config.mode = EnergyThreshold{get_scalar(arrays, "mode_energy")};
  }
  try {
    config.validate();
  } catch (const ConfigError &e) {
    throw ParseError(std::string("layer state: ") + e.what());
  }
  return config;
}

}  // namespace eigstab
