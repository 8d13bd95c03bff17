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
#include <cstdio>
#include <ostream>

#include "eigstab/bench.hpp"

namespace eigstab::bench {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

void write_csv(std::ostream &out, const std::vector<TrialRecord> &records) {
  out << "trial_id,method,spectrum,dim,K,grad_norm,fd_relative_error,exploded,wall_time_ms,bound,"
         "cotangent_norm\n";
  for (const TrialRecord &r : records) {
    out << r.trial_id << ',' << to_string(r.method) << ',' << r.spectrum << ',' << r.dim << ',' << r.iterations
        << ',' << format_real(r.grad_norm) << ',' << format_real(r.fd_relative_error) << ','
        << (r.exploded ? 1 : 0) << ',' << format_real(r.wall_time_ms) << ',' << format_real(r.bound) << ','
        << format_real(r.cotangent_norm) << '\n';
  }
}

void write_csv(std::ostream &out, const std::vector<TrainRecord> &records) {
  out << "trial_id,layer,method,d,epochs,final_loss,diverged,accuracy\n";
  for (const TrainRecord &r : records) {
    out << r.trial_id << ',' << to_string(r.layer) << ',' << to_string(r.method) << ',' << r.group_size << ','
        << r.epochs << ',' << format_real(r.final_loss) << ',' << (r.diverged ? 1 : 0) << ','
        << format_real(r.accuracy) << '\n';
  }
}

void write_kmin_csv(std::ostream &out, const std::vector<std::pair<double, int>> &table) {
  out << "ratio,k_min\n";
  for (const auto &[ratio, k] : table) out << format_real(ratio) << ',' << k << '\n';
}

}  // namespace eigstab::bench
