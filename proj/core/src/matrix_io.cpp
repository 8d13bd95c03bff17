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
#include <ostream>
#include <string>

#include "eigstab/errors.hpp"
#include "eigstab/linalg.hpp"

namespace eigstab {

void write_matrix(std::ostream &out, const Matrix &m) {
  out << m.rows() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream &in) {
  long long n = 0;
  if (!(in >> n) || n < 0) throw ParseError("read_matrix: missing or invalid dimension line");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      std::string token;
      if (!(in >> token)) {
        throw ParseError("read_matrix: expected " + std::to_string(n * n) + " values, got " +
                         std::to_string(i * n + j));
      }
      try {
        std::size_t used = 0;
        m(i, j) = std::stod(token, &used);
        if (used != token.size()) throw ParseError("read_matrix: bad value '" + token + "'");
      } catch (const std::logic_error &) {
        throw ParseError("read_matrix: bad value '" + token + "'");
      }
    }
  }
  return m;
}

}  // namespace eigstab
