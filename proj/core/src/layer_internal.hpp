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

#ifndef EIGSTAB_SRC_LAYER_INTERNAL_HPP_
#define EIGSTAB_SRC_LAYER_INTERNAL_HPP_

#include <cstdint>
#include <string_view>

#include "eigstab/layers.hpp"

namespace eigstab::internal {

// dL/dM (symmetric) for one group given cotangents of its accepted
// eigenvectors (columns of v_bar) and Rayleigh eigenvalues.
Matrix eigen_backward(const GroupTape &group, GradientMethod method, const Matrix &v_bar,
                      const Vector &lambda_bar, int iterations);

std::uint64_t group_seed(std::uint64_t base, int group);

void warn(std::string_view message);

// y = gamma o x + beta, per row.
Matrix affine(const Matrix &x, const Vector &gamma, const Vector &beta);

// Shared prologue of both backward passes. Fills grad_gamma and grad_beta
// and returns dL/d(pre_affine).
Matrix affine_backward(const LayerTape &tape, const Matrix &grad_y, LayerGradients &grads);

}  // namespace eigstab::internal

#endif  // EIGSTAB_SRC_LAYER_INTERNAL_HPP_
