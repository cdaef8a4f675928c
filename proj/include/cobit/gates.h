// Copyright 2026 The Cobit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <span>
#include <string_view>

#include "cobit/qstate.h"

namespace cobit::gates {

Matrix identity(int width);
Matrix x();
Matrix y();
Matrix z();
Matrix h();
Matrix s();
Matrix t();
Matrix rx(double theta);
Matrix ry(double theta);
Matrix rz(double theta);
Matrix cnot();
Matrix cz();
Matrix swap();

/// U applied to every qubit of a `width`-qubit register.
Matrix on_each(const Matrix &single, int width);
/// Permutation matrix of |s>|d> -> |s>|d xor s> on two `width`-qubit registers.
Matrix xor_copy(int width);
/// Exchanges two `width`-qubit registers.
Matrix swap_registers(int width);
/// Permutation matrix of a bijection on [0, 2^width).
Matrix permutation(int width, const std::function<uint64_t(uint64_t)> &f);

/// Builds a named local gate for targets of the given widths:
///   x y z h s t id      one-qubit gates, applied to every qubit of the targets
///   rx ry rz            same, parameterized by `theta`
///   cnot cz             control register then target register (equal widths, bitwise)
///   swap                exchanges two equal-width registers
///   copy                alias of cnot, used to copy values into environment registers
Matrix named(std::string_view name, std::span<const int> target_widths, double theta = 0);

}  // namespace cobit::gates
