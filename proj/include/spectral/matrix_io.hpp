// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPECTRAL_MATRIX_IO_HPP_
#define SPECTRAL_MATRIX_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "spectral/linalg.hpp"

namespace spectral {

// Matrices on disk are headerless CSV, one row per line. Ragged rows, empty
// files and unparseable or non-finite cells are rejected with InputError.
DenseMatrix parse_matrix_csv(std::istream& in);
DenseMatrix read_matrix_csv(const std::string& path);

// Writes every entry with 17 significant digits so doubles round-trip.
void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
void write_matrix_csv(const std::string& path, const DenseMatrix& m);

// Shortest "%.17g" rendering used by every text emitter in the project.
std::string format_double(double x);

// Parses "1.5,2,3" into doubles; whitespace around cells is ignored.
std::vector<double> parse_double_list(const std::string& text);

}  // namespace spectral

#endif  // SPECTRAL_MATRIX_IO_HPP_
