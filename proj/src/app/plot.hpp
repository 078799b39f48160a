// Copyright 2026 The qsph Authors
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

// Minimal binary PPM rendering for quick looks at fields and curves.

#pragma once

#include <string>
#include <vector>

namespace qsph::app::plot {

/// Scattered lattice values drawn cell by cell; diverging colours about zero
/// when the data changes sign.
void heatmap(const std::string& path, const std::vector<double>& x, const std::vector<double>& y,
             const std::vector<double>& v);

struct Series {
  std::vector<double> x;
  std::vector<double> y;
};

void lines(const std::string& path, const std::vector<Series>& series, bool log_y);

}  // namespace qsph::app::plot
