// Copyright 2026 The deceptive-pi Authors
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

#ifndef DECEPTIVE_FORMAT_H_
#define DECEPTIVE_FORMAT_H_

#include <string>
#include <string_view>
#include <vector>

namespace deceptive {

// 17 significant digits ("%.17g"); round-trips every double. Infinities
// print as "inf"/"-inf".
std::string FormatReal(double value);

// Parses one real; accepts "inf", "+inf", "-inf". Throws ConfigError.
double ParseReal(std::string_view text);

// Comma-separated reals, whitespace tolerated.
std::vector<double> ParseRealList(std::string_view text);

}  // namespace deceptive

#endif  // DECEPTIVE_FORMAT_H_
