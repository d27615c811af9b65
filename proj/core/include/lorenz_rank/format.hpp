// Copyright 2026 The lorenz-rank Authors
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

#ifndef LORENZ_RANK_FORMAT_HPP_
#define LORENZ_RANK_FORMAT_HPP_

#include <string>
#include <string_view>

namespace lorenz_rank {

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

// Strict decimal parse of the whole string. Throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace lorenz_rank

#endif  // LORENZ_RANK_FORMAT_HPP_
