// Copyright 2026 The mgns Authors
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

#pragma once

// Shortest round-trip decimal formatting and exact parsing of doubles.

#include <string>
#include <string_view>

namespace mgns {

std::string format_double(double x);
/// Parses the whole string; throws ValidationError on trailing garbage.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace mgns
