// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The pdpcmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace pdpcmp {

/// Raised by every library operation on a violated precondition or bad input.
/// The message starts with a stable short reason ("empty input",
/// "invalid threshold", "parse error at line 7", ...) that callers may match on.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pdpcmp
