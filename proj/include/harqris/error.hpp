// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The harqris Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace harqris {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (negative shape, NaN, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configuration is structurally invalid (shape mismatch, missing field, unknown key).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Adaptive series truncation could not reach its tolerance within the hard cap.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Not enough usable points to fit a diversity slope.
class FitError : public Error {
public:
    using Error::Error;
};

/// A computed probability left [0,1] by more than rounding can explain.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace harqris
