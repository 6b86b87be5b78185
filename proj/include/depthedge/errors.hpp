// Copyright 2026-present the depthedge project
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

#include <stdexcept>
#include <string>

namespace depthedge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor dimensions disagree with what an operation requires.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters (even kernel size, indivisible resolution, empty list...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numeric domain violation (non-positive depth, zero median, singular fit...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or corrupted serialized data.
/// A fit or estimate has no unique solution (rank-deficient data).
class DegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace depthedge
