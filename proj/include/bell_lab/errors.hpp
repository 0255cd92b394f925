// Copyright 2026 The bell-lab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception types shared by every bell-lab module.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace bell_lab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A probability table or argument violates its invariants.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// Malformed serialized input (JSON, CSV, bit strings).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A model was asked for a table it does not have.
class IncompleteData : public Error {
  public:
    using Error::Error;
};

/// A marginal check requested the no-partner context but none is recorded.
class MissingSolo : public Error {
  public:
    using Error::Error;
};

/// Estimation from zero trials.
class EmptyCounts : public Error {
  public:
    using Error::Error;
};

} // namespace bell_lab
