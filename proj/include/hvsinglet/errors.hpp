// Copyright 2026 The hvsinglet Authors
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

#ifndef HVSINGLET_ERRORS_HPP_
#define HVSINGLET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hvs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Tangent vector (anti)parallel to the base point of a geodesic.
class DegenerateTangent : public Error {
 public:
  using Error::Error;
};

/// Input configuration on a measure-zero set where a formula is undefined
/// (for instance u = ±v in the Cerf inputs).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class UndefinedConditional : public Error {
 public:
  using Error::Error;
};

class InvalidProbability : public Error {
 public:
  using Error::Error;
};

class NotAtomic : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class AllSkipped : public Error {
 public:
  using Error::Error;
};

}  // namespace hvs

#endif  // HVSINGLET_ERRORS_HPP_
