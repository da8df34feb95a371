// Copyright 2026 The locmetric Authors
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

namespace locmetric {

/// Argument outside the closed range an operation accepts.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Deformation parameter outside (0, 1].
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two points too far apart to lie on a common unit sphere.
class NoEmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chain step longer than 2.
class ChainStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A step profile that no closed polygon realizes.
class RealizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search or DP whose state space would exceed the configured budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace locmetric
