// Copyright 2026 The qbanyan Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qbanyan {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An input lies outside the domain of the operation (wrong photon count,
/// overlapping paths, bad network size, ...).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A qubit or state whose squared amplitudes do not sum to one.
class NormError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// A linear map that was required to be unitary but is not.
class NonUnitaryError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// A post-selection with (numerically) zero probability.
class ImpossibleOutcome : public Error {
   public:
    using Error::Error;
};

/// A configuration the switch model deliberately does not handle, such as a
/// superposed control qubit or a fused payload contending with another input.
class UnsupportedError : public Error {
   public:
    using Error::Error;
};

}  // namespace qbanyan
