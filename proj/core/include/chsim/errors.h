// Copyright 2026 The chsim Authors
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

namespace chsim {

/// Base class for every error raised by chsim.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Not enough trials to estimate what was asked for.
class InsufficientDataError : public Error {
   public:
    using Error::Error;
};

/// A conditional probability or correlator whose conditioning event never occurred.
class UndefinedEstimateError : public Error {
   public:
    using Error::Error;
};

/// A forging strategy read a datum its leakage channel does not carry.
class ContractViolation : public Error {
   public:
    using Error::Error;
};

class NotFoundError : public Error {
   public:
    using Error::Error;
};

/// Invalid experiment configuration. `field()` is the dotted path of the offending key
/// (e.g. "detector.eta_alice"), or empty when the problem is not tied to one field.
class ConfigError : public Error {
   public:
    ConfigError(std::string field, const std::string &message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {
    }

    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

/// Malformed input data. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
   public:
    ParseError(std::size_t line, const std::string &message)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {
    }

    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

/// Filesystem failure (unreadable input, unwritable output).
class IoError : public Error {
   public:
    using Error::Error;
};

}  // namespace chsim
