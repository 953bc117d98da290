/*
 * Copyright 2026 The c3msv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace c3msv {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument: out-of-range parameter, malformed partition, unknown tag.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is numerically singular.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double condition)
        : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Input is not positive definite where the operation requires it.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Truncated Fock basis is too small for the requested accuracy.
class CutoffError : public Error {
public:
    using Error::Error;
};

/// Photon subtraction on a mode with zero occupation.
class ZeroNormError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double previous, double last)
        : Error(what + " (last estimates " + std::to_string(previous) + ", " +
                std::to_string(last) + ")"),
          previous_(previous), last_(last) {}

    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

}  // namespace c3msv
