// Copyright 2026 The steinlab Authors
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

#ifndef STEINLAB_COMMON_H
#define STEINLAB_COMMON_H

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace steinlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues at or below this value are treated as zero when computing supports.
inline constexpr double kDefaultEigCutoff = 1e-10;
/// Largest entrywise asymmetry that is silently symmetrized on ingestion.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
/// Largest Hilbert-space dimension any dense operation will accept.
inline constexpr std::size_t kMaxDim = std::size_t{1} << 16;

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (non-Hermitian matrix, bad probability, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A guard on problem size was exceeded.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Inputs are well formed but violate a mathematical precondition of the operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A nonnegative real number or +infinity.
///
/// Divergences and exponents are +infinity exactly when a support condition fails; the
/// infinite state is explicit rather than a large finite stand-in.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
  bool is_finite() const { return !is_infinite(); }
  /// The stored value; +inf when infinite.
  double value() const { return value_; }
  /// The stored value; throws PreconditionError when infinite.
  double finite_value() const {
    if (is_infinite()) {
      throw PreconditionError("value is +infinity");
    }
    return value_;
  }
  std::string to_string() const;

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) { return {a.value_ + b.value_}; }
  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.value_ < b.value_; }
  friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.value_ <= b.value_; }
  friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.value_ > b.value_; }
  friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.value_ >= b.value_; }

 private:
  double value_ = 0.0;
};

}  // namespace steinlab

#endif  // STEINLAB_COMMON_H
