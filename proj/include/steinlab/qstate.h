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

#ifndef STEINLAB_QSTATE_H
#define STEINLAB_QSTATE_H

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "steinlab/common.h"

namespace steinlab {

enum class Subsystem { A, B };

/// Eigen-decomposition of a Hermitian operator, eigenvalues in descending order.
struct Spectrum {
  std::vector<double> eigenvalues;
  /// Column i is the eigenvector of eigenvalues[i].
  Matrix eigenvectors;
};

/// Returns (m + m^dagger)/2, or throws ValidationError when m is further than `tol` from
/// Hermitian in any entry.
Matrix symmetrize_hermitian(const Matrix& m, double tol = kHermitianTol);

/// Spectrum of a Hermitian matrix (no positivity requirement).
Spectrum hermitian_spectrum(const Matrix& h);

/// Applies f to the eigenvalues of a Hermitian matrix.
Matrix hermitian_apply(const Matrix& h, const std::function<double(double)>& f);
/// Natural log on the eigenspaces with eigenvalue above `cutoff`, zero elsewhere.
Matrix hermitian_log_on_support(const Matrix& h, double cutoff = kDefaultEigCutoff);
/// Square root; eigenvalues below zero (roundoff) are clamped to zero.
Matrix hermitian_sqrt(const Matrix& h);
/// Inverse square root; throws PreconditionError unless h is positive definite.
Matrix hermitian_inv_sqrt(const Matrix& h, double cutoff = kDefaultEigCutoff);
Matrix hermitian_exp(const Matrix& h);
/// exp(i h) for Hermitian h.
Matrix unitary_exp(const Matrix& h);

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above `cutoff`.
Matrix support_projector(const Matrix& h, double cutoff = kDefaultEigCutoff);

/// Coordinates of a Hermitian r x r matrix in the Frobenius-orthonormal basis
/// {E_ii, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2 : i < j}; r*r real numbers.
RealVector hermitian_coordinates(const Matrix& h);
/// Inverse of hermitian_coordinates, reading r*r values of `x` starting at `offset`.
Matrix hermitian_from_coordinates(const RealVector& x, Eigen::Index offset, Eigen::Index r);

/// Kronecker product (first factor is the most significant index).
Matrix kron(const Matrix& a, const Matrix& b);

/// Partial trace of an operator on C^{d_A} (x) C^{d_B}, keeping the named factor.
Matrix partial_trace(const Matrix& m, std::size_t d_A, std::size_t d_B, Subsystem keep);

/// An orthonormal basis, stored as the columns of a unitary matrix.
class PVMBasis {
 public:
  explicit PVMBasis(Matrix vectors, double tol = 1e-10);
  static PVMBasis computational(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(unitary_.cols()); }
  const Matrix& unitary() const { return unitary_; }
  Vector vector(std::size_t i) const { return unitary_.col(static_cast<Eigen::Index>(i)); }

 private:
  Matrix unitary_;
};

/// A validated density operator with a cached spectral decomposition.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m, double eig_cutoff = kDefaultEigCutoff);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  double eig_cutoff() const { return eig_cutoff_; }
  /// Eigenvalues at or below the cutoff are reported as 0.
  const Spectrum& spectrum() const { return *spectrum_; }
  std::size_t rank() const;
  Matrix support_projector() const;
  /// Columns spanning the support (eigenvectors with positive eigenvalue).
  Matrix support_basis() const;

 private:
  Matrix matrix_;
  double eig_cutoff_;
  std::shared_ptr<const Spectrum> spectrum_;
};

/// A null state and an alternative state on the same bipartite space.
class BipartitePair {
 public:
  BipartitePair(DensityOperator null_state, DensityOperator alt_state, std::size_t d_A,
                std::size_t d_B);

  std::size_t d_A() const { return d_A_; }
  std::size_t d_B() const { return d_B_; }
  const DensityOperator& null_state() const { return null_; }
  const DensityOperator& alt_state() const { return alt_; }
  DensityOperator null_marginal(Subsystem s) const;
  DensityOperator alt_marginal(Subsystem s) const;

 private:
  DensityOperator null_;
  DensityOperator alt_;
  std::size_t d_A_;
  std::size_t d_B_;
};

/// A product of local bases acting on blocks of `block_size` copies.
class LocalPVM {
 public:
  /// `d_A`, `d_B` are single-copy dimensions; the bases act on d^block_size.
  LocalPVM(PVMBasis basis_A, PVMBasis basis_B, std::size_t d_A, std::size_t d_B,
           int block_size = 1);
  static LocalPVM computational(std::size_t d_A, std::size_t d_B, int block_size = 1);

  const PVMBasis& basis_A() const { return basis_A_; }
  const PVMBasis& basis_B() const { return basis_B_; }
  std::size_t d_A() const { return d_A_; }
  std::size_t d_B() const { return d_B_; }
  int block_size() const { return block_size_; }
  /// basis_A (x) basis_B as a unitary on the joint block space.
  Matrix product_unitary() const;

 private:
  PVMBasis basis_A_;
  PVMBasis basis_B_;
  std::size_t d_A_;
  std::size_t d_B_;
  int block_size_;
};

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b,
                               std::size_t max_dim = kMaxDim);
DensityOperator partial_trace(const DensityOperator& state, std::size_t d_A, std::size_t d_B,
                              Subsystem keep);
Spectrum spectral(const DensityOperator& state);
/// True when supp(a) lies in supp(b): the part of a outside supp(b) has operator norm
/// at most 1e-9.
bool support_contained(const DensityOperator& a, const Matrix& b,
                       double cutoff = kDefaultEigCutoff);
/// Sum over basis vectors v of |v><v| op |v><v|.
Matrix pinch(const Matrix& op, const PVMBasis& basis);

/// The m-fold tensor power of a bipartite operator, with factors regrouped as A^m (x) B^m.
Matrix block_power(const Matrix& state, std::size_t d_A, std::size_t d_B, int m);
/// The m-fold tensor power of a single-system operator.
Matrix tensor_power(const Matrix& op, int m);

namespace presets {

DensityOperator max_entangled(int d);
DensityOperator phi_perp(int d);
DensityOperator isotropic(double p, int d);
DensityOperator theta_sym(int d);
DensityOperator theta_antisym(int d);
DensityOperator werner(double p, int d);
DensityOperator maximally_mixed(int d);
/// Diagonal state with the given probabilities.
DensityOperator diagonal(std::span<const double> probs);
DensityOperator pure(const Vector& ket);
/// sum_x p(x) |x><x| (x) rho_x.
DensityOperator classical_quantum(std::span<const double> p, std::span<const DensityOperator> rho);

/// Swap operator on C^d (x) C^d.
Matrix swap(int d);

}  // namespace presets

/// Named single-state presets: isotropic(p), werner(p), max_entangled, phi_perp, theta,
/// theta_perp, maximally_mixed, ket0, ket1, plus, minus.
DensityOperator preset(std::string_view name, std::span<const double> params, int d);

/// Named state pairs: bell_z, bell_x, isotropic_vs_perp, werner_vs_perp, cq_pure_null.
BipartitePair preset_pair(std::string_view name);

}  // namespace steinlab

#endif  // STEINLAB_QSTATE_H
