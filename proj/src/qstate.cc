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

#include "steinlab/qstate.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace steinlab {

std::string ExtendedReal::to_string() const {
  if (is_infinite()) {
    return "inf";
  }
  std::ostringstream out;
  out.precision(17);
  out << value_;
  return out.str();
}

Matrix symmetrize_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("matrix is not square");
  }
  if (m.rows() == 0) {
    throw DimensionError("matrix is empty");
  }
  Matrix adj = m.adjoint();
  double asym = (m - adj).cwiseAbs().maxCoeff();
  if (!std::isfinite(asym)) {
    throw ValidationError("matrix has non-finite entries");
  }
  if (asym > tol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (max asymmetry " << asym << ")";
    throw ValidationError(msg.str());
  }
  return (m + adj) * 0.5;
}

Spectrum hermitian_spectrum(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed");
  }
  auto n = h.rows();
  Spectrum s;
  s.eigenvalues.resize(static_cast<std::size_t>(n));
  s.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.eigenvalues[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

Matrix hermitian_apply(const Matrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("eigendecomposition failed");
  }
  RealVector vals = solver.eigenvalues().unaryExpr(f);
  const Matrix& v = solver.eigenvectors();
  return v * vals.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix hermitian_log_on_support(const Matrix& h, double cutoff) {
  return hermitian_apply(h, [cutoff](double x) { return x > cutoff ? std::log(x) : 0.0; });
}

Matrix hermitian_sqrt(const Matrix& h) {
  return hermitian_apply(h, [](double x) { return x > 0 ? std::sqrt(x) : 0.0; });
}

Matrix hermitian_inv_sqrt(const Matrix& h, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.eigenvalues().minCoeff() <= cutoff) {
    throw PreconditionError("operator is not positive definite");
  }
  RealVector vals = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix& v = solver.eigenvectors();
  return v * vals.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix hermitian_exp(const Matrix& h) {
  return hermitian_apply(h, [](double x) { return std::exp(x); });
}

Matrix unitary_exp(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Matrix& v = solver.eigenvectors();
  Vector phases = solver.eigenvalues().unaryExpr([](double x) {
    return std::polar(1.0, x);
  });
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix support_projector(const Matrix& h, double cutoff) {
  return hermitian_apply(h, [cutoff](double x) { return x > cutoff ? 1.0 : 0.0; });
}

RealVector hermitian_coordinates(const Matrix& h) {
  const Eigen::Index r = h.rows();
  RealVector out(r * r);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i) out(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      out(k++) = std::sqrt(2.0) * h(i, j).real();
      out(k++) = std::sqrt(2.0) * h(i, j).imag();
    }
  }
  return out;
}

Matrix hermitian_from_coordinates(const RealVector& x, Eigen::Index offset, Eigen::Index r) {
  if (offset + r * r > x.size()) {
    throw DimensionError("not enough coordinates for a Hermitian matrix");
  }
  Matrix m = Matrix::Zero(r, r);
  Eigen::Index k = offset;
  for (Eigen::Index i = 0; i < r; ++i) m(i, i) = x(k++);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i + 1; j < r; ++j) {
      Complex v = Complex(x(k), x(k + 1)) / std::sqrt(2.0);
      k += 2;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix partial_trace(const Matrix& m, std::size_t d_A, std::size_t d_B, Subsystem keep) {
  auto da = static_cast<Eigen::Index>(d_A);
  auto db = static_cast<Eigen::Index>(d_B);
  if (m.rows() != da * db || m.cols() != da * db) {
    throw DimensionError("partial_trace: operator dimension " + std::to_string(m.rows()) +
                         " does not equal " + std::to_string(d_A) + "*" + std::to_string(d_B));
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
      for (Eigen::Index k = 0; k < da; ++k) {
        Complex acc = 0;
        for (Eigen::Index j = 0; j < db; ++j) {
          acc += m(i * db + j, k * db + j);
        }
        out(i, k) = acc;
      }
    }
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index j = 0; j < db; ++j) {
    for (Eigen::Index l = 0; l < db; ++l) {
      Complex acc = 0;
      for (Eigen::Index i = 0; i < da; ++i) {
        acc += m(i * db + j, i * db + l);
      }
      out(j, l) = acc;
    }
  }
  return out;
}

PVMBasis::PVMBasis(Matrix vectors, double tol) : unitary_(std::move(vectors)) {
  if (unitary_.rows() != unitary_.cols() || unitary_.rows() == 0) {
    throw DimensionError("basis must be a nonempty square matrix of column vectors");
  }
  Matrix gram = unitary_.adjoint() * unitary_;
  double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (!(err <= tol)) {
    throw ValidationError("basis vectors are not orthonormal (Gram error " +
                          std::to_string(err) + ")");
  }
}

PVMBasis PVMBasis::computational(std::size_t dim) {
  auto d = static_cast<Eigen::Index>(dim);
  return PVMBasis(Matrix::Identity(d, d));
}

DensityOperator::DensityOperator(const Matrix& m, double eig_cutoff)
    : matrix_(symmetrize_hermitian(m)), eig_cutoff_(eig_cutoff) {
  if (static_cast<std::size_t>(matrix_.rows()) > kMaxDim) {
    throw SizeError("density operator dimension exceeds 2^16");
  }
  auto spec = std::make_shared<Spectrum>(hermitian_spectrum(matrix_));
  double min_eig = spec->eigenvalues.back();
  if (min_eig < -kPsdTol) {
    throw ValidationError("matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(min_eig) + ")");
  }
  double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("trace is " + std::to_string(tr) + ", expected 1");
  }
  for (double& v : spec->eigenvalues) {
    if (v <= eig_cutoff_) {
      v = 0.0;
    }
  }
  spectrum_ = std::move(spec);
}

std::size_t DensityOperator::rank() const {
  return static_cast<std::size_t>(
      std::count_if(spectrum_->eigenvalues.begin(), spectrum_->eigenvalues.end(),
                    [](double v) { return v > 0.0; }));
}

Matrix DensityOperator::support_basis() const {
  return spectrum_->eigenvectors.leftCols(static_cast<Eigen::Index>(rank()));
}

Matrix DensityOperator::support_projector() const {
  Matrix v = support_basis();
  return v * v.adjoint();
}

BipartitePair::BipartitePair(DensityOperator null_state, DensityOperator alt_state,
                             std::size_t d_A, std::size_t d_B)
    : null_(std::move(null_state)), alt_(std::move(alt_state)), d_A_(d_A), d_B_(d_B) {
  if (d_A == 0 || d_B == 0 || null_.dim() != d_A * d_B || alt_.dim() != d_A * d_B) {
    throw DimensionError("state pair dimensions do not match d_A*d_B");
  }
}

DensityOperator BipartitePair::null_marginal(Subsystem s) const {
  return partial_trace(null_, d_A_, d_B_, s);
}

DensityOperator BipartitePair::alt_marginal(Subsystem s) const {
  return partial_trace(alt_, d_A_, d_B_, s);
}

namespace {

std::size_t int_pow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    out *= base;
  }
  return out;
}

}  // namespace

LocalPVM::LocalPVM(PVMBasis basis_A, PVMBasis basis_B, std::size_t d_A, std::size_t d_B,
                   int block_size)
    : basis_A_(std::move(basis_A)),
      basis_B_(std::move(basis_B)),
      d_A_(d_A),
      d_B_(d_B),
      block_size_(block_size) {
  if (block_size < 1) {
    throw ValidationError("block size must be at least 1");
  }
  if (basis_A_.dim() != int_pow(d_A, block_size) || basis_B_.dim() != int_pow(d_B, block_size)) {
    throw DimensionError("local basis dimension does not match d^block_size");
  }
}

LocalPVM LocalPVM::computational(std::size_t d_A, std::size_t d_B, int block_size) {
  return LocalPVM(PVMBasis::computational(int_pow(d_A, block_size)),
                  PVMBasis::computational(int_pow(d_B, block_size)), d_A, d_B, block_size);
}

Matrix LocalPVM::product_unitary() const {
  return kron(basis_A_.unitary(), basis_B_.unitary());
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b,
                               std::size_t max_dim) {
  if (a.dim() * b.dim() > max_dim) {
    throw SizeError("tensor product dimension " + std::to_string(a.dim() * b.dim()) +
                    " exceeds limit " + std::to_string(max_dim));
  }
  return DensityOperator(kron(a.matrix(), b.matrix()), std::min(a.eig_cutoff(), b.eig_cutoff()));
}

DensityOperator partial_trace(const DensityOperator& state, std::size_t d_A, std::size_t d_B,
                              Subsystem keep) {
  return DensityOperator(partial_trace(state.matrix(), d_A, d_B, keep), state.eig_cutoff());
}

Spectrum spectral(const DensityOperator& state) { return state.spectrum(); }

bool support_contained(const DensityOperator& a, const Matrix& b, double cutoff) {
  if (static_cast<std::size_t>(b.rows()) != a.dim() || b.rows() != b.cols()) {
    throw DimensionError("support_contained: dimension mismatch");
  }
  Matrix hb = symmetrize_hermitian(b);
  Matrix outside = Matrix::Identity(hb.rows(), hb.cols()) - support_projector(hb, cutoff);
  Matrix residual = outside * a.matrix() * outside;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(residual, Eigen::EigenvaluesOnly);
  double norm = solver.eigenvalues().cwiseAbs().maxCoeff();
  return norm <= 1e-9;
}

Matrix pinch(const Matrix& op, const PVMBasis& basis) {
  if (static_cast<std::size_t>(op.rows()) != basis.dim() || op.rows() != op.cols()) {
    throw DimensionError("pinch: operator and basis dimensions differ");
  }
  const Matrix& u = basis.unitary();
  Vector d = (u.adjoint() * op * u).diagonal();
  return u * d.asDiagonal() * u.adjoint();
}

Matrix tensor_power(const Matrix& op, int m) {
  if (m < 1) {
    throw ValidationError("tensor power must be at least 1");
  }
  if (int_pow(static_cast<std::size_t>(op.rows()), m) > kMaxDim) {
    throw SizeError("tensor power dimension exceeds 2^16");
  }
  Matrix out = op;
  for (int i = 1; i < m; ++i) {
    out = kron(out, op);
  }
  return out;
}

Matrix block_power(const Matrix& state, std::size_t d_A, std::size_t d_B, int m) {
  if (static_cast<std::size_t>(state.rows()) != d_A * d_B) {
    throw DimensionError("block_power: state dimension does not match d_A*d_B");
  }
  Matrix full = tensor_power(state, m);
  if (m == 1) {
    return full;
  }
  // Full index digits are (a1 b1 a2 b2 ...); target digits are (a1 .. am b1 .. bm).
  std::size_t total = static_cast<std::size_t>(full.rows());
  std::size_t dam = int_pow(d_A, m);
  std::size_t dbm = int_pow(d_B, m);
  std::vector<Eigen::Index> target(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t place_a = 1;
    std::size_t place_b = 1;
    for (int k = m - 1; k >= 0; --k) {
      std::size_t bk = rest % d_B;
      rest /= d_B;
      std::size_t ak = rest % d_A;
      rest /= d_A;
      a += ak * place_a;
      b += bk * place_b;
      place_a *= d_A;
      place_b *= d_B;
    }
    target[idx] = static_cast<Eigen::Index>(a * dbm + b);
  }
  (void)dam;
  Matrix out(full.rows(), full.cols());
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      out(target[i], target[j]) = full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

namespace presets {

namespace {

void require_dim(int d, int min_d) {
  if (d < min_d) {
    throw ValidationError("dimension must be at least " + std::to_string(min_d));
  }
}

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("parameter p must lie in [0,1]");
  }
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix phi_matrix(int d) {
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m(i * d + i, j * d + j) = 1.0 / d;
    }
  }
  return m;
}

}  // namespace

Matrix swap(int d) {
  require_dim(d, 1);
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      f(i * d + j, j * d + i) = 1.0;
    }
  }
  return f;
}

DensityOperator max_entangled(int d) {
  require_dim(d, 1);
  return DensityOperator(phi_matrix(d));
}

DensityOperator phi_perp(int d) {
  require_dim(d, 2);
  return DensityOperator((identity(d * d) - phi_matrix(d)) / static_cast<double>(d * d - 1));
}

DensityOperator isotropic(double p, int d) {
  require_probability(p);
  require_dim(d, 2);
  Matrix perp = (identity(d * d) - phi_matrix(d)) / static_cast<double>(d * d - 1);
  return DensityOperator(p * phi_matrix(d) + (1.0 - p) * perp);
}

DensityOperator theta_sym(int d) {
  require_dim(d, 2);
  return DensityOperator((identity(d * d) + swap(d)) / static_cast<double>(d * (d + 1)));
}

DensityOperator theta_antisym(int d) {
  require_dim(d, 2);
  return DensityOperator((identity(d * d) - swap(d)) / static_cast<double>(d * (d - 1)));
}

DensityOperator werner(double p, int d) {
  require_probability(p);
  require_dim(d, 2);
  Matrix sym = (identity(d * d) + swap(d)) / static_cast<double>(d * (d + 1));
  Matrix anti = (identity(d * d) - swap(d)) / static_cast<double>(d * (d - 1));
  return DensityOperator(p * sym + (1.0 - p) * anti);
}

DensityOperator maximally_mixed(int d) {
  require_dim(d, 1);
  return DensityOperator(identity(d) / static_cast<double>(d));
}

DensityOperator diagonal(std::span<const double> probs) {
  if (probs.empty()) {
    throw ValidationError("diagonal state needs at least one probability");
  }
  Vector v(static_cast<Eigen::Index>(probs.size()));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) {
      throw ValidationError("probabilities must be nonnegative");
    }
    v(static_cast<Eigen::Index>(i)) = probs[i];
  }
  return DensityOperator(Matrix(v.asDiagonal()));
}

DensityOperator pure(const Vector& ket) {
  double norm = ket.norm();
  if (!(norm > 0.0)) {
    throw ValidationError("ket must be nonzero");
  }
  Vector k = ket / norm;
  return DensityOperator(k * k.adjoint());
}

DensityOperator classical_quantum(std::span<const double> p, std::span<const DensityOperator> rho) {
  if (p.size() != rho.size() || p.empty()) {
    throw DimensionError("classical_quantum: need one state per classical symbol");
  }
  auto db = static_cast<Eigen::Index>(rho[0].dim());
  auto nx = static_cast<Eigen::Index>(p.size());
  Matrix m = Matrix::Zero(nx * db, nx * db);
  for (Eigen::Index x = 0; x < nx; ++x) {
    if (static_cast<Eigen::Index>(rho[static_cast<std::size_t>(x)].dim()) != db) {
      throw DimensionError("classical_quantum: conditional states differ in dimension");
    }
    m.block(x * db, x * db, db, db) =
        p[static_cast<std::size_t>(x)] * rho[static_cast<std::size_t>(x)].matrix();
  }
  return DensityOperator(m);
}

}  // namespace presets

namespace {

Vector ket(std::initializer_list<Complex> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (Complex a : amps) {
    v(i++) = a;
  }
  return v;
}

Vector kron_ket(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

double param(std::span<const double> params, std::string_view name) {
  if (params.empty()) {
    throw ValidationError("preset " + std::string(name) + " requires parameter p");
  }
  return params[0];
}

}  // namespace

DensityOperator preset(std::string_view name, std::span<const double> params, int d) {
  const double s = 1.0 / std::sqrt(2.0);
  if (name == "isotropic") return presets::isotropic(param(params, name), d);
  if (name == "werner") return presets::werner(param(params, name), d);
  if (name == "max_entangled") return presets::max_entangled(d);
  if (name == "phi_perp") return presets::phi_perp(d);
  if (name == "theta") return presets::theta_sym(d);
  if (name == "theta_perp") return presets::theta_antisym(d);
  if (name == "maximally_mixed") return presets::maximally_mixed(d);
  if (name == "ket0") return presets::pure(ket({1, 0}));
  if (name == "ket1") return presets::pure(ket({0, 1}));
  if (name == "plus") return presets::pure(ket({s, s}));
  if (name == "minus") return presets::pure(ket({s, -s}));
  if (name == "diagonal") return presets::diagonal(params);
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

BipartitePair preset_pair(std::string_view name) {
  const double s = 1.0 / std::sqrt(2.0);
  Vector k0 = ket({1, 0});
  Vector k1 = ket({0, 1});
  Vector plus = ket({s, s});
  Vector minus = ket({s, -s});
  if (name == "bell_z") {
    Vector null = kron_ket(k0, k0) + kron_ket(k1, k1);
    Vector alt = kron_ket(k0, k1) + kron_ket(k1, k0);
    return BipartitePair(presets::pure(null), presets::pure(alt), 2, 2);
  }
  if (name == "bell_x") {
    Vector null = kron_ket(plus, plus) + kron_ket(minus, minus);
    Vector alt = kron_ket(plus, minus) + kron_ket(minus, plus);
    return BipartitePair(presets::pure(null), presets::pure(alt), 2, 2);
  }
  if (name == "isotropic_vs_perp") {
    return BipartitePair(presets::max_entangled(2), presets::phi_perp(2), 2, 2);
  }
  if (name == "werner_vs_perp") {
    return BipartitePair(presets::theta_antisym(2), presets::theta_sym(2), 2, 2);
  }
  if (name == "cq_pure_null") {
    // Uniform X with rho_0 = rho_1 = |0><0| against p~ = (0.3, 0.7) and the pair of
    // conditional states used for the kappa gap.
    DensityOperator psi = presets::pure(k0);
    std::vector<double> px = {0.5, 0.5};
    std::vector<DensityOperator> null_cond = {psi, psi};
    Matrix r0 = 0.4 * k0 * k0.adjoint() + 0.6 * k1 * k1.adjoint();
    Matrix r1 = 0.1 * plus * plus.adjoint() + 0.9 * minus * minus.adjoint();
    std::vector<double> ptilde = {0.3, 0.7};
    std::vector<DensityOperator> alt_cond = {DensityOperator(r0), DensityOperator(r1)};
    return BipartitePair(presets::classical_quantum(px, null_cond),
                         presets::classical_quantum(ptilde, alt_cond), 2, 2);
  }
  throw ValidationError("unknown preset pair '" + std::string(name) + "'");
}

}  // namespace steinlab
