#pragma once
// Gaussian moments and reordering of Gaussian quadratic exponentials:
//   O[exp(1/2 D phi phi)] = det(I - C D)^{-1/2} O'[exp(1/2 D' phi phi)],
//   D' = (D^-1 - C)^-1 = D (I - C D)^-1,
// plus the two-mode squeezing operator in normal order.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "gwt/contraction.hpp"
#include "gwt/errors.hpp"
#include "gwt/fock.hpp"

namespace gwt {

/// Sum over perfect pairings of products of covariances; 0 for odd counts.
template <typename Matrix>
typename Matrix::Scalar isserlis_moment(const std::vector<int>& indices, const Matrix& d) {
  using S = typename Matrix::Scalar;
  for (int i : indices)
    if (i < 0 || i >= d.rows()) detail::fail("IndexOutOfRange", std::to_string(i));
  if (indices.size() % 2) return S(0);
  if (indices.empty()) return S(1);
  S total(0);
  std::vector<int> rest(indices.begin() + 1, indices.end());
  for (std::size_t k = 0; k < rest.size(); ++k) {
    std::vector<int> sub;
    for (std::size_t j = 0; j < rest.size(); ++j)
      if (j != k) sub.push_back(rest[j]);
    total += d(indices[0], rest[k]) * isserlis_moment(sub, d);
  }
  return total;
}

/// Number of perfect pairings, (2k-1)!!.
inline long long pairing_count(int n) {
  if (n % 2) return 0;
  long long c = 1;
  for (int k = n - 1; k > 1; k -= 2) c *= k;
  return c;
}

struct QuadraticReordering {
  CMatrix d_prime;
  Complex prefactor;
};

/// Contraction entries evaluated as complex numbers, in index() order.
inline CMatrix numeric_contraction(const ContractionMatrix& c, const NumericContext& ctx = {}) {
  const auto& idx = c.index();
  NumericContext full = detail::with_square_roots(*c.registry(), ctx);
  CMatrix m(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = c.at(idx[i], idx[j]).evaluate(full);
  return m;
}

/// D' = D (I - C D)^-1 and det(I - C D)^{-1/2} (principal branch), without
/// validity checks. Used for indefinite and complex forms such as squeezing.
inline QuadraticReordering reorder_quadratic_form_algebraic(const CMatrix& d, const CMatrix& c) {
  if (d.rows() != d.cols() || c.rows() != d.rows() || c.cols() != d.cols())
    detail::fail("InvalidArgument", "D and C must be square matrices of equal size");
  if (c.isZero(0)) return {d, Complex(1)};
  CMatrix m = CMatrix::Identity(d.rows(), d.cols()) - c * d;
  Eigen::PartialPivLU<CMatrix> lu(m);
  Complex det = lu.determinant();
  if (std::abs(det) < 1e-300) detail::fail("SingularReordering", "I - C D is singular");
  return {d * lu.inverse(), 1.0 / std::sqrt(det)};
}

/// Reordering for a real symmetric definite D. Validity: D' must be definite
/// with the sign of D; for complex C this is required of the Hermitian part
/// of D^-1 - C, which keeps the Gaussian integral convergent.
inline QuadraticReordering reorder_quadratic_form(const Eigen::MatrixXd& d, const CMatrix& c) {
  if (d.rows() != d.cols() || (d - d.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    detail::fail("NotDefinite", "D must be real symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d);
  const auto& ev = eig.eigenvalues();
  double sign = ev.minCoeff() > 0 ? 1.0 : (ev.maxCoeff() < 0 ? -1.0 : 0.0);
  if (sign == 0) detail::fail("NotDefinite", "D is not definite");
  if (c.isZero(0)) return {d.cast<Complex>(), Complex(1)};
  CMatrix inv = d.inverse().cast<Complex>() - c;
  CMatrix herm = sign * 0.5 * (inv + inv.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> heig(herm);
  if (heig.eigenvalues().minCoeff() <= 0) detail::fail("ResultNotDefinite", "D' fails the definiteness condition");
  return reorder_quadratic_form_algebraic(d.cast<Complex>(), c);
}

/// Overload driven by an ordering pair: C is computed and evaluated.
inline QuadraticReordering reorder_quadratic_form(const Ordering& o, const Ordering& oprime, const BasisChange& basis,
                                                  const CommutationTable& table, const Eigen::MatrixXd& d,
                                                  const NumericContext& ctx = {}) {
  ContractionMatrix c = contraction_def(o, oprime, basis, table);
  return reorder_quadratic_form(d, numeric_contraction(c, ctx));
}

/// Rows of the basis change evaluated numerically: L(alpha, k) for phi =
/// L varphi, with target columns in basis.target() order.
inline CMatrix numeric_basis(const BasisChange& basis, const Registry& reg, const NumericContext& ctx = {}) {
  NumericContext full = detail::with_square_roots(reg, ctx);
  const auto& src = basis.source();
  const auto& tgt = basis.target();
  CMatrix l = CMatrix::Zero(src.size(), tgt.size());
  for (std::size_t a = 0; a < src.size(); ++a)
    for (std::size_t k = 0; k < tgt.size(); ++k) l(a, k) = basis.entry(src[a], tgt[k]).evaluate(full);
  return l;
}

/// Exact Weyl symbol of exp(1/2 K phi phi) for bosonic phi with c-number
/// commutators [phi_i, phi_j] = Omega_ij:
///   exp(1/2 K phi phi) = c W[exp(1/2 D_W phi phi)],
///   D_W = 2 Omega^-1 tanh(Omega K / 2),  c = det(cosh(Omega K / 2))^{-1/2}.
struct WeylSymbol {
  CMatrix d;
  Complex prefactor;
};

inline WeylSymbol weyl_symbol_of_exponential(const CMatrix& k, const CMatrix& omega) {
  CMatrix half = 0.5 * omega * k;
  CMatrix ch = half.cosh();
  CMatrix sh = half.sinh();
  CMatrix tanh = ch.partialPivLu().solve(sh);
  return {2.0 * omega.partialPivLu().solve(tanh), 1.0 / std::sqrt(ch.determinant())};
}

/// Two-mode squeezing S(g) = exp(g a b - g a† b†) in normal order, computed
/// three ways and compared with the matrix exponential of the generator.
struct SqueezeReport {
  double g = 0;
  int truncation = 0;
  int block = 0;
  CMatrix reference;       // exp of the truncated generator
  CMatrix gwt;             // exact Weyl symbol, then W -> N reordering
  CMatrix weyl_average;    // Weyl-ordered Gaussian average, then W -> N
  CMatrix printed;         // closed form with sqrt(g^2+1) prefactor
  Complex gwt_prefactor;   // <0|S|0> from the normal form
  double error_gwt = 0, error_weyl_average = 0, error_printed = 0;
  double unitarity = 0;
};

namespace detail {

// phi = (a, b, a†, b†): [a, a†] = [b, b†] = 1.
inline CMatrix two_mode_omega() {
  CMatrix om = CMatrix::Zero(4, 4);
  om(0, 2) = 1;
  om(2, 0) = -1;
  om(1, 3) = 1;
  om(3, 1) = -1;
  return om;
}

// (W - N) contraction on (a, b, a†, b†): 1/2 on a a† and b b† pairs.
inline CMatrix two_mode_weyl_normal() {
  CMatrix c = CMatrix::Zero(4, 4);
  c(0, 2) = c(2, 0) = c(1, 3) = c(3, 1) = 0.5;
  return c;
}

}  // namespace detail

inline SqueezeReport squeeze_normal_form(double g, int truncation, int block = 10) {
  if (truncation < 10) detail::fail("TruncationTooSmall", "truncation must be at least 10");
  if (g < 0) detail::fail("InvalidArgument", "squeezing parameter must be non-negative");
  if (block >= truncation) detail::fail("TruncationTooSmall", "comparison block must lie below the truncation");
  ModeRegistry modes;
  modes.add_boson("a", truncation);
  modes.add_boson("b", truncation);
  std::vector<Ladder> vars{{0, false}, {1, false}, {0, true}, {1, true}};

  SqueezeReport out;
  out.g = g;
  out.truncation = truncation;
  out.block = block;

  CMatrix a = modes.ladder(0, false), b = modes.ladder(1, false);
  CMatrix gen = g * (a * b - a.adjoint() * b.adjoint());
  out.reference = matexp(gen);
  out.unitarity = unitarity_defect(out.reference, modes, block - 2);

  // generator as 1/2 K phi phi
  CMatrix k = CMatrix::Zero(4, 4);
  k(0, 1) = k(1, 0) = g;
  k(2, 3) = k(3, 2) = -g;
  CMatrix c = detail::two_mode_weyl_normal();

  WeylSymbol w = weyl_symbol_of_exponential(k, detail::two_mode_omega());
  QuadraticReordering n = reorder_quadratic_form_algebraic(w.d, c);
  out.gwt_prefactor = w.prefactor * n.prefactor;
  out.gwt = normal_gaussian_matrix(modes, vars, n.d_prime, out.gwt_prefactor, block);

  // Gaussian average of exp(xi phi) is the Weyl-ordered Gaussian W[exp(G)]
  QuadraticReordering avg = reorder_quadratic_form_algebraic(k, c);
  out.weyl_average = normal_gaussian_matrix(modes, vars, avg.d_prime, avg.prefactor, block);

  double kappa = g / (g * g + 1);
  CMatrix kp = CMatrix::Zero(4, 4);
  kp(0, 1) = kp(1, 0) = kappa;
  kp(2, 3) = kp(3, 2) = -kappa;
  kp(0, 2) = kp(2, 0) = kp(1, 3) = kp(3, 1) = -2 * g * kappa;
  Complex printed_pref = std::sqrt(g * g + 1) * std::exp(-2 * g * kappa);
  out.printed = normal_gaussian_matrix(modes, vars, kp, printed_pref, block);

  out.error_gwt = block_compare(out.gwt, out.reference, modes, block);
  out.error_weyl_average = block_compare(out.weyl_average, out.reference, modes, block);
  out.error_printed = block_compare(out.printed, out.reference, modes, block);
  return out;
}

}  // namespace gwt
