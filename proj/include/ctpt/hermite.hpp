#pragma once

// Hermite polynomials at real and complex arguments, oscillator
// eigenfunctions and eigenvalues, and dense operator matrices in the
// phi_n basis.

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "ctpt/core.hpp"

namespace ctpt {

// H_n(z) by the three-term recurrence H_{n+1} = 2 z H_n - 2 n H_{n-1}.
inline cplx hermite(int n, cplx z) {
  if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
  cplx h0 = 1.0;
  if (n == 0) return h0;
  cplx h1 = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    const cplx h2 = 2.0 * z * h1 - 2.0 * double(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// Oscillator eigenfunction phi_n, analytically continued in z.
inline cplx phi(int n, cplx z, const PhysicalParams& params) {
  if (n < 0) throw std::invalid_argument("phi: order must be >= 0");
  const cplx v = detail::phi_value(n, z, params);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::overflow_error("phi: non-finite value at |Re z^2| too large");
  return v;
}

// Eigenvalue of the PT-symmetric oscillator with the +ix term,
//   E_n = hbar*omega0*(n + 1/2) + 1/(2 m0 omega0^2).
// The sign of the constant follows from completing the square on +ix
// ((x + ic)^2 picks up +c/2, not -c/2); it is cross-checked against the
// grid diagonalization, the U-similarity, and the propagator in the tests.
inline double energy(int n, const PhysicalParams& params) {
  if (n < 0) throw std::invalid_argument("energy: order must be >= 0");
  return params.hbar * params.omega0 * (double(n) + 0.5) +
         1.0 / (2.0 * params.m0 * params.omega0 * params.omega0);
}

struct OperatorMatrix {
  int dim = 0;
  Eigen::MatrixXcd entries;
  std::string label;
};

enum class OperatorLabel { X, P, XPAnticommutator, X2, P2, H, H0PT };

inline OperatorLabel operator_label_from_string(const std::string& s) {
  if (s == "x") return OperatorLabel::X;
  if (s == "p") return OperatorLabel::P;
  if (s == "xp_anticommutator") return OperatorLabel::XPAnticommutator;
  if (s == "x2") return OperatorLabel::X2;
  if (s == "p2") return OperatorLabel::P2;
  if (s == "h") return OperatorLabel::H;
  if (s == "H0pt") return OperatorLabel::H0PT;
  throw std::invalid_argument("unknown operator label: " + s);
}

// Ladder-operator matrix elements. x and p are tridiagonal with zero
// diagonal; x2, p2, {x,p} carry the closed-form pentadiagonal entries of the
// untruncated operators (products of truncated factors only match them away
// from the top two modes).
inline OperatorMatrix operator_matrix(OperatorLabel label, const PhysicalParams& params, int dim) {
  if (dim < 4) throw std::invalid_argument("operator_matrix: dim must be >= 4");
  params.validate();
  const double m = params.m0, w0 = params.omega0, hb = params.hbar;
  const double ell = std::sqrt(hb / (2.0 * m * w0));   // x ladder scale
  const double kp = std::sqrt(hb * m * w0 / 2.0);      // p ladder scale
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);

  auto fill_x = [&](Eigen::MatrixXcd& A) {
    for (int n = 0; n + 1 < dim; ++n) {
      const double c = ell * std::sqrt(double(n + 1));
      A(n + 1, n) = c;
      A(n, n + 1) = c;
    }
  };
  auto fill_p = [&](Eigen::MatrixXcd& A) {
    for (int n = 0; n + 1 < dim; ++n) {
      const double c = kp * std::sqrt(double(n + 1));
      A(n + 1, n) = cplx(0.0, c);
      A(n, n + 1) = cplx(0.0, -c);
    }
  };
  auto fill_x2 = [&](Eigen::MatrixXcd& A) {
    for (int n = 0; n < dim; ++n) A(n, n) = ell * ell * double(2 * n + 1);
    for (int n = 0; n + 2 < dim; ++n) {
      const double c = ell * ell * std::sqrt(double(n + 1) * double(n + 2));
      A(n + 2, n) = c;
      A(n, n + 2) = c;
    }
  };
  auto fill_p2 = [&](Eigen::MatrixXcd& A) {
    for (int n = 0; n < dim; ++n) A(n, n) = kp * kp * double(2 * n + 1);
    for (int n = 0; n + 2 < dim; ++n) {
      const double c = kp * kp * std::sqrt(double(n + 1) * double(n + 2));
      A(n + 2, n) = -c;
      A(n, n + 2) = -c;
    }
  };

  std::string name;
  switch (label) {
    case OperatorLabel::X:
      fill_x(M);
      name = "x";
      break;
    case OperatorLabel::P:
      fill_p(M);
      name = "p";
      break;
    case OperatorLabel::XPAnticommutator:
      // {x,p} = i hbar (adag^2 - a^2)
      for (int n = 0; n + 2 < dim; ++n) {
        const double c = hb * std::sqrt(double(n + 1) * double(n + 2));
        M(n + 2, n) = cplx(0.0, c);
        M(n, n + 2) = cplx(0.0, -c);
      }
      name = "xp_anticommutator";
      break;
    case OperatorLabel::X2:
      fill_x2(M);
      name = "x2";
      break;
    case OperatorLabel::P2:
      fill_p2(M);
      name = "p2";
      break;
    case OperatorLabel::H:
      for (int n = 0; n < dim; ++n) M(n, n) = energy(n, params);
      name = "h";
      break;
    case OperatorLabel::H0PT: {
      Eigen::MatrixXcd x2m = Eigen::MatrixXcd::Zero(dim, dim), p2m = Eigen::MatrixXcd::Zero(dim, dim),
                       xm = Eigen::MatrixXcd::Zero(dim, dim);
      fill_x2(x2m);
      fill_p2(p2m);
      fill_x(xm);
      M = p2m / (2.0 * m) + 0.5 * m * w0 * w0 * x2m + cplx(0.0, 1.0) * xm;
      name = "H0pt";
      break;
    }
  }
  return OperatorMatrix{dim, std::move(M), name};
}

inline OperatorMatrix operator_matrix(const std::string& label, const PhysicalParams& params, int dim) {
  return operator_matrix(operator_label_from_string(label), params, dim);
}

// Max |entry| over the leading (dim-guard) x (dim-guard) block. Truncated
// operator identities hold only away from the cut; `guard` rows/columns at
// the top are excluded from equality checks.
inline double leading_block_max(const Eigen::MatrixXcd& M, int guard) {
  const int n = int(M.rows()) - guard;
  if (n <= 0) throw std::invalid_argument("leading_block_max: guard exceeds matrix size");
  return M.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

}  // namespace ctpt
