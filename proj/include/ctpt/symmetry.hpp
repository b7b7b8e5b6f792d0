#pragma once

// The discrete operators P, T, C, the non-unitary map U, and the four inner
// products (L2, PT, CPT, C(t)PT).

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "ctpt/transforms.hpp"

namespace ctpt {

// P: x -> -x. Exact index reversal on the symmetric grid.
inline GridWave apply_parity(const GridWave& wave) {
  GridWave out = wave;
  std::reverse(out.amplitudes.begin(), out.amplitudes.end());
  return out;
}

// T: complex conjugation (i -> -i).
inline GridWave apply_time_reversal(const GridWave& wave) {
  GridWave out = wave;
  for (auto& a : out.amplitudes) a = std::conj(a);
  return out;
}

inline Eigen::MatrixXcd parity_matrix(int dim) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) P(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return P;
}

namespace detail {

// Guard for the truncated-basis exponential: entries of exp(c p) grow like
// exp(|c| sigma_max(p)); beyond this bound the top-block contamination
// reaches the working block and double precision cannot represent the result.
inline void check_exponential_bound(const PhysicalParams& p, int dim) {
  const double a = p.shift_scale();
  const double bound = (a / p.hbar) * std::sqrt(2.0 * double(dim) * p.m0 * p.omega0 * p.hbar);
  if (!(bound < 50.0))
    throw std::invalid_argument(
        "matrix exponential bound violated: a*sqrt(2N m0 omega0 hbar)/hbar = " +
        std::to_string(bound) + " >= 50");
}

inline Eigen::MatrixXcd momentum_exponential(const PhysicalParams& params, int dim, double coeff) {
  check_exponential_bound(params, dim);
  const Eigen::MatrixXcd p = operator_matrix(OperatorLabel::P, params, dim).entries;
  return (coeff * p).exp();
}

}  // namespace detail

// U = exp(-(a/hbar) p) with a = hbar/(m0 omega0^2): the imaginary shift
// x -> x + i a. inverse flips the exponent sign.
inline OperatorMatrix build_U_matrix(const PhysicalParams& params, int dim, bool inverse = false) {
  if (dim < 16) throw std::invalid_argument("build_U_matrix: dim must be >= 16");
  params.validate();
  const double c = (inverse ? 1.0 : -1.0) * params.shift_scale() / params.hbar;
  return OperatorMatrix{dim, detail::momentum_exponential(params, dim, c), inverse ? "Uinv" : "U"};
}

// C = exp(-2(a/hbar) p) P, i.e. parity followed by the doubled imaginary
// shift. Composed in this order C satisfies C chi_n = (-1)^n chi_n, C^2 = 1
// and [C, H0pt] = 0; the opposite order fails all three (pinned in tests).
inline OperatorMatrix build_C_matrix(const PhysicalParams& params, int dim) {
  if (dim < 16) throw std::invalid_argument("build_C_matrix: dim must be >= 16");
  params.validate();
  const double c = -2.0 * params.shift_scale() / params.hbar;
  Eigen::MatrixXcd C = detail::momentum_exponential(params, dim, c) * parity_matrix(dim);
  return OperatorMatrix{dim, std::move(C), "C"};
}

struct InnerProductKind {
  enum class Kind { L2, PT, CPT, CtPT };
  Kind kind = Kind::L2;
  double t = 0.0;
  const ScaleProfile* profile = nullptr;  // fixes F(t) for CtPT

  static InnerProductKind l2() { return {Kind::L2, 0.0, nullptr}; }
  static InnerProductKind pt() { return {Kind::PT, 0.0, nullptr}; }
  static InnerProductKind cpt() { return {Kind::CPT, 0.0, nullptr}; }
  static InnerProductKind ctpt(double t, const ScaleProfile& profile) {
    return {Kind::CtPT, t, &profile};
  }
};

namespace detail {

// PT-image coefficients: parity (-1)^n composed with conjugation.
inline Eigen::VectorXcd pt_image(const Eigen::VectorXcd& c) {
  Eigen::VectorXcd v(c.size());
  for (int n = 0; n < c.size(); ++n) v(n) = ((n % 2 == 0) ? 1.0 : -1.0) * std::conj(c(n));
  return v;
}

inline Eigen::VectorXcd to_vec(const BasisExpansion& e) {
  return Eigen::Map<const Eigen::VectorXcd>(e.coeffs.data(), long(e.coeffs.size()));
}

// <f,g>_CPT = sum_n [C (PT f)]_n g_n  (a bilinear pairing, not sesquilinear).
inline cplx cpt_bilinear(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& f,
                         const Eigen::VectorXcd& g) {
  const Eigen::VectorXcd v = C * pt_image(f);
  return v.transpose() * g;
}

}  // namespace detail

// Inner products on basis expansions. CPT is evaluated through the C matrix;
// CtPT requires grid states (F acts on the grid) and is rejected here.
inline cplx inner_product(const InnerProductKind& kind, const BasisExpansion& f,
                          const BasisExpansion& g) {
  using K = InnerProductKind::Kind;
  if (f.dim() != g.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  const Eigen::VectorXcd cf = detail::to_vec(f), cg = detail::to_vec(g);
  switch (kind.kind) {
    case K::L2:
      return cf.adjoint() * cg;
    case K::PT:
      return detail::pt_image(cf).transpose() * cg;
    case K::CPT:
      return detail::cpt_bilinear(build_C_matrix(f.params, f.dim()).entries, cf, cg);
    case K::CtPT:
      throw std::invalid_argument("CtPT of basis expansions needs grid states (F is a grid map)");
  }
  throw std::logic_error("inner_product: bad kind");
}

// Inner products on grid states. The normative CPT path projects both states
// to the phi basis, with the PT image taken on the grid (index reversal plus
// conjugation) before projection.
inline cplx inner_product(const InnerProductKind& kind, const GridWave& f, const GridWave& g,
                          int basis_dim = 64) {
  using K = InnerProductKind::Kind;
  if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  const auto wts = f.grid.quadrature_weights();
  switch (kind.kind) {
    case K::L2: {
      cplx s = 0.0;
      for (int i = 0; i < f.grid.n_points; ++i)
        s += wts[i] * std::conj(f.amplitudes[i]) * g.amplitudes[i];
      return s;
    }
    case K::PT: {
      const GridWave ptf = apply_time_reversal(apply_parity(f));
      cplx s = 0.0;
      for (int i = 0; i < f.grid.n_points; ++i) s += wts[i] * ptf.amplitudes[i] * g.amplitudes[i];
      return s;
    }
    case K::CPT:
    case K::CtPT:
      throw std::invalid_argument("CPT/CtPT of grid states needs PhysicalParams; use the overload below");
  }
  throw std::logic_error("inner_product: bad kind");
}

inline cplx inner_product(const InnerProductKind& kind, const GridWave& f, const GridWave& g,
                          const PhysicalParams& params, int basis_dim = 64) {
  using K = InnerProductKind::Kind;
  switch (kind.kind) {
    case K::L2:
    case K::PT:
      return inner_product(kind, f, g, basis_dim);
    case K::CPT: {
      const GridWave ptf = apply_time_reversal(apply_parity(f));
      const BasisExpansion cf = project(ptf, params, basis_dim);
      const BasisExpansion cg = project(g, params, basis_dim);
      const Eigen::MatrixXcd C = build_C_matrix(params, basis_dim).entries;
      const Eigen::VectorXcd v = C * detail::to_vec(cf);
      return cplx(v.transpose() * detail::to_vec(cg));
    }
    case K::CtPT: {
      if (kind.profile == nullptr) throw std::invalid_argument("CtPT needs a ScaleProfile");
      const TransformSpec spec{kind.profile, kind.t, false};
      const GridWave Ff = apply_F(f, spec), Fg = apply_F(g, spec);
      return inner_product(InnerProductKind::cpt(), Ff, Fg, params, basis_dim);
    }
  }
  throw std::logic_error("inner_product: bad kind");
}

}  // namespace ctpt
