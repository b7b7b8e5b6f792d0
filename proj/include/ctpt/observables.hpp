#pragma once

// Closed-form and numerical expectation values under the C(t)PT product,
// uncertainties, <H(t)>, and probability densities.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctpt/propagate.hpp"
#include "ctpt/symmetry.hpp"

namespace ctpt {

struct MomentReport {
  cplx x_mean, x2_mean, p_mean, p2_mean;
  double dx = 0.0, dp = 0.0, product = 0.0;
  enum class Source { ClosedForm, Numerical } source = Source::ClosedForm;
  WaveDiagnostics diag;
};

// Grid wide enough that transported states of mode <= n_max stay clear of
// the boundary for every alpha in the sampled window; the spacing matches
// the default grid. Domain sized ~1.5x the support estimate.
inline SpatialGrid wide_grid_for(const ScaleProfile& profile, const PhysicalParams& params,
                                 int n_max, const std::vector<double>& t_window) {
  double alpha_min = 1.0;
  for (double t : t_window) alpha_min = std::min(alpha_min, profile.evaluate(t).alpha);
  const double y_need = std::sqrt((2.0 * n_max + 1.0) * params.hbar / (params.m0 * params.omega0)) +
                        params.shift_scale() + 6.0;
  const double half = std::max(12.0, std::ceil(y_need / std::sqrt(alpha_min)));
  const double h_default = 24.0 / 1023.0;
  const int n_points = 2 * int(std::ceil(half / h_default)) + 1;
  return make_grid(-half, half, n_points);
}

// The closed-form C(t)PT moments of the eigen-solutions psi_n(t):
//   <x>  = -i a / sqrt(alpha)
//   <x2> = [(n+1/2) hbar/(m0 omega0) - a^2] / alpha
//   <p>  =  i a m0 adot / (2 sqrt(alpha))
//   <p2> = hbar omega0 (n+1/2) m0 alpha + (m0 adot/2)^2 <x2>
// with a = hbar/(m0 omega0^2); uncertainties from the complex first moments.
inline MomentReport closed_form_moments(int n, const ScaleProfile& profile,
                                        const PhysicalParams& params, double t) {
  const AlphaState s = profile.evaluate(t);
  const double a = params.shift_scale();
  const double w0 = params.omega0, m = params.m0, hb = params.hbar;
  MomentReport r;
  r.source = MomentReport::Source::ClosedForm;
  const double x2_chi = (double(n) + 0.5) * hb / (m * w0) - a * a;
  r.x_mean = cplx(0.0, -a / std::sqrt(s.alpha));
  r.x2_mean = x2_chi / s.alpha;
  r.p_mean = cplx(0.0, a * m * s.dalpha / (2.0 * std::sqrt(s.alpha)));
  const double c = m * s.dalpha / 2.0;
  r.p2_mean = hb * w0 * (double(n) + 0.5) * m * s.alpha + c * c * x2_chi / s.alpha;
  const cplx dx2 = r.x2_mean - r.x_mean * r.x_mean;
  const cplx dp2 = r.p2_mean - r.p_mean * r.p_mean;
  r.dx = std::sqrt(dx2.real());
  r.dp = std::sqrt(dp2.real());
  r.product = r.dx * r.dp;
  return r;
}

// Moments of an arbitrary state: transport by F(t) on the grid, then CPT
// bilinear forms of the transformed operator matrices, normalized by the
// CPT norm of the transported state.
inline MomentReport numeric_moments(const GridWave& wave, const ScaleProfile& profile,
                                    const PhysicalParams& params, double t, int basis_dim = 64) {
  const AlphaState s = profile.evaluate(t);
  const GridWave w = apply_F(wave, TransformSpec{&profile, t, false});
  const BasisExpansion ce = project(w, params, basis_dim);
  const Eigen::VectorXcd c = detail::to_vec(ce);
  const Eigen::MatrixXcd C = build_C_matrix(params, basis_dim).entries;

  const Eigen::MatrixXcd X = operator_matrix(OperatorLabel::X, params, basis_dim).entries;
  const Eigen::MatrixXcd P = operator_matrix(OperatorLabel::P, params, basis_dim).entries;
  const Eigen::MatrixXcd X2 = operator_matrix(OperatorLabel::X2, params, basis_dim).entries;
  const Eigen::MatrixXcd P2 = operator_matrix(OperatorLabel::P2, params, basis_dim).entries;
  const Eigen::MatrixXcd XP =
      operator_matrix(OperatorLabel::XPAnticommutator, params, basis_dim).entries;

  const double ra = std::sqrt(s.alpha);
  const double cc = params.m0 * s.dalpha / 2.0;
  // F O F+ for O in {x, x^2, p, p^2}
  const Eigen::MatrixXcd Xt = X / ra;
  const Eigen::MatrixXcd X2t = X2 / s.alpha;
  const Eigen::MatrixXcd Pt = ra * P - (cc / ra) * X;
  const Eigen::MatrixXcd P2t = s.alpha * P2 - cc * XP + (cc * cc / s.alpha) * X2;

  const cplx norm = detail::cpt_bilinear(C, c, c);
  if (std::abs(norm) == 0.0) throw std::invalid_argument("numeric_moments: zero state");
  auto mom = [&](const Eigen::MatrixXcd& O) { return detail::cpt_bilinear(C, c, O * c) / norm; };

  MomentReport r;
  r.source = MomentReport::Source::Numerical;
  r.diag = ce.diag;
  r.x_mean = mom(Xt);
  r.x2_mean = mom(X2t);
  r.p_mean = mom(Pt);
  r.p2_mean = mom(P2t);
  const cplx dx2 = r.x2_mean - r.x_mean * r.x_mean;
  const cplx dp2 = r.p2_mean - r.p_mean * r.p_mean;
  if (dx2.real() <= 0.0 || dp2.real() <= 0.0)
    throw std::runtime_error("numeric_moments: non-positive variance (state not resolved)");
  r.dx = std::sqrt(dx2.real());
  r.dp = std::sqrt(dp2.real());
  r.product = r.dx * r.dp;
  return r;
}

enum class ExpvalRoute { ClosedForm, Oracle };

struct ExpvalHBreakdown {
  cplx closed_alpha;    // E_n + (m0 addot/(4 alpha)) <x^2>_CPT   (normative)
  cplx closed_noalpha;  // E_n + (m0 addot/4) <x^2>_CPT           (the other printed line)
  cplx oracle;          // E_n + <chi_n| CP [i F dF+/dt] |chi_n>  (grid quadrature)
};

// Both closed-form coefficient variants plus the finite-difference oracle.
// The oracle evaluates i F dF+/dt on analytically transported chi_n and
// pairs it with chi_n through the CP bilinear, all by quadrature in the
// frame where the outer F is an exact change of variables.
inline ExpvalHBreakdown expval_H_breakdown(int n, const ScaleProfile& profile,
                                           const PhysicalParams& params, double t,
                                           const SpatialGrid& grid, double fd_step = 1e-5) {
  const double En = energy(n, params);
  const double a = params.shift_scale();
  const AlphaState s = profile.evaluate(t);
  const double x2_chi = (double(n) + 0.5) * params.hbar / (params.m0 * params.omega0) - a * a;

  ExpvalHBreakdown out;
  out.closed_alpha = En + (params.m0 * s.ddalpha / (4.0 * s.alpha)) * x2_chi;
  out.closed_noalpha = En + (params.m0 * s.ddalpha / 4.0) * x2_chi;

  const cplx shift(0.0, a);
  const GridWave fp = transported_basis_state(n, profile, params, t + fd_step, grid, shift);
  const GridWave fm = transported_basis_state(n, profile, params, t - fd_step, grid, shift);
  const double beta = detail::f2_phase_coefficient(s, params);
  const double ra = std::sqrt(s.alpha);
  const double pref = std::pow(s.alpha, 0.25);
  const auto wts = grid.quadrature_weights();
  cplx acc = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    const double u = grid.point(i);
    const cplx zeta = (fp.amplitudes[i] - fm.amplitudes[i]) / (2.0 * fd_step);
    const cplx chi_scaled = detail::phi_value(n, cplx(ra * u, 0.0) + shift, params);
    acc += wts[i] * chi_scaled * std::exp(cplx(0.0, beta * s.alpha * u * u)) * zeta;
  }
  out.oracle = En + cplx(0.0, 1.0) * pref * acc;
  return out;
}

inline cplx expval_H(int n, const ScaleProfile& profile, const PhysicalParams& params, double t,
                     ExpvalRoute route = ExpvalRoute::ClosedForm) {
  if (route == ExpvalRoute::ClosedForm) {
    const double En = energy(n, params);
    const double a = params.shift_scale();
    const AlphaState s = profile.evaluate(t);
    const double x2_chi = (double(n) + 0.5) * params.hbar / (params.m0 * params.omega0) - a * a;
    return En + (params.m0 * s.ddalpha / (4.0 * s.alpha)) * x2_chi;
  }
  const SpatialGrid grid = wide_grid_for(profile, params, n, {t});
  return expval_H_breakdown(n, profile, params, t, grid).oracle;
}

struct DensityResult {
  std::vector<double> density;           // |U^-1 F psi_n(t)|^2 samples
  double max_deviation_from_phi2 = 0.0;  // against |phi_n|^2
  double integral = 0.0;
  WaveDiagnostics diag;
};

// |U^-1 F psi_n(x,t)|^2 computed through the basis matrices; equals
// |phi_n(x)|^2 independently of t.
inline DensityResult probability_density(int n, const ScaleProfile& profile,
                                         const PhysicalParams& params, double t,
                                         const SpatialGrid& grid, int basis_dim = 64) {
  const GridWave psi = analytic_solution(n, profile, params, t, grid);
  const GridWave w = apply_F(psi, TransformSpec{&profile, t, false});
  BasisExpansion ce = project(w, params, basis_dim);
  const Eigen::MatrixXcd Uinv = build_U_matrix(params, basis_dim, true).entries;
  const Eigen::VectorXcd d = Uinv * detail::to_vec(ce);
  BasisExpansion de{params, std::vector<cplx>(d.data(), d.data() + d.size()), ce.diag};
  const GridWave phi_wave = synthesize(de, grid);

  DensityResult r;
  r.diag = phi_wave.diag;
  r.density.resize(grid.n_points);
  const auto wts = grid.quadrature_weights();
  for (int i = 0; i < grid.n_points; ++i) {
    r.density[i] = std::norm(phi_wave.amplitudes[i]);
    const double ref = std::norm(detail::phi_value(n, cplx(grid.point(i), 0.0), params));
    r.max_deviation_from_phi2 = std::max(r.max_deviation_from_phi2, std::abs(r.density[i] - ref));
    r.integral += wts[i] * r.density[i];
  }
  return r;
}

}  // namespace ctpt
