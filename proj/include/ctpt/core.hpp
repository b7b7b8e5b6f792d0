#pragma once

// Physical parameters, symmetric spatial grids, and the two state
// representations (grid samples / Hermite-mode coefficients) with
// conversions between them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctpt {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct PhysicalParams {
  double m0 = 1.0;      // rest mass
  double omega = 1.0;   // driving frequency of H(t)
  double omega0 = 1.0;  // target frequency of the time-independent frame
  double hbar = 1.0;

  // Imaginary displacement scale of the U and C maps.
  double shift_scale() const { return hbar / (m0 * omega0 * omega0); }

  void validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(m0) || !ok(omega) || !ok(omega0) || !ok(hbar))
      throw std::invalid_argument("PhysicalParams: all fields must be positive and finite");
    if (!ok(shift_scale()))
      throw std::invalid_argument("PhysicalParams: displacement scale hbar/(m0*omega0^2) not finite");
  }
};

// Uniform grid on [-x_max, x_max], endpoints inclusive. The symmetric domain
// makes parity an exact index reversal: point(i) == -point(n_points-1-i).
struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;

  double spacing() const { return (x_max - x_min) / double(n_points - 1); }

  // Endpoint blend keeps x_i == -x_{n-1-i} bit-exact on symmetric domains.
  double point(int i) const {
    return (x_min * double(n_points - 1 - i) + x_max * double(i)) / double(n_points - 1);
  }

  std::vector<double> points() const {
    std::vector<double> xs(n_points);
    for (int i = 0; i < n_points; ++i) xs[i] = point(i);
    return xs;
  }

  // Trapezoidal quadrature weights (half weight at the endpoints).
  std::vector<double> quadrature_weights() const {
    std::vector<double> w(n_points, spacing());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }

  bool operator==(const SpatialGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

inline SpatialGrid make_grid(double x_min, double x_max, int n_points) {
  if (!(x_min == -x_max) || !(x_min < 0.0))
    throw std::invalid_argument(
        "make_grid: domain must satisfy x_min == -x_max < 0 so that parity is an exact index reversal");
  if (n_points < 16) throw std::invalid_argument("make_grid: n_points must be >= 16");
  if (!std::isfinite(x_max)) throw std::invalid_argument("make_grid: bounds must be finite");
  return SpatialGrid{x_min, x_max, n_points};
}

// Numerical health flags carried along with a state. Warnings never abort;
// they propagate through derived quantities.
struct WaveDiagnostics {
  bool clamped_nonfinite = false;  // synthesize clamped an overflowed sample to 0
  bool boundary_loss = false;      // state has visible support at the domain edge
  double boundary_magnitude = 0.0;

  void merge(const WaveDiagnostics& o) {
    clamped_nonfinite |= o.clamped_nonfinite;
    boundary_loss |= o.boundary_loss;
    boundary_magnitude = std::max(boundary_magnitude, o.boundary_magnitude);
  }
};

struct GridWave {
  SpatialGrid grid;
  std::vector<cplx> amplitudes;
  WaveDiagnostics diag;

  double l2_norm_sq() const {
    const auto w = grid.quadrature_weights();
    double s = 0.0;
    for (int i = 0; i < grid.n_points; ++i) s += w[i] * std::norm(amplitudes[i]);
    return s;
  }
  double l2_norm() const { return std::sqrt(l2_norm_sq()); }
};

inline GridWave zero_wave(const SpatialGrid& grid) {
  return GridWave{grid, std::vector<cplx>(grid.n_points, cplx(0.0, 0.0)), {}};
}

// Coefficients over the first `dim` oscillator modes phi_n.
struct BasisExpansion {
  PhysicalParams params;
  std::vector<cplx> coeffs;
  WaveDiagnostics diag;

  int dim() const { return int(coeffs.size()); }

  double tail_fraction() const {
    double total = 0.0;
    for (const auto& c : coeffs) total += std::norm(c);
    if (total == 0.0) return 0.0;
    return std::norm(coeffs.back()) / total;
  }
  bool converged(double tol = 1e-8) const { return tail_fraction() <= tol; }
};

inline BasisExpansion unit_expansion(const PhysicalParams& params, int dim, int n) {
  BasisExpansion e{params, std::vector<cplx>(dim, cplx(0.0, 0.0)), {}};
  e.coeffs.at(n) = 1.0;
  return e;
}

namespace detail {

// Accumulates sum_n c_n phi_n(z) by the normalized three-term recurrence
//   h_0 = exp(-u^2/2),  h_{n+1} = sqrt(2/(n+1)) u h_n - sqrt(n/(n+1)) h_{n-1},
// u = z sqrt(m0 omega0 / hbar). Stable far beyond n = 200; the raw Hermite
// recurrence with factorial prefactors would overflow first.
inline cplx hermite_gaussian_sum(const std::vector<cplx>& c, cplx z, const PhysicalParams& p) {
  const double s = p.m0 * p.omega0 / p.hbar;
  const cplx u = z * std::sqrt(s);
  const double pref = std::pow(s / kPi, 0.25);
  cplx h0 = std::exp(-u * u * 0.5);
  cplx acc = c.empty() ? cplx(0) : c[0] * h0;
  if (c.size() > 1) {
    cplx h1 = std::sqrt(2.0) * u * h0;
    acc += c[1] * h1;
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
      const cplx h2 = std::sqrt(2.0 / double(k + 1)) * u * h1 - std::sqrt(double(k) / double(k + 1)) * h0;
      h0 = h1;
      h1 = h2;
      acc += c[k + 1] * h2;
    }
  }
  return pref * acc;
}

inline cplx phi_value(int n, cplx z, const PhysicalParams& p) {
  const double s = p.m0 * p.omega0 / p.hbar;
  const cplx u = z * std::sqrt(s);
  const double pref = std::pow(s / kPi, 0.25);
  cplx h0 = std::exp(-u * u * 0.5);
  if (n == 0) return pref * h0;
  cplx h1 = std::sqrt(2.0) * u * h0;
  for (int k = 1; k < n; ++k) {
    const cplx h2 = std::sqrt(2.0 / double(k + 1)) * u * h1 - std::sqrt(double(k) / double(k + 1)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return pref * h1;
}

// phi_n(x) for n = 0..dim-1 at one real point, written into `out`.
inline void phi_column(double x, const PhysicalParams& p, int dim, double* out) {
  const double s = p.m0 * p.omega0 / p.hbar;
  const double u = x * std::sqrt(s);
  const double pref = std::pow(s / kPi, 0.25);
  double h0 = std::exp(-u * u * 0.5);
  out[0] = pref * h0;
  if (dim == 1) return;
  double h1 = std::sqrt(2.0) * u * h0;
  out[1] = pref * h1;
  for (int k = 1; k + 1 < dim; ++k) {
    const double h2 = std::sqrt(2.0 / double(k + 1)) * u * h1 - std::sqrt(double(k) / double(k + 1)) * h0;
    h0 = h1;
    h1 = h2;
    out[k + 1] = pref * h2;
  }
}

}  // namespace detail

// Evaluate the finite Hermite-Gaussian sum at complex argument x + shift for
// each grid point x. shift = i*hbar/(m0 omega0^2) produces the chi_n states.
inline GridWave synthesize(const BasisExpansion& expansion, const SpatialGrid& grid,
                           cplx shift = cplx(0.0, 0.0)) {
  GridWave w = zero_wave(grid);
  w.diag = expansion.diag;
  for (int i = 0; i < grid.n_points; ++i) {
    const cplx v = detail::hermite_gaussian_sum(expansion.coeffs, cplx(grid.point(i), 0.0) + shift,
                                                expansion.params);
    if (std::isfinite(v.real()) && std::isfinite(v.imag())) {
      w.amplitudes[i] = v;
    } else {
      w.amplitudes[i] = 0.0;
      w.diag.clamped_nonfinite = true;
    }
  }
  return w;
}

// L2 analysis against the orthonormal phi_n by trapezoidal quadrature.
// Warns (does not fail) when the wave still has support at the domain edge.
inline BasisExpansion project(const GridWave& wave, const PhysicalParams& params, int dim,
                              double boundary_warn_tol = 1e-10) {
  BasisExpansion e{params, std::vector<cplx>(dim, cplx(0.0, 0.0)), wave.diag};
  const auto w = wave.grid.quadrature_weights();
  std::vector<double> col(dim);
  for (int i = 0; i < wave.grid.n_points; ++i) {
    detail::phi_column(wave.grid.point(i), params, dim, col.data());
    const cplx wi = w[i] * wave.amplitudes[i];
    for (int n = 0; n < dim; ++n) e.coeffs[n] += col[n] * wi;
  }
  const double edge = std::max(std::abs(wave.amplitudes.front()), std::abs(wave.amplitudes.back()));
  if (edge > boundary_warn_tol) {
    e.diag.boundary_loss = true;
    e.diag.boundary_magnitude = std::max(e.diag.boundary_magnitude, edge);
  }
  return e;
}

}  // namespace ctpt
