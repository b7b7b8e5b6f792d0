#pragma once

// Application of the driven Hamiltonian H(t) to grid states, Crank-Nicolson
// propagation of the time-dependent Schroedinger equation, and the exact
// analytic solution for comparison.

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctpt/hermite.hpp"
#include "ctpt/transforms.hpp"

namespace ctpt {

// H(t) psi = [p^2/(2 m0 alpha) + alpha m0 w^2 x^2/2 + i x sqrt(alpha)] psi,
// kinetic term by 4th-order central differences with Dirichlet zero outside.
inline GridWave apply_H(const GridWave& wave, const ScaleProfile& profile,
                        const PhysicalParams& params, double t) {
  return detail::apply_hamiltonian_fd(wave, profile, params, t);
}

struct PropagateOptions {
  double dt = 1e-3;
  int snapshot_stride = 20;
  bool drop_complex_potential = false;  // Hermitian reduction for diagnostics
};

struct Propagation {
  std::vector<double> times;
  std::vector<GridWave> snapshots;
  double cfl_bound = 0.0;            // m0 alpha_min h^2 / hbar, recorded only
  double max_boundary_amplitude = 0.0;
  bool boundary_warning = false;     // edge amplitude implies norm leakage
};

// Per-time record of named observables, written as CSV by the scenario runner.
struct TimeSeries {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;

  void append(double t, std::vector<double> row) {
    if (!times.empty() && !(t > times.back()))
      throw std::invalid_argument("TimeSeries: times must be strictly increasing");
    if (row.size() != names.size()) throw std::invalid_argument("TimeSeries: row width mismatch");
    times.push_back(t);
    rows.push_back(std::move(row));
  }
};

// Crank-Nicolson: (1 + i dt H(t+dt/2)/(2 hbar)) psi_{k+1} =
//                 (1 - i dt H(t+dt/2)/(2 hbar)) psi_k,
// pentadiagonal solves via sparse LU. Midpoint sampling keeps second order
// for the time-dependent generator.
inline Propagation propagate_numeric(const GridWave& psi0, const ScaleProfile& profile,
                                     const PhysicalParams& params, double t_final,
                                     const PropagateOptions& opt) {
  const double dt_max = 1e-3 * 2.0 * kPi / params.omega0;
  if (!(opt.dt > 0.0) || opt.dt > dt_max)
    throw std::invalid_argument("propagate_numeric: dt must satisfy dt <= 1e-3 * 2*pi/omega0 = " +
                                std::to_string(dt_max));
  if (!(t_final > 0.0)) throw std::invalid_argument("propagate_numeric: t_final must be positive");

  const int n = psi0.grid.n_points;
  const double h = psi0.grid.spacing();
  const long nsteps = std::lround(t_final / opt.dt);
  const double dt = t_final / double(nsteps);

  Propagation result;
  result.times.push_back(0.0);
  result.snapshots.push_back(psi0);

  double alpha_min = profile.evaluate(0.0).alpha;

  Eigen::VectorXcd psi(n);
  for (int i = 0; i < n; ++i) psi(i) = psi0.amplitudes[i];

  using Trip = Eigen::Triplet<cplx>;
  Eigen::SparseMatrix<cplx> A(n, n);
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  std::vector<Trip> trips;
  trips.reserve(std::size_t(5) * std::size_t(n));
  bool analyzed = false;

  const cplx ihalf = cplx(0.0, dt / (2.0 * params.hbar));
  std::vector<double> xs = psi0.grid.points();

  for (long k = 0; k < nsteps; ++k) {
    const double tm = (double(k) + 0.5) * dt;
    const AlphaState s = profile.evaluate(tm);
    alpha_min = std::min(alpha_min, s.alpha);
    const double kin = -params.hbar * params.hbar / (2.0 * params.m0 * s.alpha) / (12.0 * h * h);
    const double ra = std::sqrt(s.alpha);

    // rhs = (1 - i dt H/2hbar) psi applied as a stencil
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) {
      const cplx vm2 = i >= 2 ? psi(i - 2) : cplx(0);
      const cplx vm1 = i >= 1 ? psi(i - 1) : cplx(0);
      const cplx vp1 = i + 1 < n ? psi(i + 1) : cplx(0);
      const cplx vp2 = i + 2 < n ? psi(i + 2) : cplx(0);
      cplx pot = 0.5 * s.alpha * params.m0 * params.omega * params.omega * xs[i] * xs[i];
      if (!opt.drop_complex_potential) pot += cplx(0.0, ra * xs[i]);
      const cplx Hpsi = kin * (-vm2 + 16.0 * vm1 - 30.0 * psi(i) + 16.0 * vp1 - vp2) + pot * psi(i);
      rhs(i) = psi(i) - ihalf * Hpsi;
    }

    trips.clear();
    for (int i = 0; i < n; ++i) {
      cplx pot = 0.5 * s.alpha * params.m0 * params.omega * params.omega * xs[i] * xs[i];
      if (!opt.drop_complex_potential) pot += cplx(0.0, ra * xs[i]);
      trips.emplace_back(i, i, 1.0 + ihalf * (kin * -30.0 + pot));
      if (i >= 1) trips.emplace_back(i, i - 1, ihalf * kin * 16.0);
      if (i + 1 < n) trips.emplace_back(i, i + 1, ihalf * kin * 16.0);
      if (i >= 2) trips.emplace_back(i, i - 2, ihalf * kin * -1.0);
      if (i + 2 < n) trips.emplace_back(i, i + 2, ihalf * kin * -1.0);
    }
    A.setFromTriplets(trips.begin(), trips.end());
    if (!analyzed) {
      lu.analyzePattern(A);
      analyzed = true;
    }
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("propagate_numeric: linear solve failed at step " + std::to_string(k));
    psi = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("propagate_numeric: linear solve failed at step " + std::to_string(k));

    const double edge = std::max(std::abs(psi(0)), std::abs(psi(n - 1)));
    result.max_boundary_amplitude = std::max(result.max_boundary_amplitude, edge);

    if ((k + 1) % opt.snapshot_stride == 0 || k + 1 == nsteps) {
      GridWave snap = zero_wave(psi0.grid);
      for (int i = 0; i < n; ++i) snap.amplitudes[i] = psi(i);
      if (result.max_boundary_amplitude > 1e-6) {
        snap.diag.boundary_loss = true;
        snap.diag.boundary_magnitude = result.max_boundary_amplitude;
      }
      result.times.push_back(double(k + 1) * dt);
      result.snapshots.push_back(std::move(snap));
    }
  }
  result.cfl_bound = params.m0 * alpha_min * h * h / params.hbar;
  result.boundary_warning = result.max_boundary_amplitude > 1e-6;
  return result;
}

// psi_n(x, t) = F+(t) e^{-i E_n t} chi_n with chi_n synthesized through the
// complex shift i a. The F+ application is the grid operation, so this path
// is an independent oracle for the propagator.
inline GridWave analytic_solution(int n, const ScaleProfile& profile, const PhysicalParams& params,
                                  double t, const SpatialGrid& grid) {
  BasisExpansion e = unit_expansion(params, n + 1, n);
  GridWave chi = synthesize(e, grid, cplx(0.0, params.shift_scale()));
  const cplx phase = std::exp(cplx(0.0, -energy(n, params) * t));
  for (auto& a : chi.amplitudes) a *= phase;
  return apply_F(chi, TransformSpec{&profile, t, true});
}

}  // namespace ctpt
