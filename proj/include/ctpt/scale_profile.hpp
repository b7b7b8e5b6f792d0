#pragma once

// The positive mass-scale function alpha(t), its derivatives, the auxiliary
// equations, and the effective frequency Omega^2.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctpt/core.hpp"

namespace ctpt {

enum class Regime { Constant, Trig, Cosh, CaldirolaKanai, Tabulated };

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Constant: return "constant";
    case Regime::Trig: return "trig";
    case Regime::Cosh: return "cosh";
    case Regime::CaldirolaKanai: return "caldirola-kanai";
    case Regime::Tabulated: return "tabulated";
  }
  return "?";
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "constant") return Regime::Constant;
  if (s == "trig") return Regime::Trig;
  if (s == "cosh") return Regime::Cosh;
  if (s == "caldirola-kanai" || s == "caldirola_kanai" || s == "ck") return Regime::CaldirolaKanai;
  if (s == "tabulated") return Regime::Tabulated;
  throw std::invalid_argument("unknown regime: " + s);
}

struct AlphaState {
  double alpha = 1.0;
  double dalpha = 0.0;
  double ddalpha = 0.0;
};

namespace detail {

// Natural cubic spline on strictly increasing knots.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
    const int n = int(x_.size());
    if (n < 4) throw std::invalid_argument("tabulated profile needs at least 4 samples");
    for (int i = 0; i + 1 < n; ++i)
      if (!(x_[i] < x_[i + 1])) throw std::invalid_argument("tabulated profile: t must be strictly increasing");
    // second derivatives by the standard tridiagonal solve
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0), diag(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
      const double p = sig * m_[i - 1] + 2.0;
      m_[i] = (sig - 1.0) / p;
      u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
      u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (int i = n - 2; i >= 0; --i) m_[i] = m_[i] * m_[i + 1] + u[i];
  }

  double t_min() const { return x_.front(); }
  double t_max() const { return x_.back(); }

  double operator()(double t) const {
    if (t < x_.front() || t > x_.back())
      throw std::domain_error("tabulated profile: t outside the table range");
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    int hi = std::min(int(it - x_.begin()), int(x_.size()) - 1);
    int lo = std::max(hi - 1, 0);
    if (lo == hi) hi = lo + 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - t) / h, b = (t - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
  }

 private:
  std::vector<double> x_, y_;
  std::vector<double> m_;
};

}  // namespace detail

// alpha(t) in one of four closed-form regimes or tabulated. The closed forms
// are the alpha = rho^2 family of Eq.-of-motion solutions, so each satisfies
// the auxiliary equation and Omega^2(t) == omega0^2 identically:
//   Trig           (omega0 > omega): alpha = cos^2(kappa t)/A^2
//   Cosh           (omega  > omega0): alpha = cosh^2(gamma t)/A^2
//   CaldirolaKanai (omega  > omega0): alpha = exp(-2 gamma t)/A^2
// with kappa = sqrt(omega0^2-omega^2), gamma = sqrt(omega^2-omega0^2).
class ScaleProfile {
 public:
  static constexpr double kTrigSingularMargin = 1e-3;
  static constexpr double kTabulatedFdStep = 1e-4;

  static ScaleProfile constant(const PhysicalParams& params, double A = 1.0) {
    return ScaleProfile(Regime::Constant, params, A, 0.0);
  }
  static ScaleProfile trig(const PhysicalParams& params, double A = 1.0) {
    if (!(params.omega0 > params.omega))
      throw std::invalid_argument("trig regime requires omega0 > omega");
    return ScaleProfile(Regime::Trig, params, A, 0.0);
  }
  static ScaleProfile cosh_regime(const PhysicalParams& params, double A = 1.0) {
    if (!(params.omega > params.omega0))
      throw std::invalid_argument("cosh regime requires omega > omega0");
    return ScaleProfile(Regime::Cosh, params, A, 0.0);
  }
  static ScaleProfile caldirola_kanai(const PhysicalParams& params, double A = 1.0) {
    if (!(params.omega > params.omega0))
      throw std::invalid_argument("caldirola-kanai regime requires omega > omega0");
    return ScaleProfile(Regime::CaldirolaKanai, params, A, 0.0);
  }
  static ScaleProfile tabulated(const PhysicalParams& params, std::vector<double> ts,
                                std::vector<double> alphas) {
    ScaleProfile p(Regime::Tabulated, params, 1.0, 0.0);
    for (double a : alphas)
      if (!(a > 0.0)) throw std::invalid_argument("tabulated profile: alpha must be positive");
    p.spline_ = detail::CubicSpline(std::move(ts), std::move(alphas));
    return p;
  }

  // Two-column CSV (t, alpha), strictly increasing t. '#' starts a comment.
  static ScaleProfile tabulated_from_csv(const PhysicalParams& params, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tabulated profile: " + path);
    std::vector<double> ts, as;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      for (auto& ch : line)
        if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
      std::istringstream ls(line);
      double t, a;
      if (ls >> t >> a) {
        ts.push_back(t);
        as.push_back(a);
      }
    }
    return tabulated(params, std::move(ts), std::move(as));
  }

  static ScaleProfile make(Regime r, const PhysicalParams& params, double A = 1.0, double B = 0.0) {
    switch (r) {
      case Regime::Constant: return constant(params, A);
      case Regime::Trig: return trig(params, A);
      case Regime::Cosh: return cosh_regime(params, A);
      case Regime::CaldirolaKanai: return caldirola_kanai(params, A);
      case Regime::Tabulated:
        throw std::invalid_argument("tabulated profiles are built from samples or CSV");
    }
    throw std::invalid_argument("bad regime");
    (void)B;
  }

  Regime regime() const { return regime_; }
  const PhysicalParams& params() const { return params_; }
  double amplitude() const { return A_; }

  AlphaState evaluate(double t) const {
    const double w = params_.omega, w0 = params_.omega0;
    const double inv_A2 = 1.0 / (A_ * A_);
    AlphaState s;
    switch (regime_) {
      case Regime::Constant:
        s = {inv_A2, 0.0, 0.0};
        break;
      case Regime::Trig: {
        const double k = std::sqrt(w0 * w0 - w * w);
        const double half = kPi / (2.0 * k);  // cos(k t) zeros at odd multiples
        const double d = std::abs(std::remainder(std::abs(t) - half, 2.0 * half));
        if (d < kTrigSingularMargin)
          throw std::domain_error("trig profile: t within 1e-3 of a cos zero (alpha singular)");
        const double c = std::cos(k * t);
        s = {c * c * inv_A2, -k * std::sin(2.0 * k * t) * inv_A2,
             -2.0 * k * k * std::cos(2.0 * k * t) * inv_A2};
        break;
      }
      case Regime::Cosh: {
        const double g = std::sqrt(w * w - w0 * w0);
        const double c = std::cosh(g * t);
        s = {c * c * inv_A2, g * std::sinh(2.0 * g * t) * inv_A2,
             2.0 * g * g * std::cosh(2.0 * g * t) * inv_A2};
        break;
      }
      case Regime::CaldirolaKanai: {
        const double g = std::sqrt(w * w - w0 * w0);
        const double a = std::exp(-2.0 * g * t) * inv_A2;
        s = {a, -2.0 * g * a, 4.0 * g * g * a};
        break;
      }
      case Regime::Tabulated: {
        const double d = kTabulatedFdStep;
        const auto& f = spline_;
        s.alpha = f(t);
        // centered 5-point stencils
        s.dalpha = (-f(t + 2 * d) + 8 * f(t + d) - 8 * f(t - d) + f(t - 2 * d)) / (12.0 * d);
        s.ddalpha = (-f(t + 2 * d) + 16 * f(t + d) - 30 * f(t) + 16 * f(t - d) - f(t - 2 * d)) /
                    (12.0 * d * d);
        break;
      }
    }
    if (!(s.alpha > 0.0)) throw std::domain_error("scale profile: alpha(t) <= 0");
    return s;
  }

  // Omega^2(t) = omega^2 + adot^2/(4 a^2) - addot/(2 a)
  double effective_frequency_sq(double t) const {
    const AlphaState s = evaluate(t);
    const double w = params_.omega;
    return w * w + s.dalpha * s.dalpha / (4.0 * s.alpha * s.alpha) - s.ddalpha / (2.0 * s.alpha);
  }

 private:
  ScaleProfile(Regime r, const PhysicalParams& params, double A, double B)
      : regime_(r), params_(params), A_(A), B_(B) {
    params_.validate();
    if (!(A != 0.0) || !std::isfinite(A)) throw std::invalid_argument("profile amplitude A must be nonzero");
  }

  Regime regime_;
  PhysicalParams params_;
  double A_ = 1.0;
  double B_ = 0.0;
  detail::CubicSpline spline_;
};

// Max |addot - adot^2/(2 a) + 2 a (omega0^2 - omega^2)| over the time grid.
inline double check_auxiliary(const ScaleProfile& profile, const std::vector<double>& t_grid) {
  const double w = profile.params().omega, w0 = profile.params().omega0;
  double worst = 0.0;
  for (double t : t_grid) {
    const AlphaState s = profile.evaluate(t);
    const double r =
        s.ddalpha - s.dalpha * s.dalpha / (2.0 * s.alpha) + 2.0 * s.alpha * (w0 * w0 - w * w);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// Closed-form solution of rhoddot + (omega0^2 - omega^2) rho = 0.
// Oscillatory branch: the real combination (A+B)cos + (A-B)sin, which equals
// the A e^{i k t} + B e^{-i k t} pair when (A, B) are conjugates; hyperbolic
// branch: A e^{g t} + B e^{-g t}; degenerate omega0 == omega: the constant
// branch A + B (a linear-in-t rho would leave the positive domain).
inline double rho_solve(const PhysicalParams& params, double A, double B, double t) {
  params.validate();
  const double w = params.omega, w0 = params.omega0;
  double rho;
  if (w0 > w) {
    const double k = std::sqrt(w0 * w0 - w * w);
    rho = (A + B) * std::cos(k * t) + (A - B) * std::sin(k * t);
  } else if (w > w0) {
    const double g = std::sqrt(w * w - w0 * w0);
    rho = A * std::exp(g * t) + B * std::exp(-g * t);
  } else {
    rho = A + B;
  }
  if (std::abs(rho) < 1e-12) throw std::domain_error("rho_solve: rho(t) crosses zero");
  return rho;
}

}  // namespace ctpt
