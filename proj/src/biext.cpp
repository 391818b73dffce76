#include "hodge/biext.hpp"

#include "hodge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hodge {

namespace {

constexpr double kPi = std::numbers::pi;

Point z_of(const std::vector<std::complex<double>>& s) {
  Point z(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (std::abs(s[j]) == 0.0 || std::abs(s[j]) >= 1.0) throw HodgeError("invalid-argument", "s must lie in the punctured unit disk");
    long double x = std::arg(static_cast<std::complex<long double>>(s[j])) / (2.0L * std::numbers::pi_v<long double>);
    long double y = -std::log(std::abs(static_cast<std::complex<long double>>(s[j]))) / (2.0L * std::numbers::pi_v<long double>);
    z[j] = complex_from_long_double(x, y);
  }
  return z;
}

}  // namespace

Matrix build_mu(const BiextensionInstance& b) {
  const auto& w = b.inst.W;
  const std::size_t n = b.inst.dim;
  for (int k : w.jumps())
    if (k < -2 || k > 0) throw HodgeError("no-central-solution", "weights must lie in {0, -1, -2}");
  if (!w.at(0).is_full() || !w.at(-3).is_zero()) throw HodgeError("no-central-solution", "W must run from W_{-2} to W_0 = V");
  if (w.at(0).dim() - w.at(-1).dim() != 1) throw HodgeError("no-central-solution", "Gr^W_0 must have rank one");
  if (w.at(-2).dim() != 1) throw HodgeError("no-central-solution", "Gr^W_{-2} must have rank one");
  if (b.one.size() != n || b.one_dual.size() != n) throw HodgeError("dimension-mismatch", "biextension generators");
  if (w.at(-1).contains(b.one)) throw HodgeError("no-central-solution", "one must lift the generator of Gr^W_0");
  if (is_zero(b.one_dual) || !w.at(-2).contains(b.one_dual))
    throw HodgeError("no-central-solution", "one_dual must generate W_{-2}");

  // mu = one_dual (x) f with f(W_{-1}) = 0 and f(one) = 1.
  Vector f = annihilator(w.at(-1)).basis().front();
  Complex fo;
  for (std::size_t i = 0; i < n; ++i) fo += f[i] * b.one[i];
  Matrix mu(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mu(i, j) = b.one_dual[i] * f[j] / fo;
  for (const auto& x : lie_algebra_basis(b.inst))
    if (!commutator(mu, x).is_zero()) throw HodgeError("no-central-solution", "mu is not central in g");
  return mu;
}

Rational delta_over_mu(const GPMHSInstance& inst, const Matrix& mu) {
  Matrix y = grading_Y(deligne_bigrading(inst.F, inst.W));
  Matrix delta = Complex(Rational(1), Rational(0)) / Complex(Rational(0), Rational(4)) * (y - y.conj());
  for (std::size_t i = 0; i < mu.rows(); ++i)
    for (std::size_t j = 0; j < mu.cols(); ++j) {
      if (mu(i, j).is_zero()) continue;
      Complex c = delta(i, j) / mu(i, j);
      if (!c.is_real() || delta != c * mu) throw HodgeError("invalid-extension-data", "delta is not a real multiple of mu");
      return c.re();
    }
  throw HodgeError("invalid-argument", "mu is zero");
}

double biext_metric_value(const BiextensionInstance& b) {
  Matrix mu = build_mu(b);
  return std::exp(-2.0 * kPi * delta_over_mu(b.inst, mu).get_d());
}

std::pair<GPMHSInstance, Complex> gm_action(const BiextensionInstance& b, std::complex<double> t) {
  if (t == 0.0) throw HodgeError("invalid-argument", "t must be nonzero");
  Matrix mu = build_mu(b);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  std::complex<long double> tl(t.real(), t.imag());
  Complex c = complex_from_long_double(std::arg(tl) / two_pi, -std::log(std::abs(tl)) / two_pi);
  return {b.inst.with_F(b.inst.F.transformed(exp_nilpotent(c * mu))), c};
}

double phi_at(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const Matrix& mu,
              const std::vector<std::complex<double>>& s) {
  DecFiltration f = lnf_eval(spec, lnf, z_of(s));
  return 2.0 * kPi * delta_over_mu(spec.base.with_F(f), mu).get_d();
}

PhiReport phi_scan(const BiextensionInstance& b, const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                   const SL2Data& sl2, const std::vector<std::vector<std::complex<double>>>& grid, double rho,
                   std::vector<int> refinements) {
  auto adm = check_admissible_orbit(spec);
  if (!adm.ok()) throw HodgeError("not-admissible", "orbit fails clause " + adm.first_failed);
  check_lnf(spec, lnf);
  check_sl2(sl2, spec.W());
  Matrix mu = build_mu({spec.base, b.one, b.one_dual});
  for (const auto& x : spec.N)
    if (!commutator(mu, x).is_zero()) throw HodgeError("no-central-solution", "mu does not commute with the monodromy");

  PhiReport rep;
  rep.rho = rho;
  rep.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    PhiPoint& pt = rep.points[i];
    pt.s = grid[i];
    if (pt.s.size() != spec.rank()) throw HodgeError("dimension-mismatch", "grid point dimension");
    Point z = z_of(pt.s);
    DecFiltration f = lnf_eval(spec, lnf, z);
    Rational c = delta_over_mu(spec.base.with_F(f), mu);
    pt.phi = 2.0 * kPi * c.get_d();
    std::vector<double> y(z.size());
    std::vector<Complex> x(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
      y[j] = z[j].im().get_d();
      x[j] = Complex(z[j].re());
    }
    DecFiltration g = f.transformed(exp_nilpotent(-spec.N_of(x))).transformed(grading_t_inverse(sl2, y));
    Rational cc = delta_over_mu(spec.base.with_F(g), mu);
    // -log|s_1| = 2 pi y_1
    pt.phi_compact = 2.0 * kPi * Rational(z[0].im() * cc).get_d();
    pt.ratio = pt.phi / (2.0 * kPi * z[0].im().get_d());
  });

  rep.compact_agrees = true;
  for (const auto& pt : rep.points) {
    rep.compact_agrees = rep.compact_agrees && std::abs(pt.phi - pt.phi_compact) <= 1e-9 * std::max(1.0, std::abs(pt.phi));
    rep.ratio_max = std::max(rep.ratio_max, std::abs(pt.ratio));
  }
  // secant slopes of |phi| against -log|s_1| along the grid, ordered towards the puncture
  std::vector<std::pair<double, double>> ray;
  for (const auto& pt : rep.points) ray.emplace_back(-std::log(std::abs(pt.s.front())), std::abs(pt.phi));
  std::sort(ray.begin(), ray.end());
  for (std::size_t i = 1; i < ray.size(); ++i)
    if (ray[i].first > ray[i - 1].first)
      rep.slopes.push_back((ray[i].second - ray[i - 1].second) / (ray[i].first - ray[i - 1].first));
  rep.bounded = std::isfinite(rep.ratio_max);
  for (double v : rep.slopes) rep.bounded = rep.bounded && std::isfinite(v);
  if (rep.bounded && rep.slopes.size() >= 2) {
    double a = rep.slopes[rep.slopes.size() - 2], c = rep.slopes.back();
    rep.bounded = std::abs(c - a) <= 0.1 * std::max(std::abs(a), std::abs(c)) + 1e-9;
  }

  const std::size_t r = spec.rank();
  auto integral = [&](double radius, int n) {
    // midpoint rule in polar coordinates on each factor
    std::size_t per = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::size_t total = 1;
    for (std::size_t j = 0; j < r; ++j) total *= per;
    std::vector<double> vals(total);
    const double dr = radius / n, dt = 2.0 * kPi / n;
    parallel_for(total, [&](std::size_t idx) {
      std::vector<std::complex<double>> s(r);
      double weight = 1;
      std::size_t rest = idx;
      for (std::size_t j = 0; j < r; ++j) {
        std::size_t node = rest % per;
        rest /= per;
        double rad = (static_cast<double>(node / static_cast<std::size_t>(n)) + 0.5) * dr;
        double ang = (static_cast<double>(node % static_cast<std::size_t>(n)) + 0.5) * dt;
        s[j] = std::polar(rad, ang);
        weight *= rad * dr * dt;
      }
      vals[idx] = std::abs(phi_at(spec, lnf, mu, s)) * weight;
    });
    double sum = 0;
    for (double v : vals) sum += v;
    return sum;
  };
  for (int n : refinements) {
    rep.refinements.push_back(n);
    rep.integrals.push_back(integral(rho, n));
  }
  if (rep.integrals.size() >= 2) {
    double a = rep.integrals[rep.integrals.size() - 2], c = rep.integrals.back();
    rep.integral_converged = c == 0.0 ? a == 0.0 : std::abs(c - a) <= 0.01 * std::abs(c);
  }
  int coarse = refinements.empty() ? 16 : std::min(refinements.back(), 16);
  for (int k = 0; k < 5; ++k) rep.shrinking.push_back(integral(rho / std::pow(2.0, k), coarse));
  return rep;
}

}  // namespace hodge
