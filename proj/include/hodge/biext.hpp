#pragma once

#include "hodge/orbits.hpp"

#include <complex>

namespace hodge {

/// Mixed Hodge structure with Gr^W_0 = Z(0), Gr^W_{-1} = H, Gr^W_{-2} = Z(1), together with a
/// lift `one` of the generator of Gr_0 and the generator `one_dual` of W_{-2}.
struct BiextensionInstance {
  GPMHSInstance inst;
  Vector one;
  Vector one_dual;
};

/// The unique mu with mu(W_{-1}) = 0, mu(one) = one_dual, central in g_C.
/// Throws no-central-solution when the instance is not of biextension type.
Matrix build_mu(const BiextensionInstance& b);

/// c with delta_(F,W) = c mu; throws invalid-extension-data unless delta is a real multiple of mu.
Rational delta_over_mu(const GPMHSInstance& inst, const Matrix& mu);

/// |[F]| = exp(-2 pi delta/mu).
double biext_metric_value(const BiextensionInstance& b);

/// t.F = e^{(1/2 pi i) log(t) mu} F with the coefficient rounded to a Gaussian rational; also
/// returns the coefficient used.
std::pair<GPMHSInstance, Complex> gm_action(const BiextensionInstance& b, std::complex<double> t);

struct PhiPoint {
  std::vector<std::complex<double>> s;
  double phi = 0;          // 2 pi delta(F(z))/mu
  double phi_compact = 0;  // -log|s_1| delta(t^{-1}(y) e^{-N(x)} F(z))/mu
  double ratio = 0;        // phi / (-log|s_1|)
};

struct PhiReport {
  std::vector<PhiPoint> points;
  double ratio_max = 0;       // max |phi| / (-log|s_1|) over the grid
  std::vector<double> slopes;  // secant slopes of |phi| against -log|s_1|, towards the puncture
  std::vector<double> integrals;  // Riemann sums of the integral of |phi| at successive refinements
  std::vector<int> refinements;
  std::vector<double> shrinking;  // integral over polydisks of radius rho / 2^k
  double rho = 0.1;
  bool bounded = false;
  bool compact_agrees = false;
  bool integral_converged = false;
  bool pass() const { return bounded && compact_agrees && integral_converged; }
};

/// phi = 2 pi delta(F(z))/mu at a point of the punctured polydisk.
double phi_at(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const Matrix& mu,
              const std::vector<std::complex<double>>& s);

/// Evaluates phi and its compact form along a ray of grid points and integrates |phi| over the polydisk of
/// radius rho (polar midpoint rule, n x n nodes per variable for each n in `refinements`).
/// `bounded` holds when the last two secant slopes agree to 10%, i.e. |phi| grows at most
/// linearly in -log|s_1| along the ray.
PhiReport phi_scan(const BiextensionInstance& b, const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                   const SL2Data& sl2, const std::vector<std::vector<std::complex<double>>>& grid, double rho = 0.1,
                   std::vector<int> refinements = {8, 16, 32, 64});

}  // namespace hodge
