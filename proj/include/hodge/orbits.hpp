#pragma once

#include "hodge/metrics.hpp"
#include "hodge/weightfilt.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hodge {

using Exponent = std::vector<int>;
using Point = std::vector<Complex>;

/// Gamma(s) = sum_K s^K Gamma_K, a polynomial with Gamma(0) = 0.
struct LocalNormalForm {
  std::map<Exponent, Matrix> gamma;

  bool empty() const { return gamma.empty(); }
  Matrix at(const Point& s, std::size_t dim) const;
  /// Gamma_j: the first j variables set to zero.
  LocalNormalForm restricted(std::size_t j) const;
};

/// H_1..H_r and Y_0 for t(y) = y_1^{-Y_0/2} prod_j y_j^{-H_j/2}.
struct SL2Data {
  std::vector<Matrix> H;
  Matrix Y0;
};

/// Throws lnf-invalid unless every Gamma_K lies in q of (F_inf, M) and commutes with N_j
/// whenever K_j = 0.
void check_lnf(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf);

/// s_j = e^{2 pi i z_j} rounded to Gaussian rationals, after moving Re z_j into [0,1).
Point s_coordinates(const Point& z);

/// e^{N(z)} F_inf.
DecFiltration orbit_eval(const NilpotentOrbitSpec& spec, const Point& z);
/// e^{N(z)} e^{Gamma(s)} F_inf; `restrict_to` evaluates Gamma_j instead of Gamma.
DecFiltration lnf_eval(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const Point& z,
                       std::optional<std::size_t> restrict_to = std::nullopt);
/// Membership of a filtration in M, with the spec's W and graded polarizations.
Membership orbit_membership(const NilpotentOrbitSpec& spec, const DecFiltration& f);

/// Throws invalid-sl2 unless the H_j and Y_0 are commuting semisimple operators with integer
/// eigenvalues and Y_0 grades W.
void check_sl2(const SL2Data& sl2, const IncFiltration& w);
/// t(y), eigenvalue powers rounded to rationals (exact when every y_j is a perfect square).
Matrix grading_t(const SL2Data& sl2, const std::vector<double>& y);
Matrix grading_t_inverse(const SL2Data& sl2, const std::vector<double>& y);

struct SL2Triple {
  Matrix N, H, N_plus;
};
/// H = Y_(hat F, W(N)[-k]) - k and the unique N+ with [H, N+] = 2N+, [N+, N] = H.
SL2Triple sl2_triple_one_var(const Matrix& n, const DecFiltration& hat_f, int k);
/// Phi^p = sum_{b <= k - p} I^{a,b} of the split structure (hat F, W(N)[-k]).
DecFiltration naive_limit(const Matrix& n, const DecFiltration& hat_f, int k);

/// Euclidean Frobenius norm of an exact matrix.
double frobenius(const Matrix& a);

struct DecayReport {
  std::vector<double> values;  // ||Ad(e^{N(z(m))}) Gamma(s(m))||
  bool monotone_tail = false;
  bool below_tolerance = false;
  bool ok() const { return monotone_tail && below_tolerance; }
};
/// Default ray: z_j(m) = i m for m = 1..count.
std::vector<Point> default_ray(std::size_t rank, int count = 12);
DecayReport ad_gamma_decay(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const std::vector<Point>& zs,
                           double tolerance = 1e-8);

/// Components of Gamma^j(s) = log(e^{Gamma_{j-1}(s)} e^{-Gamma_j(s)}) with a positive
/// ad(Y^k) weight for some k < j, where Y^k = Y_0 + H_1 + ... + H_k. Each entry names j and
/// the weight vector; empty when the vanishing pattern holds at the sample points.
std::vector<std::string> vanishing_violations(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                                              const SL2Data& sl2, const std::vector<Point>& sample_s);

/// Smallest eigenvalue of i^{p-q} Q(v, conj v) over Euclidean unit vectors v of every H^{p,q}
/// of every Gr^W_w. Zero when the Hodge decomposition fails.
double positivity_margin(const GPMHSInstance& inst);

/// Least-squares line y = a + b x.
struct LineFit {
  double intercept = 0, slope = 0, residual = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScanPoint {
  std::vector<double> y;
  std::vector<double> x;
  double value = 0;     // distance surrogate or positivity margin
  double adjusted = 0;  // log d + 2 pi y_min (distance scans)
  std::string status;
};

struct ScanReport {
  std::string command;
  std::vector<ScanPoint> points;
  std::map<std::string, double> fit;
  std::map<std::string, bool> flags;
  std::optional<double> alpha;
  bool pass() const;
};

/// Grid points y with y_1 >= ... >= y_r >= 1.
bool in_region(const std::vector<double>& y);

/// Distances between F(z) and theta(z) over the grid. Weak form (standard metric): fit of
/// log d + 2 pi y_min against log y_1, pass when the slope is at most L + tol. Strong form
/// (several variables): fit against log y_min and log y_1 jointly, the y_1 coefficient is the
/// prefactor exponent.
ScanReport distance_scan(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                         const std::vector<std::vector<double>>& grid, MetricMode mode,
                         const std::vector<double>& x = {}, double tolerance = 0.25, int panels = 32);

/// t^{-1}(y) e^{-N(x)} F(z) over the grid; records membership and positivity margins.
/// `twist` = false omits t^{-1}(y) (contrast run).
ScanReport rel_compact_scan(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const SL2Data& sl2,
                            const std::vector<std::vector<double>>& grid, const std::vector<double>& x = {},
                            bool twist = true, double eta = 0.0);

/// Smallest a (to `resolution`) such that e^{N(i a (1,..,1))} e^{Gamma} F_inf lies in M, found by
/// bisection on [0, upper]; nullopt when even `upper` fails.
std::optional<double> membership_threshold(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                                           double upper = 64.0, double resolution = 1.0 / 64);

/// max |entries| of Ad(t^{-1}(y)) e^{N(iy)} along the given points.
double p_function_bound(const NilpotentOrbitSpec& spec, const SL2Data& sl2, const std::vector<std::vector<double>>& ys);

}  // namespace hodge
