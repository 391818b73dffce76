#include "hodge/orbits.hpp"

#include "hodge/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace hodge {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

Rational floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

// Integer eigenvalues of a diagonalizable operator with integer spectrum, or nullopt.
std::optional<std::vector<long>> integer_spectrum(const Matrix& a) {
  const std::size_t n = a.rows();
  long bound = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& c = a(i, j);
      if (!c.is_real()) return std::nullopt;
      bound += static_cast<long>(std::ceil(std::abs(c.re().get_d())));
    }
  std::vector<long> out;
  std::size_t total = 0;
  for (long l = -bound; l <= bound && total < n; ++l) {
    std::size_t k = kernel(a - Complex(l) * Matrix::identity(n)).dim();
    if (k > 0) {
      out.push_back(l);
      total += k;
    }
  }
  if (total != n) return std::nullopt;
  return out;
}

// Projector onto the lambda-eigenspace of a semisimple operator with the given spectrum.
Matrix eigenprojector(const Matrix& a, const std::vector<long>& spectrum, long lambda) {
  const std::size_t n = a.rows();
  Matrix p = Matrix::identity(n);
  for (long mu : spectrum) {
    if (mu == lambda) continue;
    p = p * (Complex(Rational(1, lambda - mu)) * (a - Complex(mu) * Matrix::identity(n)));
  }
  return p;
}

bool perfect_square(const mpz_class& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

// y^{e/2} for integer e, exact when possible.
Rational half_power(double y, long e) {
  Rational r = rational_from_double(y);
  if (e % 2 != 0 && perfect_square(r.get_num()) && perfect_square(r.get_den())) {
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), r.get_num_mpz_t());
    mpz_sqrt(b.get_mpz_t(), r.get_den_mpz_t());
    r = Rational(a, b);
    r.canonicalize();
    e *= 2;
  }
  if (e % 2 == 0) {
    long k = e / 2;
    Rational out(1);
    Rational base = k >= 0 ? r : Rational(1) / r;
    for (long i = 0; i < std::abs(k); ++i) out *= base;
    return out;
  }
  return rational_from_long_double(std::pow(static_cast<long double>(y), static_cast<long double>(e) / 2.0L));
}

// prod over factors of y^{sign * (-A/2)} with A semisimple.
Matrix power_operator(const Matrix& a, double y, int sign) {
  auto spec = integer_spectrum(a);
  if (!spec) throw HodgeError("invalid-sl2", "operator is not semisimple with integer eigenvalues");
  Matrix out(a.rows(), a.rows());
  for (long l : *spec) out += Complex(half_power(y, -sign * l)) * eigenprojector(a, *spec, l);
  return out;
}

Eigen::MatrixXcd to_eigen(const std::vector<Vector>& cols, std::size_t n) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i].to_double();
  return m;
}

Point point_of(const std::vector<double>& x, const std::vector<double>& y) {
  Point z(y.size());
  for (std::size_t j = 0; j < y.size(); ++j)
    z[j] = Complex(rational_from_double(j < x.size() ? x[j] : 0.0), rational_from_double(y[j]));
  return z;
}

Matrix real_shift(const NilpotentOrbitSpec& spec, const std::vector<double>& x) {
  std::vector<Complex> c(spec.rank());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = Complex(rational_from_double(j < x.size() ? x[j] : 0.0));
  return spec.N_of(c);
}

bool unipotent_type(const NilpotentOrbitSpec& spec) {
  const auto& w = spec.W();
  for (const auto& n : spec.N)
    for (int k = w.k_min(); k <= w.k_max(); ++k)
      if (!w.at(k - 2).contains(image(n, w.at(k)))) return false;
  auto m = try_relative_weight_filtration(spec.N_sum(), w);
  return m && *m == w;
}

}  // namespace

// ------------------------------------------------------------------ local normal form

Matrix LocalNormalForm::at(const Point& s, std::size_t dim) const {
  Matrix out(dim, dim);
  for (const auto& [k, g] : gamma) {
    if (k.size() != s.size()) throw HodgeError("dimension-mismatch", "monomial exponent length");
    Complex c(1);
    for (std::size_t j = 0; j < k.size(); ++j)
      for (int e = 0; e < k[j]; ++e) c *= s[j];
    if (!c.is_zero()) out += c * g;
  }
  return out;
}

LocalNormalForm LocalNormalForm::restricted(std::size_t j) const {
  LocalNormalForm out;
  for (const auto& [k, g] : gamma) {
    bool keep = true;
    for (std::size_t i = 0; i < std::min(j, k.size()); ++i) keep = keep && k[i] == 0;
    if (keep) out.gamma.emplace(k, g);
  }
  return out;
}

void check_lnf(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf) {
  if (lnf.empty()) return;
  auto adm = check_admissible_orbit(spec);
  if (!adm.ok()) throw HodgeError("not-admissible", "orbit fails clause " + adm.first_failed);
  const Bigrading& b = *adm.limit_bigrading;
  for (const auto& [k, g] : lnf.gamma) {
    std::ostringstream name;
    for (int e : k) name << e << ' ';
    if (k.size() != spec.rank()) throw HodgeError("lnf-invalid", "exponent vector length differs from the rank");
    if (std::all_of(k.begin(), k.end(), [](int e) { return e == 0; }) ||
        std::any_of(k.begin(), k.end(), [](int e) { return e < 0; }))
      throw HodgeError("lnf-invalid", "monomial exponents must be nonnegative and not all zero");
    if (g.rows() != spec.dim() || !g.square()) throw HodgeError("dimension-mismatch", "Gamma coefficient");
    if (!b.in_q(g)) throw HodgeError("lnf-invalid", "coefficient of s^[" + name.str() + "] is not in q");
    if (!in_lie_algebra(spec.base, g)) throw HodgeError("lnf-invalid", "coefficient of s^[" + name.str() + "] is not in g");
    for (std::size_t j = 0; j < k.size(); ++j)
      if (k[j] == 0 && !commutator(spec.N[j], g).is_zero())
        throw HodgeError("lnf-invalid", "Gamma restricted to s_" + std::to_string(j + 1) + " = 0 does not commute with N_" +
                                            std::to_string(j + 1));
  }
}

Point s_coordinates(const Point& z) {
  Point s(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    Rational x = z[j].re() - floor_of(z[j].re());
    long double ang = kTwoPi * static_cast<long double>(x.get_d());
    long double mod = std::exp(-kTwoPi * static_cast<long double>(z[j].im().get_d()));
    s[j] = complex_from_long_double(mod * std::cos(ang), mod * std::sin(ang));
  }
  return s;
}

DecFiltration orbit_eval(const NilpotentOrbitSpec& spec, const Point& z) {
  return spec.F_inf().transformed(exp_nilpotent(spec.N_of(z)));
}

DecFiltration lnf_eval(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const Point& z,
                       std::optional<std::size_t> restrict_to) {
  if (z.size() != spec.rank()) throw HodgeError("dimension-mismatch", "number of variables");
  const LocalNormalForm& use = lnf;
  LocalNormalForm cut;
  if (restrict_to) cut = lnf.restricted(*restrict_to);
  Matrix gamma = (restrict_to ? cut : use).at(s_coordinates(z), spec.dim());
  Matrix g = exp_nilpotent(spec.N_of(z));
  if (!gamma.is_zero()) g = g * exp_nilpotent(gamma);
  return spec.F_inf().transformed(g);
}

Membership orbit_membership(const NilpotentOrbitSpec& spec, const DecFiltration& f) {
  return validate_instance(spec.base.with_F(f)).status;
}

// ------------------------------------------------------------------ t(y)

void check_sl2(const SL2Data& sl2, const IncFiltration& w) {
  const std::size_t n = w.ambient_dim();
  std::vector<const Matrix*> ops{&sl2.Y0};
  for (const auto& h : sl2.H) ops.push_back(&h);
  for (const auto* a : ops) {
    if (a->rows() != n || !a->square()) throw HodgeError("dimension-mismatch", "sl2 data");
    if (!a->is_real()) throw HodgeError("invalid-sl2", "sl2 data must be real");
    if (!integer_spectrum(*a)) throw HodgeError("invalid-sl2", "operator is not semisimple with integer eigenvalues");
  }
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      if (!commutator(*ops[i], *ops[j]).is_zero()) throw HodgeError("invalid-sl2", "sl2 data does not commute");
  auto spec = *integer_spectrum(sl2.Y0);
  for (int k = w.k_min() - 1; k <= w.k_max(); ++k) {
    Subspace acc(n);
    for (long l : spec)
      if (l <= k) acc = acc + image(eigenprojector(sl2.Y0, spec, l));
    if (acc != w.at(k)) throw HodgeError("invalid-sl2", "Y0 does not grade W");
  }
}

Matrix grading_t(const SL2Data& sl2, const std::vector<double>& y) {
  if (y.size() != sl2.H.size()) throw HodgeError("dimension-mismatch", "t(y) needs one y per H_j");
  for (double v : y)
    if (!(v > 0)) throw HodgeError("invalid-argument", "t(y) needs positive y");
  const std::size_t n = sl2.Y0.rows();
  Matrix t = y.empty() ? Matrix::identity(n) : power_operator(sl2.Y0, y[0], 1);
  for (std::size_t j = 0; j < y.size(); ++j) t = t * power_operator(sl2.H[j], y[j], 1);
  return t;
}

Matrix grading_t_inverse(const SL2Data& sl2, const std::vector<double>& y) {
  if (y.size() != sl2.H.size()) throw HodgeError("dimension-mismatch", "t(y) needs one y per H_j");
  for (double v : y)
    if (!(v > 0)) throw HodgeError("invalid-argument", "t(y) needs positive y");
  const std::size_t n = sl2.Y0.rows();
  Matrix t = y.empty() ? Matrix::identity(n) : power_operator(sl2.Y0, y[0], -1);
  for (std::size_t j = 0; j < y.size(); ++j) t = t * power_operator(sl2.H[j], y[j], -1);
  return t;
}

// ------------------------------------------------------------------ sl2-triples

SL2Triple sl2_triple_one_var(const Matrix& n, const DecFiltration& hat_f, int k) {
  const std::size_t dim = n.rows();
  if (!n.square() || hat_f.ambient_dim() != dim) throw HodgeError("dimension-mismatch", "sl2 triple");
  if (!n.is_real() || !is_nilpotent(n)) throw HodgeError("no-solution", "N must be real and nilpotent");
  IncFiltration w = monodromy_weight_filtration(n, k);
  Bigrading b;
  try {
    b = deligne_bigrading(hat_f, w);
  } catch (const HodgeError&) {
    throw HodgeError("no-solution", "(hat F, W(N)) is not a mixed Hodge structure");
  }
  if (!b.is_r_split()) throw HodgeError("no-solution", "(hat F, W(N)) is not split over R");
  for (const auto& [ab, part] : b.components(n))
    if (ab != HodgeType{-1, -1}) throw HodgeError("no-solution", "N is not a (-1,-1)-morphism of the limit");
  Matrix h = grading_Y(b) - Complex(k) * Matrix::identity(dim);
  if (commutator(h, n) != Complex(-2) * n) throw HodgeError("no-solution", "[H, N] != -2N");

  // [H, X] = 2X and [X, N] = H, unknowns x_{rc} at index r*dim + c.
  const std::size_t m = dim * dim;
  Matrix sys(2 * m, m);
  Vector rhs(2 * m);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      std::size_t eq = r * dim + c;
      for (std::size_t t = 0; t < dim; ++t) {
        // (HX - XH - 2X)_{rc}
        sys(eq, t * dim + c) += h(r, t);
        sys(eq, r * dim + t) -= h(t, c);
        // (XN - NX)_{rc}
        sys(m + eq, r * dim + t) += n(t, c);
        sys(m + eq, t * dim + c) -= n(r, t);
      }
      sys(eq, eq) -= Complex(2);
      rhs[m + eq] = h(r, c);
    }
  auto sol = solve(sys, rhs);
  if (!sol) throw HodgeError("no-solution", "no N+ completes the triple");
  Matrix np(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) np(r, c) = (*sol)[r * dim + c];
  if (commutator(h, np) != Complex(2) * np || commutator(np, n) != h || !np.is_real())
    throw HodgeError("internal", "sl2 triple fails its brackets");
  return {n, h, np};
}

DecFiltration naive_limit(const Matrix& n, const DecFiltration& hat_f, int k) {
  Bigrading b = deligne_bigrading(hat_f, monodromy_weight_filtration(n, k));
  int bmin = std::numeric_limits<int>::max(), bmax = std::numeric_limits<int>::min();
  for (const auto& [ab, s] : b.pieces()) {
    if (s.is_zero()) continue;
    bmin = std::min(bmin, ab.second);
    bmax = std::max(bmax, ab.second);
  }
  std::vector<Subspace> levels;
  for (int p = k - bmax; p <= k - bmin; ++p) {
    Subspace acc(n.rows());
    for (const auto& [ab, s] : b.pieces())
      if (ab.second <= k - p) acc = acc + s;
    levels.push_back(acc);
  }
  return DecFiltration(k - bmax, std::move(levels));
}

// ------------------------------------------------------------------ decay

double frobenius(const Matrix& a) {
  long double s = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += static_cast<long double>(a(i, j).norm2().get_d());
  return static_cast<double>(std::sqrt(s));
}

std::vector<Point> default_ray(std::size_t rank, int count) {
  std::vector<Point> out;
  for (int m = 1; m <= count; ++m) out.emplace_back(rank, Complex(Rational(0), Rational(m)));
  return out;
}

DecayReport ad_gamma_decay(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const std::vector<Point>& zs,
                           double tolerance) {
  DecayReport r;
  r.values.resize(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    Matrix gamma = lnf.at(s_coordinates(zs[i]), spec.dim());
    if (gamma.is_zero()) return;
    Matrix g = exp_nilpotent(spec.N_of(zs[i]));
    r.values[i] = frobenius(adjoint_action(g, gamma));
  });
  r.monotone_tail = true;
  for (std::size_t i = r.values.size() / 2; i + 1 < r.values.size(); ++i)
    r.monotone_tail = r.monotone_tail && r.values[i + 1] <= r.values[i];
  r.below_tolerance = r.values.empty() || r.values.back() < tolerance;
  return r;
}

std::vector<std::string> vanishing_violations(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                                              const SL2Data& sl2, const std::vector<Point>& sample_s) {
  check_sl2(sl2, spec.W());
  const std::size_t n = spec.dim();
  std::vector<Matrix> ys;
  Matrix acc = sl2.Y0;
  for (const auto& h : sl2.H) {
    acc = acc + h;
    ys.push_back(acc);
  }
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= spec.rank(); ++j) {
    LocalNormalForm before = lnf.restricted(j - 1), after = lnf.restricted(j);
    for (std::size_t si = 0; si < sample_s.size(); ++si) {
      const Point& s = sample_s[si];
      Matrix g = exp_nilpotent(before.at(s, n)) * exp_nilpotent(-after.at(s, n));
      Matrix gj = log_unipotent(g);
      for (std::size_t k = 0; k + 1 < j; ++k) {
        auto spec_k = *integer_spectrum(ys[k]);
        for (long a : spec_k)
          for (long b : spec_k) {
            if (a - b <= 0) continue;
            Matrix part = eigenprojector(ys[k], spec_k, a) * gj * eigenprojector(ys[k], spec_k, b);
            if (!part.is_zero())
              out.push_back("Gamma^" + std::to_string(j) + " has ad(Y^" + std::to_string(k + 1) + ") weight " +
                            std::to_string(a - b) + " at sample " + std::to_string(si));
          }
      }
    }
  }
  return out;
}

// ------------------------------------------------------------------ positivity

double positivity_margin(const GPMHSInstance& inst) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& [w, pol] : inst.polarizations) {
    GradedPiece piece = inst.piece(w);
    const std::size_t d = piece.dim();
    if (d == 0) continue;
    DecFiltration f = induced_graded_filtration(inst.F, piece);
    DecFiltration fb = f.conj();
    std::size_t total = 0;
    for (int p = f.p_min(); p <= f.p_max(); ++p) {
      Subspace hpq = subspace_intersect(f.at(p), fb.at(w - p));
      std::size_t expected = f.at(p).dim() - f.at(p + 1).dim();
      if (hpq.dim() != expected) return 0.0;
      total += hpq.dim();
      if (hpq.is_zero()) continue;
      Eigen::MatrixXcd basis = to_eigen(hpq.basis(), d);
      Eigen::MatrixXcd q(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pol.form(i, j).to_double();
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
      Eigen::MatrixXcd u = qr.householderQ() * Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
      std::complex<double> phase = ipow(2 * p - w).to_double();
      Eigen::MatrixXcd k = phase * (u.transpose() * q * u.conjugate());
      k = 0.5 * (k + k.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
      margin = std::min(margin, es.eigenvalues().minCoeff());
    }
    if (total != d) return 0.0;
  }
  return std::isinf(margin) ? 0.0 : margin;
}

// ------------------------------------------------------------------ scans

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw HodgeError("invalid-argument", "line fit needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    double e = y[i] - f.intercept - f.slope * x[i];
    f.residual = std::max(f.residual, std::abs(e));
  }
  return f;
}

bool ScanReport::pass() const {
  return std::all_of(flags.begin(), flags.end(), [](const auto& kv) { return kv.second; });
}

bool in_region(const std::vector<double>& y) {
  if (y.empty()) return false;
  for (std::size_t j = 0; j + 1 < y.size(); ++j)
    if (y[j] < y[j + 1]) return false;
  return y.back() >= 1.0;
}

ScanReport distance_scan(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf,
                         const std::vector<std::vector<double>>& grid, MetricMode mode, const std::vector<double>& x,
                         double tolerance, int panels) {
  for (const auto& y : grid) {
    if (y.size() != spec.rank()) throw HodgeError("dimension-mismatch", "grid point dimension");
    if (!in_region(y)) throw HodgeError("grid-outside-region", "grid points need y_1 >= ... >= y_r >= 1");
  }
  check_lnf(spec, lnf);
  ScanReport rep;
  rep.command = "distance-scan";
  rep.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    ScanPoint& pt = rep.points[i];
    pt.y = grid[i];
    pt.x = x;
    Point z = point_of(x, pt.y);
    try {
      DecFiltration theta = orbit_eval(spec, z);
      DecFiltration f = lnf_eval(spec, lnf, z);
      pt.value = distance_surrogate(spec.base.with_F(theta), f, mode, TwistSource::delta, panels);
      double ymin = *std::min_element(pt.y.begin(), pt.y.end());
      pt.adjusted = pt.value > 0 ? std::log(pt.value) + 2.0 * std::numbers::pi * ymin
                                 : -std::numeric_limits<double>::infinity();
      pt.status = "ok";
    } catch (const HodgeError& e) {
      pt.status = e.kind();
    }
  });

  const double length = static_cast<double>(spec.W().length());
  rep.fit["L"] = length;
  std::vector<double> lx, ly, lmin;
  bool all_ok = true, all_zero = true;
  for (const auto& pt : rep.points) {
    all_ok = all_ok && pt.status == "ok";
    if (pt.status != "ok" || pt.value <= 0) continue;
    all_zero = false;
    lx.push_back(std::log(pt.y.front()));
    lmin.push_back(std::log(*std::min_element(pt.y.begin(), pt.y.end())));
    ly.push_back(pt.adjusted);
  }
  rep.flags["evaluated"] = all_ok;
  if (all_zero) {
    rep.flags["weak"] = true;
    return rep;
  }
  if (lx.size() < 2) {
    rep.flags["weak"] = false;
    return rep;
  }
  LineFit weak = fit_line(lx, ly);
  rep.fit["slope"] = weak.slope;
  rep.fit["log_K"] = weak.intercept;
  rep.fit["K"] = std::exp(weak.intercept);
  rep.fit["beta"] = weak.slope;
  rep.fit["residual"] = weak.residual;
  rep.flags["weak"] = weak.slope <= length + tolerance;

  if (spec.rank() >= 2) {
    // log d + 2 pi y_min ~ c + beta log y_min + gamma log y_1
    const auto m = static_cast<Eigen::Index>(lx.size());
    Eigen::MatrixXd a(m, 3);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = lmin[static_cast<std::size_t>(i)];
      a(i, 2) = lx[static_cast<std::size_t>(i)];
      b(i) = ly[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    rep.fit["log_K_strong"] = c(0);
    rep.fit["beta_min"] = c(1);
    rep.fit["prefactor_exponent"] = c(2);
    if (mode == MetricMode::twisted || unipotent_type(spec)) rep.flags["strong"] = c(2) < tolerance;
  }
  return rep;
}

ScanReport rel_compact_scan(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const SL2Data& sl2,
                            const std::vector<std::vector<double>>& grid, const std::vector<double>& x, bool twist,
                            double eta) {
  for (const auto& y : grid) {
    if (y.size() != spec.rank()) throw HodgeError("dimension-mismatch", "grid point dimension");
    if (!in_region(y)) throw HodgeError("grid-outside-region", "grid points need y_1 >= ... >= y_r >= 1");
  }
  check_lnf(spec, lnf);
  check_sl2(sl2, spec.W());
  ScanReport rep;
  rep.command = "rel-compact-scan";
  rep.points.resize(grid.size());
  std::vector<DecFiltration> values(grid.size());
  Matrix shift = exp_nilpotent(-real_shift(spec, x));
  parallel_for(grid.size(), [&](std::size_t i) {
    ScanPoint& pt = rep.points[i];
    pt.y = grid[i];
    pt.x = x;
    DecFiltration f = lnf_eval(spec, lnf, point_of(x, pt.y)).transformed(shift);
    if (twist) f = f.transformed(grading_t_inverse(sl2, pt.y));
    values[i] = f;
    auto v = validate_instance(spec.base.with_F(f));
    pt.status = to_string(v.status);
    pt.value = positivity_margin(spec.base.with_F(f));
  });
  bool in_m = true;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.points) {
    in_m = in_m && pt.status == to_string(Membership::in_M);
    margin = std::min(margin, pt.value);
  }
  double chart = 0;
  bool charted = true;
  if (!values.empty() && rep.points.front().status == to_string(Membership::in_M)) {
    GPMHSInstance ref = spec.base.with_F(values.front());
    for (const auto& v : values) {
      try {
        chart = std::max(chart, frobenius(chart_log(ref, v)));
      } catch (const HodgeError&) {
        charted = false;
      }
    }
  } else {
    charted = false;
  }
  rep.fit["margin_min"] = grid.empty() ? 0.0 : margin;
  rep.fit["chart_max"] = chart;
  rep.fit["eta"] = eta;
  rep.flags["in_M"] = in_m;
  rep.flags["margin"] = grid.empty() || (eta > 0 ? margin >= eta : margin > 0);
  rep.flags["chart_bounded"] = charted;
  rep.alpha = membership_threshold(spec, lnf);
  return rep;
}

std::optional<double> membership_threshold(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, double upper,
                                           double resolution) {
  auto member = [&](double a) {
    Point z(spec.rank(), Complex(Rational(0), rational_from_double(a)));
    try {
      return orbit_membership(spec, lnf_eval(spec, lnf, z)) == Membership::in_M;
    } catch (const HodgeError&) {
      return false;
    }
  };
  if (!member(upper)) return std::nullopt;
  double lo = 0, hi = upper;
  if (member(lo)) return 0.0;
  while (hi - lo > resolution) {
    double mid = 0.5 * (lo + hi);
    (member(mid) ? hi : lo) = mid;
  }
  return hi;
}

double p_function_bound(const NilpotentOrbitSpec& spec, const SL2Data& sl2, const std::vector<std::vector<double>>& ys) {
  double best = 0;
  for (const auto& y : ys) {
    Point z(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) z[j] = Complex(Rational(0), rational_from_double(y[j]));
    Matrix a = grading_t_inverse(sl2, y) * exp_nilpotent(spec.N_of(z)) * grading_t(sl2, y);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) best = std::max(best, std::abs(a(i, j).to_double()));
  }
  return best;
}

}  // namespace hodge
