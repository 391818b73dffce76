#include "hodge/limits.hpp"

#include "hodge/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hodge {

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::pure: return "pure";
    case LimitKind::mixed: return "mixed";
    case LimitKind::satake: return "satake";
  }
  return "?";
}

std::string to_string(SequenceMode m) {
  switch (m) {
    case SequenceMode::direct: return "direct";
    case SequenceMode::hat: return "hat";
    case SequenceMode::tilde: return "tilde";
  }
  return "?";
}

namespace {

Complex minus_i() { return Complex(Rational(0), Rational(-1)); }

bool nilpotent(const Matrix& n) { return power(n, static_cast<unsigned>(n.rows())).is_zero(); }

// Filtration whose level p is the sum of the parts with level >= p.
DecFiltration from_levels(std::size_t n, const std::vector<std::pair<int, Subspace>>& parts) {
  if (parts.empty()) return DecFiltration::trivial(n, 0);
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& [l, s] : parts) {
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  std::vector<Subspace> levels;
  for (int p = lo; p <= hi; ++p) {
    Subspace acc(n);
    for (const auto& [l, s] : parts)
      if (l >= p) acc = acc + s;
    levels.push_back(acc);
  }
  return DecFiltration(lo, std::move(levels));
}

Eigen::MatrixXcd columns_of(const Subspace& s) {
  const auto b = s.basis();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(s.ambient_dim()), static_cast<Eigen::Index>(b.size()));
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < s.ambient_dim(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b[j][i].to_double();
  return m;
}

struct LevelDistance {
  double value = 0;
  bool fallback = false;
};

LevelDistance level_distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return {std::numeric_limits<double>::infinity(), false};
  const auto n = static_cast<Eigen::Index>(a.ambient_dim());
  const auto d = static_cast<Eigen::Index>(a.dim());
  if (d == 0 || d == n) return {0, false};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(columns_of(a));
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd qa = q.leftCols(d), qc = q.rightCols(n - d);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qrb(columns_of(b));
  Eigen::MatrixXcd gb = (qrb.householderQ() * Eigen::MatrixXcd::Identity(n, n)).leftCols(d);
  Eigen::MatrixXcd p = qa.adjoint() * gb;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svp(p);
  const auto& sv = svp.singularValues();
  if (sv(d - 1) < 1e-8) {  // orthonormal bases: singular values are cosines of the principal angles
    Eigen::MatrixXcd diff = qa * qa.adjoint() - gb * gb.adjoint();
    return {Eigen::JacobiSVD<Eigen::MatrixXcd>(diff).singularValues()(0), true};
  }
  Eigen::MatrixXcd graph = (qc.adjoint() * gb) * p.inverse();
  return {Eigen::JacobiSVD<Eigen::MatrixXcd>(graph).singularValues()(0), false};
}

// Polynomial in t with matrix or vector coefficients, indexed by degree.
using PolyMatrix = std::vector<Matrix>;
using PolyVector = std::vector<Vector>;

PolyMatrix poly_mul(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t n = a.front().rows();
  PolyMatrix out(a.size() + b.size() - 1, Matrix(n, n));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// e^{i t^a N} as a polynomial in t.
PolyMatrix exp_poly(const Matrix& n, int a) {
  const std::size_t dim = n.rows();
  PolyMatrix out(1, Matrix::identity(dim));
  Matrix term = Matrix::identity(dim);
  for (unsigned k = 1; k <= dim; ++k) {
    term = Complex(Rational(1, k)) * (Complex::i() * (term * n));
    if (term.is_zero()) break;
    const std::size_t deg = static_cast<std::size_t>(a) * k;
    if (out.size() <= deg) out.resize(deg + 1, Matrix(dim, dim));
    out[deg] += term;
  }
  return out;
}

int degree(const PolyVector& v) {
  for (std::size_t d = v.size(); d-- > 0;)
    if (!is_zero(v[d])) return static_cast<int>(d);
  return -1;
}

// Limit as t -> infinity of the span of the polynomial vectors: reduce until the leading
// coefficients are independent.
Subspace leading_span(std::vector<PolyVector> vs, std::size_t n) {
  for (;;) {
    std::vector<Vector> leads;
    std::vector<int> degs;
    for (const auto& v : vs) {
      int d = degree(v);
      if (d < 0) throw HodgeError("invalid-argument", "dependent vectors in limit computation");
      degs.push_back(d);
      leads.push_back(v[static_cast<std::size_t>(d)]);
    }
    Subspace rel = kernel(Matrix::from_columns(leads, n));
    if (rel.is_zero()) return Subspace::span(std::span<const Vector>(leads), n);
    Vector c = rel.basis().front();
    std::size_t top = 0;
    int best = -1;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero() && degs[i] > best) {
        best = degs[i];
        top = i;
      }
    PolyVector repl(static_cast<std::size_t>(best) + 1, Vector(n));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i].is_zero()) continue;
      const auto shift = static_cast<std::size_t>(best - degs[i]);
      for (std::size_t d = 0; d < vs[i].size() && d + shift < repl.size(); ++d)
        for (std::size_t r = 0; r < n; ++r) repl[d + shift][r] += c[i] * vs[i][d][r];
    }
    vs[top] = std::move(repl);
  }
}

}  // namespace

ReducedLimit reduced_limit_pure(const std::vector<Matrix>& cone, const DecFiltration& f, int k) {
  if (cone.empty()) throw HodgeError("not-a-nilpotent-orbit", "empty cone");
  const std::size_t n = f.ambient_dim();
  Matrix sum(n, n);
  for (std::size_t j = 0; j < cone.size(); ++j) {
    const Matrix& nj = cone[j];
    if (nj.rows() != n || !nj.square()) throw HodgeError("dimension-mismatch", "cone generator");
    if (!nilpotent(nj)) throw HodgeError("not-a-nilpotent-orbit", "N_" + std::to_string(j + 1) + " is not nilpotent");
    for (std::size_t l = 0; l < j; ++l)
      if (!commutator(nj, cone[l]).is_zero()) throw HodgeError("not-a-nilpotent-orbit", "cone generators do not commute");
    for (int p = f.p_min() + 1; p <= f.p_max(); ++p)
      if (!f.at(p - 1).contains(image(nj, f.at(p))))
        throw HodgeError("not-a-nilpotent-orbit", "N_" + std::to_string(j + 1) + " is not horizontal");
    sum += nj;
  }
  IncFiltration m = monodromy_weight_filtration(sum, k);
  Matrix delta;
  try {
    delta = delta_operator(f, m);
  } catch (const HodgeError& e) {
    throw HodgeError("not-a-nilpotent-orbit", std::string("limit is not a mixed Hodge structure: ") + e.what());
  }
  DecFiltration hat = f.transformed(exp_nilpotent(minus_i() * delta));
  return {naive_limit(sum, hat, k), LimitKind::pure};
}

DecFiltration split_limit(const NilpotentOrbitSpec& spec) {
  auto adm = check_admissible_orbit(spec);
  if (!adm.ok()) throw HodgeError("not-admissible", "orbit fails clause " + adm.first_failed);
  const DecFiltration f = spec.F_inf();
  if (adm.limit_bigrading->is_r_split()) return f;
  if (weight_span(*adm.M) > 2) throw HodgeError("unsupported-length", "limit splitting needs weight span <= 2");
  return f.transformed(exp_nilpotent(minus_i() * delta_operator(f, *adm.M)));
}

ReducedLimit reduced_limit_mixed(const NilpotentOrbitSpec& spec, const Matrix& y0) {
  const std::size_t n = spec.dim();
  if (y0.rows() != n || !y0.square()) throw HodgeError("dimension-mismatch", "Y0");
  try {
    check_sl2({{}, y0}, spec.W());
  } catch (const HodgeError& e) {
    throw HodgeError("y0-incompatible", e.what());
  }
  DecFiltration hat = split_limit(spec);
  auto adm = check_admissible_orbit(spec);
  Bigrading b = deligne_bigrading(hat, *adm.M);
  const IncFiltration& w = spec.W();
  std::vector<std::pair<int, Subspace>> eig;
  for (int k = w.k_min(); k <= w.k_max(); ++k) {
    Subspace e = kernel(y0 - Complex(k) * Matrix::identity(n));
    if (!e.is_zero()) eig.emplace_back(k, e);
  }
  std::vector<std::pair<int, Subspace>> parts;
  for (const auto& [rs, piece] : b.pieces()) {
    std::size_t covered = 0;
    for (const auto& [k, e] : eig) {
      Subspace cap = subspace_intersect(piece, e);
      covered += cap.dim();
      if (!cap.is_zero()) parts.emplace_back(k - rs.second, cap);
    }
    if (covered != piece.dim())
      throw HodgeError("y0-incompatible", "Y0 does not preserve I^{" + std::to_string(rs.first) + "," + std::to_string(rs.second) + "}");
  }
  return {from_levels(n, parts), LimitKind::mixed};
}

SatakeResult satake_map(const std::vector<Matrix>& cone, const DecFiltration& f) {
  const std::size_t n = f.ambient_dim();
  Matrix sum(n, n);
  bool trivial = true;
  for (const auto& a : cone) {
    if (a.rows() != n || !a.square()) throw HodgeError("dimension-mismatch", "cone generator");
    for (const auto& b : cone)
      if (!(a * b).is_zero()) throw HodgeError("not-even-type", "N^2 != 0 on the cone");
    sum += a;
    trivial = trivial && a.is_zero();
  }
  IncFiltration w = monodromy_weight_filtration(sum, -1);
  Bigrading bg;
  try {
    bg = deligne_bigrading(f, w);
  } catch (const HodgeError& e) {
    throw HodgeError("not-a-nilpotent-orbit", std::string("limit is not a mixed Hodge structure: ") + e.what());
  }
  Subspace psi = w.at(-2), tilde(n);
  for (const auto& [pq, piece] : bg.pieces()) {
    if (piece.is_zero()) continue;
    const bool even = pq.first % 2 == 0;
    if (pq.first + pq.second == -1) {
      // with sigma = {0} this is the quotient map itself, defined without the parity condition
      if (!even && !trivial) throw HodgeError("not-even-type", "I^{p,-1-p} != 0 for odd p = " + std::to_string(pq.first));
      if (even) {
        psi = psi + piece;
        tilde = tilde + piece;
      }
    }
    if (pq.first + pq.second == 0) tilde = tilde + piece;
  }
  SatakeResult out;
  out.Psi = {DecFiltration(-1, {Subspace::full(n), psi}), LimitKind::satake};
  out.tilde_F = DecFiltration(-1, {Subspace::full(n), tilde});
  out.invariant = true;
  for (const auto& a : cone) out.invariant = out.invariant && psi.contains(image(a, psi));
  out.in_boundary = subspace_intersect(psi, psi.conj()) == w.at(-2);
  return out;
}

DecFiltration path_limit(const std::vector<Matrix>& n, const DecFiltration& f, const std::vector<int>& exponents,
                         const std::vector<Complex>& x) {
  if (n.size() != exponents.size()) throw HodgeError("dimension-mismatch", "one exponent per nilpotent");
  if (!x.empty() && x.size() != n.size()) throw HodgeError("dimension-mismatch", "one x per nilpotent");
  const std::size_t dim = f.ambient_dim();
  Matrix shift = Matrix::identity(dim);
  PolyMatrix e(1, Matrix::identity(dim));
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (exponents[j] < 1) throw HodgeError("invalid-argument", "exponents must be positive");
    e = poly_mul(e, exp_poly(n[j], exponents[j]));
    if (!x.empty()) shift = shift * exp_nilpotent(x[j] * n[j]);
  }
  std::vector<Subspace> levels;
  for (int p = f.p_min(); p <= f.p_max(); ++p) {
    std::vector<PolyVector> vs;
    for (const auto& u : f.at(p).basis()) {
      Vector su = shift * u;
      PolyVector pv;
      for (const auto& c : e) pv.push_back(c * su);
      vs.push_back(std::move(pv));
    }
    levels.push_back(vs.empty() ? Subspace(dim) : leading_span(std::move(vs), dim));
  }
  return DecFiltration(f.p_min(), std::move(levels));
}

ChartDistance filtration_distance(const DecFiltration& phi, const DecFiltration& g) {
  if (phi.ambient_dim() != g.ambient_dim()) throw HodgeError("dimension-mismatch", "filtrations");
  ChartDistance out;
  for (int p = std::min(phi.p_min(), g.p_min()); p <= std::max(phi.p_max(), g.p_max()) + 1; ++p) {
    auto d = level_distance(phi.at(p), g.at(p));
    out.value = std::max(out.value, d.value);
    out.fallback = out.fallback || d.fallback;
  }
  return out;
}

SequenceReport sequence_limit(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const std::vector<Point>& zs,
                              const DecFiltration& candidate, SequenceMode mode, double tolerance) {
  SequenceReport rep;
  rep.points.resize(zs.size());
  parallel_for(zs.size(), [&](std::size_t m) {
    const Point& z = zs[m];
    DecFiltration f = lnf_eval(spec, lnf, z);
    if (mode != SequenceMode::direct) f = sl2_splitting(spec.base.with_F(f)).hat.F;
    if (mode == SequenceMode::tilde) {
      std::vector<Complex> x;
      for (const auto& c : z) x.emplace_back(c.re());
      f = f.transformed(exp_nilpotent(-spec.N_of(x)));
    }
    auto d = filtration_distance(candidate, f);
    rep.points[m] = {z, d.value, d.fallback};
  });
  if (rep.points.empty()) return rep;
  const std::size_t tail = std::min<std::size_t>(3, rep.points.size());
  rep.monotone_tail = true;
  for (std::size_t m = rep.points.size() - tail + 1; m < rep.points.size(); ++m)
    rep.monotone_tail = rep.monotone_tail && rep.points[m].distance <= rep.points[m - 1].distance + 1e-15;
  rep.converged = rep.monotone_tail && rep.points.back().distance < tolerance;
  return rep;
}

SL2Sequence sl2_sequence_decompose(const std::vector<std::vector<double>>& ys, std::size_t d) {
  if (ys.size() < 4) throw HodgeError("not-classified", "need at least four samples");
  const std::size_t r = ys.front().size();
  for (const auto& y : ys)
    if (y.size() != r) throw HodgeError("dimension-mismatch", "samples");
  if (d == 0 || d > r) throw HodgeError("not-classified", "rank must lie in 1..r");
  const std::size_t count = ys.size(), start = count / 2;
  double scale = 1;
  for (double v : ys.back()) scale = std::max(scale, std::abs(v));

  // ordered pivot tuples, last rows first
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> rows(r);
  std::iota(rows.rbegin(), rows.rend(), 0);
  std::vector<std::size_t> cur;
  std::vector<bool> used(r, false);
  auto gen = [&](auto&& self) -> void {
    if (cur.size() == d) {
      tuples.push_back(cur);
      return;
    }
    for (std::size_t i : rows) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(i);
      self(self);
      cur.pop_back();
      used[i] = false;
    }
  };
  gen(gen);

  double best_residual = std::numeric_limits<double>::infinity();
  for (const auto& piv : tuples) {
    // v_j = y_{p_j}; divergence pattern over the tail
    bool ok = true;
    for (std::size_t m = start; m < count && ok; ++m) {
      for (std::size_t j = 0; j < d; ++j) ok = ok && ys[m][piv[j]] > 0;
      if (!ok || m == start) continue;
      for (std::size_t j = 0; j + 1 < d; ++j)
        ok = ok && ys[m][piv[j]] / ys[m][piv[j + 1]] > ys[m - 1][piv[j]] / ys[m - 1][piv[j + 1]];
      ok = ok && ys[m][piv[d - 1]] > ys[m - 1][piv[d - 1]];
    }
    if (!ok) continue;
    SL2Sequence out;
    out.pivots = piv;
    out.T.assign(r, std::vector<double>(d, 0));
    out.b_limit.assign(r, 0);
    for (std::size_t j = 0; j < d; ++j) out.T[piv[j]][j] = 1;
    const auto tail = static_cast<Eigen::Index>(count - start);
    Eigen::MatrixXd a(tail, static_cast<Eigen::Index>(d + 1));
    for (std::size_t m = start; m < count; ++m) {
      for (std::size_t j = 0; j < d; ++j) a(static_cast<Eigen::Index>(m - start), static_cast<Eigen::Index>(j)) = ys[m][piv[j]];
      a(static_cast<Eigen::Index>(m - start), static_cast<Eigen::Index>(d)) = 1;
    }
    auto solver = a.colPivHouseholderQr();
    for (std::size_t i = 0; i < r; ++i) {
      if (std::find(piv.begin(), piv.end(), i) != piv.end()) continue;
      Eigen::VectorXd rhs(tail);
      for (std::size_t m = start; m < count; ++m) rhs(static_cast<Eigen::Index>(m - start)) = ys[m][i];
      Eigen::VectorXd c = solver.solve(rhs);
      for (std::size_t j = 0; j < d; ++j) out.T[i][j] = c(static_cast<Eigen::Index>(j));
      out.b_limit[i] = c(static_cast<Eigen::Index>(d));
    }
    for (const auto& y : ys) {
      std::vector<double> v(d), b(r);
      for (std::size_t j = 0; j < d; ++j) v[j] = y[piv[j]];
      for (std::size_t i = 0; i < r; ++i) {
        b[i] = y[i];
        for (std::size_t j = 0; j < d; ++j) b[i] -= out.T[i][j] * v[j];
      }
      out.v.push_back(std::move(v));
      out.b.push_back(std::move(b));
    }
    for (std::size_t m = start; m < count; ++m)
      for (std::size_t i = 0; i < r; ++i)
        out.residual = std::max(out.residual, std::abs(out.b[m][i] - out.b_limit[i]) / scale);
    best_residual = std::min(best_residual, out.residual);
    if (out.residual < 1e-6) return out;
  }
  throw HodgeError("not-classified", std::isfinite(best_residual)
                                         ? "best fit residual " + std::to_string(best_residual) + " of scale"
                                         : "no pivot set shows the divergence pattern");
}

}  // namespace hodge
