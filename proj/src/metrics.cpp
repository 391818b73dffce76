#include "hodge/metrics.hpp"

#include <cmath>
#include <set>

namespace hodge {

namespace {

Complex bilinear(const Vector& a, const Matrix& q, const Vector& b) {
  Complex s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero() && !q(i, j).is_zero()) s += a[i] * q(i, j) * b[j];
  }
  return s;
}

Matrix build_gram(const GPMHSInstance& inst, const Bigrading& b) {
  const std::size_t n = b.ambient_dim();
  const Matrix& basis = b.adapted_basis();
  const auto& types = b.basis_types();
  std::map<int, GradedPiece> pieces;
  std::vector<Vector> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    int w = types[i].first + types[i].second;
    auto it = pieces.find(w);
    if (it == pieces.end()) it = pieces.emplace(w, inst.piece(w)).first;
    c[i] = it->second.project(basis.col(i));
  }
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (types[i] != types[j]) continue;
      int w = types[i].first + types[i].second;
      g(i, j) = ipow(types[i].first - types[i].second) * bilinear(c[i], inst.polarizations.at(w).form, conj(c[j]));
    }
  const Matrix& inv = b.adapted_basis_inverse();
  return inv.transpose() * g * inv.conj();
}

bool positive_definite(const Matrix& g) {
  for (std::size_t k = 1; k <= g.rows(); ++k) {
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = g(i, j);
    Complex d = determinant(m);
    if (!d.is_real() || sgn(d.re()) <= 0) return false;
  }
  return true;
}

MetricContext make_context(const GPMHSInstance& inst, Bigrading b) {
  MetricContext ctx;
  ctx.inst = inst;
  ctx.gram = build_gram(inst, b);
  ctx.bigrading = std::move(b);
  if (!positive_definite(ctx.gram)) throw HodgeError("not-in-M", "mixed Hodge metric is not positive definite");
  return ctx;
}

// Context at a point reached along a path from a validated base point.
MetricContext unchecked_context(const GPMHSInstance& inst) {
  Bigrading b;
  try {
    b = deligne_bigrading(inst.F, inst.W);
  } catch (const HodgeError& e) {
    if (e.kind() == "not-an-mhs") throw HodgeError("not-in-M", "path leaves the mixed Hodge locus");
    throw;
  }
  return make_context(inst, std::move(b));
}

std::vector<int> weight_levels(const Bigrading& b) {
  std::set<int> ks;
  for (const auto& t : b.basis_types()) ks.insert(t.first + t.second);
  return {ks.begin(), ks.end()};
}

}  // namespace

Complex MetricContext::h(const Vector& u, const Vector& v) const { return bilinear(u, gram, conj(v)); }

Rational MetricContext::norm2(const Vector& v) const { return h(v, v).re(); }

Matrix MetricContext::adjoint(const Matrix& a) const {
  Matrix hc = gram.conj();
  return inverse(hc) * a.adjoint() * hc;
}

Rational MetricContext::endo_norm2(const Matrix& a) const { return (a * adjoint(a)).trace().re(); }

MetricContext hodge_metric(const GPMHSInstance& inst) {
  auto v = validate_instance(inst);
  if (v.status != Membership::in_M) throw HodgeError("not-in-M", "instance is not a point of M: " + v.failed);
  return make_context(inst, deligne_bigrading(inst.F, inst.W));
}

MetricContext twisted_metric(const GPMHSInstance& inst, TwistSource source) {
  MetricContext ctx = hodge_metric(inst);
  ctx.tau = tau(ctx, source);
  ctx.mode = MetricMode::twisted;
  ctx.source = source;
  return ctx;
}

double vector_norm(const Vector& v, const MetricContext& ctx) {
  if (ctx.mode == MetricMode::standard) return std::sqrt(ctx.norm2(v).get_d());
  double s = 0;
  for (int k : weight_levels(ctx.bigrading)) {
    Vector vk = ctx.bigrading.weight_projector(k) * v;
    s += std::pow(ctx.tau, k) * ctx.norm2(vk).get_d();
  }
  return std::sqrt(s);
}

double endo_norm(const Matrix& a, const MetricContext& ctx) {
  if (ctx.mode == MetricMode::standard) return std::sqrt(ctx.endo_norm2(a).get_d());
  // In a unitary basis for the twisted metric the (k, l) block picks up tau^{(k-l)/2}.
  auto ks = weight_levels(ctx.bigrading);
  std::vector<Matrix> proj;
  for (int k : ks) proj.push_back(ctx.bigrading.weight_projector(k));
  double s = 0;
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (std::size_t j = 0; j < ks.size(); ++j) {
      Matrix blk = proj[i] * a * proj[j];
      if (blk.is_zero()) continue;
      s += std::pow(ctx.tau, ks[i] - ks[j]) * ctx.endo_norm2(blk).get_d();
    }
  return std::sqrt(s);
}

double tau(const MetricContext& ctx, TwistSource source) {
  Matrix s = source == TwistSource::delta ? delta_operator(ctx.inst.F, ctx.inst.W) : sl2_splitting(ctx.inst).epsilon;
  long double t = 1;
  for (const auto& [pq, part] : ctx.bigrading.components(s)) {
    const auto [p, q] = pq;
    if (p >= 0 || q >= 0) continue;
    long double n2 = ctx.endo_norm2(part).get_d();
    t += std::pow(n2, -1.0L / static_cast<long double>(p + q));
  }
  return static_cast<double>(t);
}

double tau(const GPMHSInstance& inst, TwistSource source) { return tau(hodge_metric(inst), source); }

double twisted_norm(const Vector& v, const GPMHSInstance& inst) {
  return vector_norm(v, twisted_metric(inst, TwistSource::delta));
}

Matrix chart_log(const GPMHSInstance& f1, const DecFiltration& f2) {
  const std::size_t n = f1.dim;
  if (f2.ambient_dim() != n) throw HodgeError("dimension-mismatch", "chart_log");
  Bigrading b = deligne_bigrading(f1.F, f1.W);
  const auto& types = b.basis_types();
  const Matrix& basis = b.adapted_basis();
  const Matrix& inv = b.adapted_basis_inverse();
  DecFiltration g2 = f2.transformed(inv);

  std::set<int, std::greater<>> ps;
  for (const auto& t : types) ps.insert(t.first);
  Matrix u_mat = Matrix::identity(n);
  for (int p : ps) {
    std::vector<std::size_t> block;
    std::vector<Vector> lower;
    std::size_t above = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (types[i].first <= p) lower.push_back(unit_vector(n, i));
      if (types[i].first == p) block.push_back(i);
      if (types[i].first >= p) ++above;
    }
    Subspace fp = g2.at(p);
    if (fp.dim() != above) throw HodgeError("out-of-chart", "Hodge numbers of the two filtrations differ");
    Subspace sp = subspace_intersect(fp, Subspace::span(std::span<const Vector>(lower), n));
    auto sb = sp.basis();
    if (sb.size() != block.size()) throw HodgeError("out-of-chart", "target is not in the chart of the base point");
    Matrix proj(block.size(), block.size());
    for (std::size_t j = 0; j < sb.size(); ++j)
      for (std::size_t i = 0; i < block.size(); ++i) proj(i, j) = sb[j][block[i]];
    if (determinant(proj).is_zero()) throw HodgeError("out-of-chart", "target is not in the chart of the base point");
    Matrix pinv = inverse(proj);
    for (std::size_t c = 0; c < block.size(); ++c) {
      Vector col(n);
      for (std::size_t j = 0; j < sb.size(); ++j)
        if (!pinv(j, c).is_zero()) col = col + pinv(j, c) * sb[j];
      for (std::size_t r = 0; r < n; ++r) u_mat(r, block[c]) = col[r];
    }
  }
  Matrix u = basis * log_unipotent(u_mat) * inv;
  if (f1.F.transformed(exp_nilpotent(u)) != f2) throw HodgeError("out-of-chart", "target is not in the chart of the base point");
  return u;
}

double distance_surrogate(const GPMHSInstance& f1, const DecFiltration& f2, MetricMode mode, TwistSource source,
                          int panels) {
  if (panels < 2 || panels % 2 != 0) throw HodgeError("invalid-argument", "Simpson rule needs an even panel count");
  hodge_metric(f1);
  Matrix u = chart_log(f1, f2);
  if (u.is_zero()) return 0.0;
  auto integrand = [&](int k) {
    Matrix g = exp_nilpotent(Complex(Rational(k, panels)) * u);
    MetricContext ctx = unchecked_context(f1.with_F(f1.F.transformed(g)));
    if (mode == MetricMode::twisted) {
      ctx.tau = tau(ctx, source);
      ctx.mode = MetricMode::twisted;
    }
    Matrix uq(f1.dim, f1.dim);
    for (const auto& [ab, part] : ctx.bigrading.components(u))
      if (ab.first < 0) uq += part;
    return endo_norm(uq, ctx);
  };
  double s = 0;
  for (int k = 0; k <= panels; ++k) {
    double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += w * integrand(k);
  }
  return s / (3.0 * panels);
}

}  // namespace hodge
