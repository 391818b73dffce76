#include "hodge/weightfilt.hpp"

#include <algorithm>

namespace hodge {

namespace {

int nilpotency_index(const Matrix& n) {
  Matrix p = Matrix::identity(n.rows());
  for (std::size_t k = 0; k <= n.rows(); ++k) {
    if (p.is_zero()) return static_cast<int>(k);
    p = p * n;
  }
  throw HodgeError("not-nilpotent", "operator is not nilpotent");
}

// Vectors tagged with a weight; M_l is the span of those with weight <= l.
struct Generators {
  std::size_t n = 0;
  std::vector<std::pair<Vector, int>> items;

  Subspace at(int l) const {
    std::vector<Vector> vs;
    for (const auto& [v, w] : items)
      if (w <= l) vs.push_back(v);
    return Subspace::span(std::span<const Vector>(vs), n);
  }

  IncFiltration filtration() const {
    if (items.empty()) return IncFiltration::trivial(n, 0);
    int lo = items.front().second, hi = lo;
    for (const auto& [v, w] : items) {
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    std::vector<Subspace> levels;
    for (int l = lo; l <= hi; ++l) levels.push_back(at(l));
    return IncFiltration(lo, std::move(levels));
  }
};

}  // namespace

IncFiltration monodromy_weight_filtration(const Matrix& n, int center) {
  if (!n.square()) throw HodgeError("dimension-mismatch", "monodromy weight filtration");
  const std::size_t dim = n.rows();
  int m = nilpotency_index(n);
  if (dim == 0) return IncFiltration::trivial(0, center);
  // W_l = sum_{j >= max(0,-l)} N^j ker N^{l+2j+1}, for l in [-(m-1), m-1].
  int top = std::max(m - 1, 0);
  std::vector<Matrix> powers{Matrix::identity(dim)};
  for (int k = 1; k <= 3 * m + 2; ++k) powers.push_back(powers.back() * n);
  auto pw = [&](int k) -> const Matrix& { return powers[static_cast<std::size_t>(std::min(k, 3 * m + 2))]; };
  std::vector<Subspace> levels;
  for (int l = -top - 1; l <= top; ++l) {
    Subspace acc(dim);
    for (int j = std::max(0, -l); j < m; ++j) {
      int e = l + 2 * j + 1;
      if (e <= 0) continue;
      acc = acc + image(pw(j), kernel(pw(e)));
    }
    levels.push_back(acc);
  }
  IncFiltration out(-top - 1 + center, std::move(levels));
  if (!is_monodromy_weight_filtration(n, out, center))
    throw HodgeError("internal", "monodromy weight filtration fails its axioms");
  return out;
}

bool is_monodromy_weight_filtration(const Matrix& n, const IncFiltration& m, int center) {
  const std::size_t dim = n.rows();
  if (m.ambient_dim() != dim) return false;
  for (int l = m.k_min(); l <= m.k_max() + 2; ++l)
    if (!m.at(l - 2).contains(image(n, m.at(l)))) return false;
  int reach = std::max(std::abs(m.k_min() - 1 - center), std::abs(m.k_max() - center)) + 1;
  Matrix nl = Matrix::identity(dim);
  for (int l = 0; l <= reach; ++l) {
    // N^l maps Gr_{c+l} onto Gr_{c-l} and the two have equal dimension.
    int up = center + l, down = center - l;
    std::size_t gu = m.at(up).dim() - m.at(up - 1).dim();
    std::size_t gd = m.at(down).dim() - m.at(down - 1).dim();
    if (gu != gd) return false;
    if (m.at(down - 1) + image(nl, m.at(up)) != m.at(down)) return false;
    nl = nl * n;
  }
  return true;
}

std::optional<IncFiltration> try_relative_weight_filtration(const Matrix& n, const IncFiltration& w) {
  const std::size_t dim = n.rows();
  if (w.ambient_dim() != dim) throw HodgeError("dimension-mismatch", "relative weight filtration");
  nilpotency_index(n);
  for (int k = w.k_min(); k <= w.k_max(); ++k)
    if (!w.at(k).contains(image(n, w.at(k)))) throw HodgeError("not-w-preserving", "N does not preserve W");

  Generators gens{dim, {}};
  Subspace u(dim);
  for (int k : w.jumps()) {
    auto piece = GradedPiece::automatic(w, k);
    const std::size_t d = piece.dim();
    Matrix nq = piece.induced(n);
    IncFiltration mu = monodromy_weight_filtration(nq, k);
    std::vector<Matrix> qpow{Matrix::identity(d)};
    for (std::size_t a = 1; a <= d; ++a) qpow.push_back(qpow.back() * nq);
    std::vector<Vector> u_basis = u.basis();
    Matrix ub = u_basis.empty() ? Matrix(dim, 0) : Matrix::from_columns(u_basis, dim);

    for (int a = static_cast<int>(d) - 1; a >= 0; --a) {
      Subspace cand = subspace_intersect(kernel(qpow[static_cast<std::size_t>(a + 1)]), mu.at(k + a));
      Subspace acc = mu.at(k + a - 1) + image(nq, mu.at(k + a + 2));
      Matrix na = power(n, static_cast<unsigned>(a + 1));
      Subspace target = gens.at(k - a - 2);
      Subspace ann = annihilator(target);
      for (const auto& p : cand.basis()) {
        if (acc.contains(p)) continue;
        acc = acc + Subspace::span({p}, d);
        Vector v0(dim);
        for (std::size_t i = 0; i < d; ++i)
          if (!p[i].is_zero()) v0 = v0 + p[i] * piece.lift()[i];
        // Find u in U with N^{a+1}(v0 + u) in M'_{k-a-2}.
        Vector v = v0;
        if (ann.dim() > 0) {
          Matrix pa = ann.basis_matrix() * na;
          Vector rhs = Complex(-1) * (pa * v0);
          if (!hodge::is_zero(rhs)) {
            if (ub.cols() == 0) return std::nullopt;
            auto c = solve(pa * ub, rhs);
            if (!c) return std::nullopt;
            v = v0 + ub * *c;
          }
        }
        Vector nj = v;
        for (int j = 0; j <= a; ++j) {
          gens.items.emplace_back(nj, k + a - 2 * j);
          nj = n * nj;
        }
      }
    }
    u = w.at(k);
  }
  IncFiltration m = gens.filtration();
  if (!is_relative_weight_filtration(n, w, m))
    throw HodgeError("internal", "constructed relative weight filtration fails its axioms");
  return m;
}

IncFiltration relative_weight_filtration(const Matrix& n, const IncFiltration& w) {
  auto m = try_relative_weight_filtration(n, w);
  if (!m) throw HodgeError("does-not-exist", "relative weight filtration M(N,W) does not exist");
  return *m;
}

bool is_relative_weight_filtration(const Matrix& n, const IncFiltration& w, const IncFiltration& m) {
  for (int l = m.k_min(); l <= m.k_max() + 2; ++l)
    if (!m.at(l - 2).contains(image(n, m.at(l)))) return false;
  for (int k : w.jumps()) {
    auto piece = GradedPiece::automatic(w, k);
    IncFiltration mu = monodromy_weight_filtration(piece.induced(n), k);
    for (int l = std::min(mu.k_min(), m.k_min()) - 1; l <= std::max(mu.k_max(), m.k_max()); ++l)
      if (piece.project(m.at(l)) != mu.at(l)) return false;
  }
  return true;
}

Matrix NilpotentOrbitSpec::N_sum() const {
  Matrix s = Matrix::zero(dim());
  for (const auto& x : N) s += x;
  return s;
}

Matrix NilpotentOrbitSpec::N_of(const std::vector<Complex>& c) const {
  if (c.size() != N.size()) throw HodgeError("dimension-mismatch", "number of variables");
  Matrix s = Matrix::zero(dim());
  for (std::size_t j = 0; j < N.size(); ++j)
    if (!c[j].is_zero()) s += c[j] * N[j];
  return s;
}

AdmissibilityReport check_admissible_orbit(const NilpotentOrbitSpec& spec) {
  AdmissibilityReport r;
  auto clause = [&](const std::string& name, bool ok) {
    r.clauses.emplace_back(name, ok);
    if (!ok && r.first_failed.empty()) r.first_failed = name;
    return ok;
  };
  const auto& w = spec.W();
  bool pre = true;
  for (const auto& x : spec.N) {
    pre = pre && x.rows() == spec.dim() && x.square() && x.is_real() && is_nilpotent(x) &&
          preserves_filtration(x, w);
  }
  if (!clause("preconditions", pre)) return r;

  bool commute = true;
  for (std::size_t i = 0; i < spec.N.size(); ++i)
    for (std::size_t j = i + 1; j < spec.N.size(); ++j)
      commute = commute && commutator(spec.N[i], spec.N[j]).is_zero();
  if (!clause("commute", commute)) return r;

  const auto& f = spec.F_inf();
  bool horizontal = true;
  for (const auto& x : spec.N)
    for (int p = f.p_min(); p <= f.p_max(); ++p)
      horizontal = horizontal && f.at(p - 1).contains(image(x, f.at(p)));
  clause("horizontal", horizontal);

  try {
    r.M = try_relative_weight_filtration(spec.N_sum(), w);
  } catch (const HodgeError&) {
    r.M.reset();
  }
  if (!clause("relative-weight-filtration", r.M.has_value())) return r;

  bool mhs = is_mhs(f, *r.M);
  if (mhs) {
    try {
      r.limit_bigrading = deligne_bigrading(f, *r.M);
    } catch (const HodgeError&) {
      mhs = false;
    }
  }
  if (!clause("limit-mhs", mhs)) return r;

  bool morph = true;
  for (const auto& x : spec.N)
    for (const auto& [d, m] : r.limit_bigrading->components(x)) morph = morph && d == HodgeType{-1, -1};
  clause("morphism", morph);
  return r;
}

}  // namespace hodge
