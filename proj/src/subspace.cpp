#include "hodge/subspace.hpp"

#include <algorithm>

namespace hodge {

namespace {

Matrix canonical_rows(const Matrix& rows) {
  Echelon e = rref(rows);
  Matrix out(e.rank(), rows.cols());
  for (std::size_t r = 0; r < e.rank(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c) out(r, c) = e.reduced(r, c);
  return out;
}

void require_same(const Subspace& a, const Subspace& b, const char* what) {
  if (a.ambient_dim() != b.ambient_dim()) throw HodgeError("dimension-mismatch", what);
}

}  // namespace

Subspace Subspace::full(std::size_t n) {
  Subspace s(n);
  s.basis_ = Matrix::identity(n);
  return s;
}

Subspace Subspace::span(std::span<const Vector> vectors, std::size_t n) {
  Subspace s(n);
  if (vectors.empty()) return s;
  s.basis_ = canonical_rows(Matrix::from_rows(vectors, n));
  return s;
}

Subspace Subspace::span(std::initializer_list<Vector> vectors, std::size_t n) {
  std::vector<Vector> v(vectors);
  return span(std::span<const Vector>(v), n);
}

Subspace Subspace::coordinate(std::size_t n, std::initializer_list<std::size_t> idx) {
  std::vector<Vector> v;
  for (auto i : idx) v.push_back(unit_vector(n, i));
  return span(std::span<const Vector>(v), n);
}

std::vector<Vector> Subspace::basis() const {
  std::vector<Vector> out;
  for (std::size_t r = 0; r < basis_.rows(); ++r) out.push_back(basis_.row(r));
  return out;
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw HodgeError("dimension-mismatch", "subspace membership");
  if (hodge::is_zero(v)) return true;
  // Reduce v against the echelon basis; each row's pivot is its first nonzero entry.
  Vector r = v;
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    std::size_t piv = 0;
    while (basis_(i, piv).is_zero()) ++piv;
    const Complex f = r[piv];
    if (f.is_zero()) continue;
    for (std::size_t c = 0; c < ambient_; ++c)
      if (!basis_(i, c).is_zero()) r[c] -= f * basis_(i, c);
  }
  return hodge::is_zero(r);
}

bool Subspace::contains(const Subspace& s) const {
  require_same(*this, s, "subspace containment");
  if (s.dim() > dim()) return false;
  for (std::size_t r = 0; r < s.basis_.rows(); ++r)
    if (!contains(s.basis_.row(r))) return false;
  return true;
}

Subspace Subspace::conj() const {
  Subspace s(ambient_);
  if (dim() == 0) return s;
  s.basis_ = canonical_rows(basis_.conj());
  return s;
}

std::vector<Vector> Subspace::complement_in(const Subspace& outer) const {
  require_same(*this, outer, "complement");
  std::vector<Vector> out;
  Subspace acc = *this;
  for (const auto& v : outer.basis()) {
    if (acc.contains(v)) continue;
    out.push_back(v);
    acc = acc + Subspace::span({v}, ambient_);
  }
  if (acc != outer) throw HodgeError("not-contained", "subspace is not contained in the outer space");
  return out;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same(a, b, "subspace sum");
  if (a.dim() == 0) return b;
  if (b.dim() == 0) return a;
  std::vector<Vector> rows = a.basis();
  for (auto& v : b.basis()) rows.push_back(std::move(v));
  return Subspace::span(std::span<const Vector>(rows), a.ambient_dim());
}

Subspace operator+(const Subspace& a, const Subspace& b) { return subspace_sum(a, b); }

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  require_same(a, b, "subspace intersection");
  std::size_t n = a.ambient_dim();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(n);
  if (a.is_full()) return b;
  if (b.is_full()) return a;
  // x = sum alpha_i a_i = sum beta_j b_j  <=>  [A^T | -B^T](alpha,beta) = 0.
  std::size_t ka = a.dim(), kb = b.dim();
  Matrix m(n, ka + kb);
  for (std::size_t i = 0; i < ka; ++i)
    for (std::size_t r = 0; r < n; ++r) m(r, i) = a.basis_matrix()(i, r);
  for (std::size_t j = 0; j < kb; ++j)
    for (std::size_t r = 0; r < n; ++r) m(r, ka + j) = -b.basis_matrix()(j, r);
  std::vector<Vector> vecs;
  for (const auto& sol : nullspace(m)) {
    Vector x(n);
    for (std::size_t i = 0; i < ka; ++i) {
      if (sol[i].is_zero()) continue;
      for (std::size_t r = 0; r < n; ++r) x[r] += sol[i] * a.basis_matrix()(i, r);
    }
    vecs.push_back(std::move(x));
  }
  return Subspace::span(std::span<const Vector>(vecs), n);
}

Subspace image(const Matrix& g, const Subspace& s) {
  if (g.cols() != s.ambient_dim()) throw HodgeError("dimension-mismatch", "image");
  std::vector<Vector> vecs;
  for (const auto& v : s.basis()) vecs.push_back(g * v);
  return Subspace::span(std::span<const Vector>(vecs), g.rows());
}

Subspace image(const Matrix& g) { return image(g, Subspace::full(g.cols())); }

Subspace kernel(const Matrix& g) {
  auto ns = nullspace(g);
  return Subspace::span(std::span<const Vector>(ns), g.cols());
}

Subspace preimage(const Matrix& g, const Subspace& s) {
  if (g.rows() != s.ambient_dim()) throw HodgeError("dimension-mismatch", "preimage");
  // v with g v in s  <=>  P g v = 0 where rows of P span the annihilator of s.
  Subspace ann_bilinear = annihilator(s);
  if (ann_bilinear.dim() == 0) return Subspace::full(g.cols());
  Matrix p = ann_bilinear.basis_matrix() * g;
  return kernel(p);
}

Subspace annihilator(const Subspace& s) { return hermitian_complement(s.conj()); }

Subspace hermitian_complement(const Subspace& s) {
  // {v : sum conj(b_i) v_i = 0 for every basis row b}.
  if (s.dim() == 0) return Subspace::full(s.ambient_dim());
  return kernel(s.basis_matrix().conj());
}

bool is_direct_sum(std::span<const Subspace> parts, std::size_t n) {
  std::size_t total = 0;
  Subspace acc(n);
  for (const auto& p : parts) {
    total += p.dim();
    acc = acc + p;
  }
  return total == n && acc.is_full();
}

std::optional<Vector> coordinates(std::span<const Vector> basis, const Vector& v) {
  if (basis.empty()) {
    if (is_zero(v)) return Vector{};
    return std::nullopt;
  }
  Matrix m = Matrix::from_columns(basis, v.size());
  auto sol = solve(m, v);
  return sol;
}

// ---------------------------------------------------------------- filtrations

IncFiltration::IncFiltration(int k_min, std::vector<Subspace> levels)
    : k_min_(k_min), levels_(std::move(levels)) {
  if (levels_.empty()) throw HodgeError("bad-filtration", "increasing filtration needs at least one level");
  ambient_ = levels_.front().ambient_dim();
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].ambient_dim() != ambient_) throw HodgeError("dimension-mismatch", "filtration levels");
    if (i > 0 && !levels_[i].contains(levels_[i - 1]))
      throw HodgeError("bad-filtration", "W_k not contained in W_{k+1} at k=" + std::to_string(k_min_ + i - 1));
  }
  if (!levels_.back().is_full()) throw HodgeError("bad-filtration", "top level of W must be the whole space");
  normalize();
}

IncFiltration IncFiltration::trivial(std::size_t n, int weight) {
  return IncFiltration(weight, {Subspace::full(n)});
}

void IncFiltration::normalize() {
  while (levels_.size() > 1 && levels_.front().is_zero()) {
    levels_.erase(levels_.begin());
    ++k_min_;
  }
  while (levels_.size() > 1 && levels_[levels_.size() - 2].is_full()) levels_.pop_back();
}

Subspace IncFiltration::at(int k) const {
  if (k < k_min_) return Subspace(ambient_);
  if (k >= k_max()) return Subspace::full(ambient_);
  return levels_[static_cast<std::size_t>(k - k_min_)];
}

std::vector<int> IncFiltration::jumps() const {
  std::vector<int> out;
  for (int k = k_min_; k <= k_max(); ++k)
    if (at(k).dim() != at(k - 1).dim()) out.push_back(k);
  return out;
}

int IncFiltration::length() const {
  // min{k : W_k = V} - max{k : W_k = 0}
  if (ambient_ == 0) return 0;
  return k_max() - (k_min_ - 1);
}

bool IncFiltration::is_real() const {
  return std::all_of(levels_.begin(), levels_.end(), [](const Subspace& s) { return s.is_real(); });
}

IncFiltration IncFiltration::transformed(const Matrix& g) const {
  std::vector<Subspace> lv;
  for (const auto& s : levels_) lv.push_back(image(g, s));
  return IncFiltration(k_min_, std::move(lv));
}

IncFiltration IncFiltration::shifted(int m) const { return IncFiltration(k_min_ - m, levels_); }

bool operator==(const IncFiltration& a, const IncFiltration& b) {
  return a.ambient_ == b.ambient_ && a.k_min_ == b.k_min_ && a.levels_ == b.levels_;
}

DecFiltration::DecFiltration(int p_min, std::vector<Subspace> levels)
    : p_min_(p_min), levels_(std::move(levels)) {
  if (levels_.empty()) throw HodgeError("bad-filtration", "decreasing filtration needs at least one level");
  ambient_ = levels_.front().ambient_dim();
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].ambient_dim() != ambient_) throw HodgeError("dimension-mismatch", "filtration levels");
    if (i > 0 && !levels_[i - 1].contains(levels_[i]))
      throw HodgeError("bad-filtration", "F^{p+1} not contained in F^p at p=" + std::to_string(p_min_ + i - 1));
  }
  if (!levels_.front().is_full()) throw HodgeError("bad-filtration", "lowest level of F must be the whole space");
  normalize();
}

DecFiltration DecFiltration::trivial(std::size_t n, int p) { return DecFiltration(p, {Subspace::full(n)}); }

void DecFiltration::normalize() {
  while (levels_.size() > 1 && levels_[1].is_full()) {
    levels_.erase(levels_.begin());
    ++p_min_;
  }
  while (levels_.size() > 1 && levels_.back().is_zero()) levels_.pop_back();
}

Subspace DecFiltration::at(int p) const {
  if (p <= p_min_) return Subspace::full(ambient_);
  if (p > p_max()) return Subspace(ambient_);
  return levels_[static_cast<std::size_t>(p - p_min_)];
}

DecFiltration DecFiltration::conj() const {
  std::vector<Subspace> lv;
  for (const auto& s : levels_) lv.push_back(s.conj());
  return DecFiltration(p_min_, std::move(lv));
}

DecFiltration DecFiltration::transformed(const Matrix& g) const {
  std::vector<Subspace> lv;
  for (const auto& s : levels_) lv.push_back(image(g, s));
  return DecFiltration(p_min_, std::move(lv));
}

bool operator==(const DecFiltration& a, const DecFiltration& b) {
  return a.ambient_ == b.ambient_ && a.p_min_ == b.p_min_ && a.levels_ == b.levels_;
}

// ------------------------------------------------------------- graded pieces

GradedPiece::GradedPiece(const IncFiltration& w, int k, std::vector<Vector> lift) : k_(k), lift_(std::move(lift)) {
  std::size_t n = w.ambient_dim();
  wk_ = w.at(k);
  Subspace lower = w.at(k - 1);
  lower_dim_ = lower.dim();
  if (lift_.size() + lower_dim_ != wk_.dim())
    throw HodgeError("bad-lift", "lift basis of Gr^W_" + std::to_string(k) + " has wrong size");
  std::vector<Vector> cols = lift_;
  for (const auto& v : lift_)
    if (!wk_.contains(v)) throw HodgeError("bad-lift", "lift vector not in W_" + std::to_string(k));
  for (auto& v : lower.basis()) cols.push_back(std::move(v));
  if (cols.empty()) return;
  Matrix m = Matrix::from_columns(cols, n);
  // Left inverse through an invertible row subset.
  Echelon et = rref(m.transpose());
  if (et.rank() != cols.size())
    throw HodgeError("bad-lift", "lift vectors do not project to a basis of Gr^W_" + std::to_string(k));
  Matrix sub(cols.size(), cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = m(et.pivots[i], j);
  Matrix sub_inv = inverse(sub);
  solver_ = Matrix(cols.size(), n);
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) solver_(i, et.pivots[j]) = sub_inv(i, j);
}

GradedPiece GradedPiece::automatic(const IncFiltration& w, int k) {
  return GradedPiece(w, k, w.at(k - 1).complement_in(w.at(k)));
}

Vector GradedPiece::project(const Vector& v) const {
  if (!wk_.contains(v)) throw HodgeError("not-in-weight", "vector not in W_" + std::to_string(k_));
  Vector out(lift_.size());
  if (lift_.empty()) return out;
  Vector full = solver_ * v;
  for (std::size_t i = 0; i < lift_.size(); ++i) out[i] = full[i];
  return out;
}

Subspace GradedPiece::project(const Subspace& s) const {
  Subspace inter = subspace_intersect(s, wk_);
  std::vector<Vector> vecs;
  for (const auto& v : inter.basis()) vecs.push_back(project(v));
  return Subspace::span(std::span<const Vector>(vecs), lift_.size());
}

Matrix GradedPiece::induced(const Matrix& x) const {
  Matrix m(lift_.size(), lift_.size());
  for (std::size_t j = 0; j < lift_.size(); ++j) {
    Vector c = project(x * lift_[j]);
    for (std::size_t i = 0; i < lift_.size(); ++i) m(i, j) = c[i];
  }
  return m;
}

DecFiltration induced_graded_filtration(const DecFiltration& f, const GradedPiece& piece) {
  std::vector<Subspace> lv;
  for (int p = f.p_min(); p <= f.p_max() + 1; ++p) lv.push_back(piece.project(f.at(p)));
  if (piece.dim() == 0) return DecFiltration(f.p_min(), {Subspace(0)});
  return DecFiltration(f.p_min(), std::move(lv));
}

DecFiltration induced_graded_filtration(const DecFiltration& f, const IncFiltration& w, int k) {
  if (f.ambient_dim() != w.ambient_dim()) throw HodgeError("dimension-mismatch", "induced filtration");
  return induced_graded_filtration(f, GradedPiece::automatic(w, k));
}

}  // namespace hodge
