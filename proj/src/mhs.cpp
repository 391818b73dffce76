#include "hodge/mhs.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace hodge {

namespace {

Complex bilinear(const Vector& u, const Matrix& s, const Vector& v) {
  Complex acc;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j].is_zero() || s(i, j).is_zero()) continue;
      acc += u[i] * s(i, j) * v[j];
    }
  }
  return acc;
}

std::string type_str(int p, int q) {
  std::ostringstream os;
  os << "(" << p << "," << q << ")";
  return os.str();
}

// Pure-HS check on one graded piece: F^p + conj F^{w-p+1} = Gr is direct for all p.
bool graded_piece_is_hs(const DecFiltration& f, const GradedPiece& piece, int w) {
  if (piece.dim() == 0) return true;
  int lo = std::min(f.p_min(), w - f.p_max() - 1);
  int hi = std::max(f.p_max() + 1, w - f.p_min() + 1);
  for (int p = lo; p <= hi; ++p) {
    Subspace a = piece.project(f.at(p));
    Subspace b = piece.project(f.at(w - p + 1)).conj();
    if (a.dim() + b.dim() != piece.dim() || !subspace_intersect(a, b).is_zero()) return false;
  }
  return true;
}

}  // namespace

Complex ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Complex(1);
    case 1: return Complex::i();
    case 2: return Complex(-1);
    default: return Complex(0) - Complex::i();
  }
}

GPMHSInstance GPMHSInstance::with_F(DecFiltration f) const {
  GPMHSInstance out = *this;
  out.F = std::move(f);
  return out;
}

GradedPiece GPMHSInstance::piece(int w) const {
  auto it = polarizations.find(w);
  if (it == polarizations.end()) return GradedPiece::automatic(W, w);
  return GradedPiece(W, w, it->second.lift);
}

std::map<HodgeType, int> hodge_numbers_of(const DecFiltration& f, const IncFiltration& w) {
  std::map<HodgeType, int> h;
  for (int k : w.jumps()) {
    auto piece = GradedPiece::automatic(w, k);
    auto g = induced_graded_filtration(f, piece);
    for (int p = g.p_min(); p <= g.p_max(); ++p) {
      int d = static_cast<int>(g.at(p).dim()) - static_cast<int>(g.at(p + 1).dim());
      if (d > 0) h[{p, k - p}] = d;
    }
  }
  return h;
}

bool is_mhs(const DecFiltration& f, const IncFiltration& w) {
  for (int k : w.jumps())
    if (!graded_piece_is_hs(f, GradedPiece::automatic(w, k), k)) return false;
  return true;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::in_M: return "in_M";
    case Membership::in_compact_dual_only: return "in_compact_dual_only";
    default: return "invalid";
  }
}

Validation validate_instance(const GPMHSInstance& inst) {
  Validation v;
  auto fail = [&](Membership status, const std::string& what) {
    if (v.failed.empty()) {
      v.status = status;
      v.failed = what;
    }
    v.diagnostics.push_back(what);
  };
  const std::size_t n = inst.dim;
  if (inst.W.ambient_dim() != n || inst.F.ambient_dim() != n) {
    fail(Membership::invalid, "dimension-mismatch");
    return v;
  }
  if (!inst.W.is_real()) {
    fail(Membership::invalid, "weight-filtration-not-real");
    return v;
  }

  // Polarizations.
  std::map<int, GradedPiece> pieces;
  for (int w : inst.weights()) {
    auto it = inst.polarizations.find(w);
    if (it == inst.polarizations.end()) {
      fail(Membership::invalid, "polarization-missing:" + std::to_string(w));
      return v;
    }
    const Polarization& pol = it->second;
    for (const auto& x : pol.lift)
      if (x.size() != n || !is_real(x)) {
        fail(Membership::invalid, "polarization-lift-not-real:" + std::to_string(w));
        return v;
      }
    try {
      pieces.emplace(w, GradedPiece(inst.W, w, pol.lift));
    } catch (const HodgeError& e) {
      fail(Membership::invalid, "polarization-lift:" + std::to_string(w));
      return v;
    }
    std::size_t d = pol.lift.size();
    if (pol.form.rows() != d || pol.form.cols() != d) {
      fail(Membership::invalid, "polarization-form-size:" + std::to_string(w));
      return v;
    }
    if (!pol.form.is_real()) {
      fail(Membership::invalid, "polarization-form-not-real:" + std::to_string(w));
      return v;
    }
    Matrix expected = (w % 2 == 0) ? pol.form : -pol.form;
    if (pol.form.transpose() != expected) {
      fail(Membership::invalid, "polarization-form-symmetry:" + std::to_string(w));
      return v;
    }
    if (determinant(pol.form).is_zero()) {
      fail(Membership::invalid, "polarization-form-degenerate:" + std::to_string(w));
      return v;
    }
  }
  for (const auto& [w, pol] : inst.polarizations)
    if (!pieces.count(w) && !pol.lift.empty()) {
      fail(Membership::invalid, "polarization-extra:" + std::to_string(w));
      return v;
    }

  // Hodge numbers.
  auto h = [&](int p, int q) {
    auto it = inst.hodge_numbers.find({p, q});
    return it == inst.hodge_numbers.end() ? 0 : it->second;
  };
  for (const auto& [pq, val] : inst.hodge_numbers) {
    if (val < 0) {
      fail(Membership::invalid, "hodge-numbers-negative:" + type_str(pq.first, pq.second));
      return v;
    }
    if (h(pq.second, pq.first) != val) {
      fail(Membership::invalid, "hodge-numbers-asymmetric:" + type_str(pq.first, pq.second));
      return v;
    }
    int w = pq.first + pq.second;
    if (val > 0 && !pieces.count(w)) {
      fail(Membership::invalid, "hodge-numbers-sum:" + std::to_string(w));
      return v;
    }
  }
  for (const auto& [w, piece] : pieces) {
    int total = 0;
    for (const auto& [pq, val] : inst.hodge_numbers)
      if (pq.first + pq.second == w) total += val;
    if (total != static_cast<int>(piece.dim())) {
      fail(Membership::invalid, "hodge-numbers-sum:" + std::to_string(w));
      return v;
    }
  }

  // Compact dual: graded dimensions and isotropy.
  for (const auto& [w, piece] : pieces) {
    const Matrix& s = inst.polarizations.at(w).form;
    for (const auto& [pq, val] : inst.hodge_numbers)
      if (pq.first + pq.second == w && val > 0 && (pq.first < inst.F.p_min() || pq.first > inst.F.p_max())) {
        fail(Membership::invalid, "compact-dual-dimension:" + std::to_string(w) + ":" + std::to_string(pq.first));
        return v;
      }
    for (int p = inst.F.p_min(); p <= inst.F.p_max(); ++p) {
      Subspace fp = piece.project(inst.F.at(p));
      Subspace fp1 = piece.project(inst.F.at(p + 1));
      if (static_cast<int>(fp.dim() - fp1.dim()) != h(p, w - p)) {
        fail(Membership::invalid, "compact-dual-dimension:" + std::to_string(w) + ":" + std::to_string(p));
        return v;
      }
      Subspace fq = piece.project(inst.F.at(w - p + 1));
      for (const auto& a : fp.basis())
        for (const auto& b : fq.basis())
          if (!bilinear(a, s, b).is_zero()) {
            fail(Membership::invalid, "compact-dual-orthogonality:" + std::to_string(w) + ":" + std::to_string(p));
            return v;
          }
    }
  }

  // Pure Hodge structures on Gr and positivity.
  v.mhs = true;
  for (const auto& [w, piece] : pieces)
    if (!graded_piece_is_hs(inst.F, piece, w)) {
      v.mhs = false;
      fail(Membership::in_compact_dual_only, "hodge-decomposition:" + std::to_string(w));
    }
  if (!v.mhs) return v;
  for (const auto& [w, piece] : pieces) {
    const Matrix& s = inst.polarizations.at(w).form;
    for (int p = inst.F.p_min(); p <= inst.F.p_max(); ++p) {
      int q = w - p;
      if (h(p, q) == 0) continue;
      Subspace hpq = subspace_intersect(piece.project(inst.F.at(p)), piece.project(inst.F.at(q)).conj());
      auto b = hpq.basis();
      std::size_t d = b.size();
      Matrix k(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) k(i, j) = ipow(p - q) * bilinear(b[i], s, conj(b[j]));
      bool ok = k.adjoint() == k;
      for (std::size_t m = 1; ok && m <= d; ++m) {
        Matrix lead(m, m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) lead(i, j) = k(i, j);
        Complex det = determinant(lead);
        ok = det.is_real() && sgn(det.re()) > 0;
      }
      if (!ok) fail(Membership::in_compact_dual_only, "positivity:" + type_str(p, q));
    }
  }
  if (v.failed.empty()) v.status = Membership::in_M;
  return v;
}

// ------------------------------------------------------------------ bigrading

Bigrading::Bigrading(std::size_t n, std::map<HodgeType, Subspace> pieces) : n_(n) {
  std::vector<Vector> cols;
  for (auto& [pq, s] : pieces) {
    if (s.ambient_dim() != n) throw HodgeError("dimension-mismatch", "bigrading piece");
    if (s.is_zero()) continue;
    for (auto& v : s.basis()) {
      cols.push_back(std::move(v));
      basis_types_.push_back(pq);
    }
    pieces_.emplace(pq, std::move(s));
  }
  if (cols.size() != n) throw HodgeError("not-an-mhs", "bigrading pieces do not have total dimension " + std::to_string(n));
  basis_ = n == 0 ? Matrix(0, 0) : Matrix::from_columns(cols, n);
  try {
    basis_inv_ = inverse(basis_);
  } catch (const HodgeError&) {
    throw HodgeError("not-an-mhs", "bigrading pieces are not independent");
  }
}

Subspace Bigrading::at(int p, int q) const {
  auto it = pieces_.find({p, q});
  return it == pieces_.end() ? Subspace(n_) : it->second;
}

std::vector<HodgeType> Bigrading::types() const {
  std::vector<HodgeType> t;
  for (const auto& [pq, s] : pieces_) t.push_back(pq);
  return t;
}

Matrix Bigrading::in_adapted(const Matrix& x) const { return basis_inv_ * x * basis_; }
Matrix Bigrading::from_adapted(const Matrix& x) const { return basis_ * x * basis_inv_; }

Matrix Bigrading::projector(int p, int q) const {
  Matrix e(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (basis_types_[i] == HodgeType{p, q}) e(i, i) = Complex(1);
  return from_adapted(e);
}

Matrix Bigrading::weight_projector(int k) const {
  Matrix e(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (basis_types_[i].first + basis_types_[i].second == k) e(i, i) = Complex(1);
  return from_adapted(e);
}

Matrix Bigrading::Y() const {
  Matrix e(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) e(i, i) = Complex(basis_types_[i].first + basis_types_[i].second);
  return from_adapted(e);
}

Matrix Bigrading::component(const Matrix& x, int a, int b) const {
  Matrix xa = in_adapted(x);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& ti = basis_types_[i];
      const auto& tj = basis_types_[j];
      if (ti.first - tj.first != a || ti.second - tj.second != b) xa(i, j) = Complex(0);
    }
  return from_adapted(xa);
}

std::map<HodgeType, Matrix> Bigrading::components(const Matrix& x) const {
  Matrix xa = in_adapted(x);
  std::map<HodgeType, Matrix> parts;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      if (xa(i, j).is_zero()) continue;
      HodgeType d{basis_types_[i].first - basis_types_[j].first, basis_types_[i].second - basis_types_[j].second};
      auto it = parts.try_emplace(d, n_, n_).first;
      it->second(i, j) = xa(i, j);
    }
  for (auto& [d, m] : parts) m = from_adapted(m);
  return parts;
}

Vector Bigrading::component(const Vector& v, int p, int q) const {
  Vector c = basis_inv_ * v;
  for (std::size_t i = 0; i < n_; ++i)
    if (basis_types_[i] != HodgeType{p, q}) c[i] = Complex(0);
  return basis_ * c;
}

std::map<HodgeType, Vector> Bigrading::components(const Vector& v) const {
  std::map<HodgeType, Vector> out;
  for (const auto& [pq, s] : pieces_) {
    Vector c = component(v, pq.first, pq.second);
    if (!hodge::is_zero(c)) out.emplace(pq, std::move(c));
  }
  return out;
}

bool Bigrading::in_lambda_minus(const Matrix& x) const {
  for (const auto& [d, m] : components(x))
    if (d.first >= 0 || d.second >= 0) return false;
  return true;
}

bool Bigrading::in_q(const Matrix& x) const {
  for (const auto& [d, m] : components(x))
    if (d.first >= 0) return false;
  return true;
}

bool Bigrading::preserves(const Matrix& x) const {
  for (const auto& [d, m] : components(x))
    if (d.first != 0 || d.second != 0) return false;
  return true;
}

bool Bigrading::is_r_split() const {
  for (const auto& [pq, s] : pieces_)
    if (s.conj() != at(pq.second, pq.first)) return false;
  return true;
}

Bigrading deligne_bigrading(const DecFiltration& f, const IncFiltration& w) {
  const std::size_t n = f.ambient_dim();
  if (w.ambient_dim() != n) throw HodgeError("dimension-mismatch", "bigrading");
  DecFiltration fbar = f.conj();
  std::map<HodgeType, Subspace> pieces;
  for (int p = f.p_min(); p <= f.p_max(); ++p)
    for (int q = f.p_min(); q <= f.p_max(); ++q) {
      int k = p + q;
      if (k < w.k_min() || k > w.k_max()) continue;
      Subspace wk = w.at(k);
      Subspace inner = subspace_intersect(fbar.at(q), wk);
      for (int j = 0; k - 2 - j >= w.k_min(); ++j)
        inner = inner + subspace_intersect(fbar.at(q - 1 - j), w.at(k - 2 - j));
      Subspace ipq = subspace_intersect(subspace_intersect(f.at(p), wk), inner);
      if (!ipq.is_zero()) pieces.emplace(HodgeType{p, q}, std::move(ipq));
    }
  Bigrading b(n, std::move(pieces));

  // (a) F^p = sum_{a >= p} I^{a,b}; (b) W_k = sum_{a+b <= k} I^{a,b}.
  for (int p = f.p_min(); p <= f.p_max() + 1; ++p) {
    Subspace acc(n);
    for (const auto& [pq, s] : b.pieces())
      if (pq.first >= p) acc = acc + s;
    if (acc != f.at(p)) throw HodgeError("not-an-mhs", "bigrading does not recover F^" + std::to_string(p));
  }
  for (int k = w.k_min(); k <= w.k_max(); ++k) {
    Subspace acc(n);
    for (const auto& [pq, s] : b.pieces())
      if (pq.first + pq.second <= k) acc = acc + s;
    if (acc != w.at(k)) throw HodgeError("not-an-mhs", "bigrading does not recover W_" + std::to_string(k));
  }
  // (c) I^{p,q} = conj I^{q,p} mod sum_{r<p, s<q} I^{r,s}.
  for (const auto& [pq, s] : b.pieces()) {
    Subspace lower(n);
    for (const auto& [rs, t] : b.pieces())
      if (rs.first < pq.first && rs.second < pq.second) lower = lower + t;
    Subspace other = b.at(pq.second, pq.first).conj();
    if (other.dim() != s.dim() || !(s + lower).contains(other))
      throw HodgeError("not-an-mhs", "conjugation condition fails at I^" + type_str(pq.first, pq.second));
  }
  return b;
}

Bigrading deligne_bigrading(const GPMHSInstance& inst) { return deligne_bigrading(inst.F, inst.W); }

Matrix grading_Y(const Bigrading& b) { return b.Y(); }

// ------------------------------------------------------------------ splittings

Matrix delta_operator(const DecFiltration& f, const IncFiltration& w) {
  Bigrading b = deligne_bigrading(f, w);
  const std::size_t n = b.ambient_dim();
  // g = sum_k conj(E_k) E_k is the unique W-unipotent element with g Y g^{-1} = conj(Y),
  // and g = exp(-2 i delta).
  Matrix g(n, n);
  std::vector<int> ks;
  for (const auto& [pq, s] : b.pieces()) ks.push_back(pq.first + pq.second);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (int k : ks) {
    Matrix e = b.weight_projector(k);
    g += e.conj() * e;
  }
  Matrix delta = (Complex(Rational(1, 2)) * Complex::i()) * log_unipotent(g);
  if (!delta.is_real()) throw HodgeError("delta-failed", "delta is not real");
  if (!b.in_lambda_minus(delta)) throw HodgeError("delta-failed", "delta is not in Lambda^{-1,-1}");
  return delta;
}

DeltaSplitting delta_splitting(const GPMHSInstance& inst) {
  DeltaSplitting out;
  out.delta = delta_operator(inst.F, inst.W);
  Matrix g = exp_nilpotent((Complex(0) - Complex::i()) * out.delta);
  out.split = inst.with_F(inst.F.transformed(g));
  if (!deligne_bigrading(out.split).is_r_split())
    throw HodgeError("delta-failed", "e^{-i delta}F is not split over R");
  return out;
}

int weight_span(const IncFiltration& w) {
  auto j = w.jumps();
  if (j.empty()) return 0;
  return j.back() - j.front();
}

SL2Splitting sl2_splitting(const GPMHSInstance& inst) {
  int span = weight_span(inst.W);
  if (span > 2)
    throw HodgeError("unsupported-length",
                     "sl2-splitting is implemented only when the weights span at most 2 (span is " +
                         std::to_string(span) + ")");
  auto ds = delta_splitting(inst);
  return {Complex::i() * ds.delta, ds.split};
}

bool is_r_split(const GPMHSInstance& inst) { return deligne_bigrading(inst).is_r_split(); }

bool preserves_filtration(const Matrix& x, const IncFiltration& w) {
  for (int k = w.k_min(); k < w.k_max(); ++k) {
    Subspace wk = w.at(k);
    for (const auto& v : wk.basis())
      if (!wk.contains(x * v)) return false;
  }
  return true;
}

namespace {

// Matrices X (as n*n coefficient vectors) in the span of `gens` satisfying a linear condition.
std::vector<Matrix> constrained_span(const std::vector<Matrix>& gens,
                                     const std::function<Vector(const Matrix&)>& condition) {
  if (gens.empty()) return {};
  std::vector<Vector> cols;
  for (const auto& g : gens) cols.push_back(condition(g));
  std::size_t rows = cols.front().size();
  if (rows == 0) return gens;
  Matrix m = Matrix::from_columns(cols, rows);
  std::vector<Matrix> out;
  for (const auto& c : nullspace(m)) {
    Matrix x(gens.front().rows(), gens.front().cols());
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (!c[i].is_zero()) x += c[i] * gens[i];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

std::vector<Matrix> lie_algebra_basis(const GPMHSInstance& inst) {
  const std::size_t n = inst.dim;
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gens.push_back(Matrix::elementary(n, i, j));
  // W-preservation: ann(W_k) X W_k = 0.
  std::vector<std::pair<Matrix, Matrix>> checks;
  for (int k = inst.W.k_min(); k < inst.W.k_max(); ++k) {
    Subspace wk = inst.W.at(k);
    if (wk.is_zero()) continue;
    Subspace ann = annihilator(wk);
    checks.emplace_back(ann.basis_matrix(), Matrix::from_columns(wk.basis(), n));
  }
  gens = constrained_span(gens, [&](const Matrix& x) {
    Vector out;
    for (const auto& [a, b] : checks) {
      Matrix m = a * x * b;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    }
    return out;
  });
  std::vector<std::pair<GradedPiece, Matrix>> pieces;
  for (int w : inst.weights()) pieces.emplace_back(inst.piece(w), inst.polarizations.at(w).form);
  return constrained_span(gens, [&](const Matrix& x) {
    Vector out;
    for (const auto& [piece, s] : pieces) {
      Matrix a = piece.induced(x);
      Matrix m = a.transpose() * s + s * a;
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    }
    return out;
  });
}

bool in_lie_algebra(const GPMHSInstance& inst, const Matrix& x) {
  if (!preserves_filtration(x, inst.W)) return false;
  for (int w : inst.weights()) {
    Matrix a = inst.piece(w).induced(x);
    const Matrix& s = inst.polarizations.at(w).form;
    if (!(a.transpose() * s + s * a).is_zero()) return false;
  }
  return true;
}

}  // namespace hodge
