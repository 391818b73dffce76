#pragma once

#include "hodge/linalg.hpp"

#include <map>
#include <vector>

namespace hodge {

/// Subspace of C^n stored as the rows of its reduced row echelon basis.
/// The representation is canonical, so equality is entrywise comparison.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n);
  static Subspace span(std::span<const Vector> vectors, std::size_t n);
  static Subspace span(std::initializer_list<Vector> vectors, std::size_t n);
  /// Span of coordinate vectors e_i for the listed indices.
  static Subspace coordinate(std::size_t n, std::initializer_list<std::size_t> idx);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  /// Rows of the canonical basis.
  const Matrix& basis_matrix() const { return basis_; }
  std::vector<Vector> basis() const;

  bool contains(const Vector& v) const;
  bool contains(const Subspace& s) const;

  Subspace conj() const;
  bool is_real() const { return conj() == *this; }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  /// Vectors extending this subspace's basis to a basis of `outer`
  /// (chosen greedily from outer's canonical basis).
  std::vector<Vector> complement_in(const Subspace& outer) const;

 private:
  std::size_t ambient_ = 0;
  Matrix basis_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);
Subspace operator+(const Subspace& a, const Subspace& b);
/// g(S).
Subspace image(const Matrix& g, const Subspace& s);
Subspace image(const Matrix& g);
Subspace kernel(const Matrix& g);
/// {v : g v in s}.
Subspace preimage(const Matrix& g, const Subspace& s);
/// Orthogonal complement for the standard hermitian form sum conj(a_i) b_i.
Subspace hermitian_complement(const Subspace& s);
/// {a : sum a_i v_i = 0 for all v in s}, as row vectors.
Subspace annihilator(const Subspace& s);
/// True if the listed subspaces form a direct sum decomposition of C^n.
bool is_direct_sum(std::span<const Subspace> parts, std::size_t n);
/// Coordinates of v in the given (independent) basis; nullopt if v is not in the span.
std::optional<Vector> coordinates(std::span<const Vector> basis, const Vector& v);

/// Increasing filtration W with W_{k_min-1} = 0 and W_{k_max} = V.
class IncFiltration {
 public:
  IncFiltration() = default;
  /// levels[i] is W_{k_min + i}; the last level must be the whole space.
  IncFiltration(int k_min, std::vector<Subspace> levels);
  static IncFiltration trivial(std::size_t n, int weight);

  std::size_t ambient_dim() const { return ambient_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_min_ + static_cast<int>(levels_.size()) - 1; }
  Subspace at(int k) const;
  Subspace operator[](int k) const { return at(k); }

  /// Weights k with W_k != W_{k-1}.
  std::vector<int> jumps() const;
  /// min{k : W_k = V} - max{k : W_k = 0}.
  int length() const;
  bool is_real() const;
  IncFiltration transformed(const Matrix& g) const;
  IncFiltration shifted(int m) const;  // W[m]_k = W_{k+m}

  friend bool operator==(const IncFiltration& a, const IncFiltration& b);

 private:
  void normalize();
  std::size_t ambient_ = 0;
  int k_min_ = 0;
  std::vector<Subspace> levels_;
};

/// Decreasing filtration F with F^{p_min} = V and F^{p_max+1} = 0.
class DecFiltration {
 public:
  DecFiltration() = default;
  /// levels[i] is F^{p_min + i}.
  DecFiltration(int p_min, std::vector<Subspace> levels);
  static DecFiltration trivial(std::size_t n, int p);

  std::size_t ambient_dim() const { return ambient_; }
  int p_min() const { return p_min_; }
  int p_max() const { return p_min_ + static_cast<int>(levels_.size()) - 1; }
  Subspace at(int p) const;
  Subspace operator[](int p) const { return at(p); }

  DecFiltration conj() const;
  DecFiltration transformed(const Matrix& g) const;

  friend bool operator==(const DecFiltration& a, const DecFiltration& b);
  friend bool operator!=(const DecFiltration& a, const DecFiltration& b) { return !(a == b); }

 private:
  void normalize();
  std::size_t ambient_ = 0;
  int p_min_ = 0;
  std::vector<Subspace> levels_;
};

/// Coordinates on Gr^W_k = W_k / W_{k-1} through an explicit lift basis.
class GradedPiece {
 public:
  GradedPiece() = default;
  /// `lift` must consist of vectors of W_k projecting to a basis of Gr^W_k.
  GradedPiece(const IncFiltration& w, int k, std::vector<Vector> lift);
  /// Auto-selected lift (pivot complement of W_{k-1} in W_k).
  static GradedPiece automatic(const IncFiltration& w, int k);

  int weight() const { return k_; }
  std::size_t dim() const { return lift_.size(); }
  const std::vector<Vector>& lift() const { return lift_; }
  /// Coordinates of v in W_k modulo W_{k-1}; throws if v is not in W_k.
  Vector project(const Vector& v) const;
  /// Image of S cap W_k in Gr^W_k, as a subspace of C^{dim}.
  Subspace project(const Subspace& s) const;
  /// Matrix of the induced action of a W-preserving operator.
  Matrix induced(const Matrix& x) const;

 private:
  int k_ = 0;
  std::vector<Vector> lift_;
  Matrix solver_;  // inverse of [lift | W_{k-1} basis]
  std::size_t lower_dim_ = 0;
  Subspace wk_;
};

/// F^p(Gr^W_k): image of F^p cap W_k in W_k/W_{k-1}, in the piece's coordinates.
DecFiltration induced_graded_filtration(const DecFiltration& f, const GradedPiece& piece);
DecFiltration induced_graded_filtration(const DecFiltration& f, const IncFiltration& w, int k);

}  // namespace hodge
