#pragma once

#include "hodge/subspace.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hodge {

using HodgeType = std::pair<int, int>;

/// i^k for integer k.
Complex ipow(int k);

/// Polarization of Gr^W_w given on an explicit real lift basis.
struct Polarization {
  std::vector<Vector> lift;
  Matrix form;  // <lift_i, lift_j>_w, bilinear
};

/// Graded-polarized mixed Hodge structure data (F, W, Q_w, h^{p,q}).
struct GPMHSInstance {
  std::size_t dim = 0;
  IncFiltration W;
  DecFiltration F;
  std::map<HodgeType, int> hodge_numbers;
  std::map<int, Polarization> polarizations;

  /// Same data with the Hodge filtration replaced.
  GPMHSInstance with_F(DecFiltration f) const;
  /// Gr^W_w coordinates through the polarization's lift basis.
  GradedPiece piece(int w) const;
  /// Nonzero graded weights.
  std::vector<int> weights() const { return W.jumps(); }
};

/// h^{p,w-p} = dim F^p Gr_w - dim F^{p+1} Gr_w, read off from the filtrations.
std::map<HodgeType, int> hodge_numbers_of(const DecFiltration& f, const IncFiltration& w);

/// True if F induces a pure Hodge structure of weight w on every Gr^W_w.
bool is_mhs(const DecFiltration& f, const IncFiltration& w);

enum class Membership { in_M, in_compact_dual_only, invalid };
std::string to_string(Membership m);

struct Validation {
  Membership status = Membership::invalid;
  std::string failed;  // first failed condition, empty when in_M
  std::vector<std::string> diagnostics;
  bool mhs = false;  // (F, W) is a mixed Hodge structure
};

Validation validate_instance(const GPMHSInstance& inst);

/// Deligne decomposition V_C = sum I^{p,q}.
class Bigrading {
 public:
  Bigrading() = default;
  /// Throws not-an-mhs unless the pieces form a direct sum decomposition.
  Bigrading(std::size_t n, std::map<HodgeType, Subspace> pieces);

  std::size_t ambient_dim() const { return n_; }
  const std::map<HodgeType, Subspace>& pieces() const { return pieces_; }
  Subspace at(int p, int q) const;
  std::vector<HodgeType> types() const;

  /// Columns: concatenated bases of the pieces in type order.
  const Matrix& adapted_basis() const { return basis_; }
  const Matrix& adapted_basis_inverse() const { return basis_inv_; }
  /// Type of the i-th adapted basis vector.
  const std::vector<HodgeType>& basis_types() const { return basis_types_; }

  Matrix projector(int p, int q) const;
  /// Projector onto sum_{p+q=k} I^{p,q}.
  Matrix weight_projector(int k) const;
  Matrix Y() const;

  /// Component X^{a,b} = sum P_{p+a,q+b} X P_{p,q}.
  Matrix component(const Matrix& x, int a, int b) const;
  /// All nonzero components keyed by bidegree.
  std::map<HodgeType, Matrix> components(const Matrix& x) const;
  /// Component of v in I^{p,q}.
  Vector component(const Vector& v, int p, int q) const;
  std::map<HodgeType, Vector> components(const Vector& v) const;

  /// X lies in Lambda^{-1,-1} = sum_{a,b<0} g^{a,b}.
  bool in_lambda_minus(const Matrix& x) const;
  /// X lies in q = sum_{a<0} g^{a,b}.
  bool in_q(const Matrix& x) const;
  /// X preserves every I^{p,q}.
  bool preserves(const Matrix& x) const;

  bool is_r_split() const;

  friend bool operator==(const Bigrading& a, const Bigrading& b) { return a.pieces_ == b.pieces_; }

 private:
  Matrix in_adapted(const Matrix& x) const;
  Matrix from_adapted(const Matrix& x) const;

  std::size_t n_ = 0;
  std::map<HodgeType, Subspace> pieces_;
  Matrix basis_, basis_inv_;
  std::vector<HodgeType> basis_types_;
};

Bigrading deligne_bigrading(const DecFiltration& f, const IncFiltration& w);
Bigrading deligne_bigrading(const GPMHSInstance& inst);

/// Y_{(F,W)}: multiplication by p+q on I^{p,q}.
Matrix grading_Y(const Bigrading& b);

/// Deligne's delta for (F, W): real, in Lambda^{-1,-1}, with (e^{-i delta}F, W) split over R.
Matrix delta_operator(const DecFiltration& f, const IncFiltration& w);

struct DeltaSplitting {
  Matrix delta;
  GPMHSInstance split;
};
DeltaSplitting delta_splitting(const GPMHSInstance& inst);

/// Largest minus smallest nonzero weight.
int weight_span(const IncFiltration& w);

struct SL2Splitting {
  Matrix epsilon;
  GPMHSInstance hat;
};
/// Supported when the weights of W span at most 2 (where epsilon = i delta).
SL2Splitting sl2_splitting(const GPMHSInstance& inst);

bool is_r_split(const GPMHSInstance& inst);

/// Basis of g_C: W-preserving X acting on each Gr^W_w as an infinitesimal isometry of Q_w.
std::vector<Matrix> lie_algebra_basis(const GPMHSInstance& inst);
bool in_lie_algebra(const GPMHSInstance& inst, const Matrix& x);
/// W-preserving endomorphisms.
bool preserves_filtration(const Matrix& x, const IncFiltration& w);

}  // namespace hodge
