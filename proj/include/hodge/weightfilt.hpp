#pragma once

#include "hodge/mhs.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hodge {

/// W(N) centered at `center`: N M_l ⊆ M_{l-2} and N^l : Gr_{c+l} ≅ Gr_{c-l}.
IncFiltration monodromy_weight_filtration(const Matrix& n, int center);

/// True if M satisfies the two defining properties of W(N) centered at `center`.
bool is_monodromy_weight_filtration(const Matrix& n, const IncFiltration& m, int center);

/// Relative weight filtration M(N, W); throws HodgeError("does-not-exist") if the
/// inductive lift fails, which means the pair is not admissible.
IncFiltration relative_weight_filtration(const Matrix& n, const IncFiltration& w);
std::optional<IncFiltration> try_relative_weight_filtration(const Matrix& n, const IncFiltration& w);

/// True if M is the relative weight filtration of (N, W): N lowers M by 2 and M induces
/// W(Gr_k N)[-k] on every Gr^W_k.
bool is_relative_weight_filtration(const Matrix& n, const IncFiltration& w, const IncFiltration& m);

/// Commuting real nilpotents N_1..N_r together with the limit data. `base.F` is F_infinity,
/// `base.W` the weight filtration, and the polarizations / Hodge numbers describe Gr^W of
/// the orbit points.
struct NilpotentOrbitSpec {
  std::vector<Matrix> N;
  GPMHSInstance base;
  std::optional<int> pure_weight;

  std::size_t dim() const { return base.dim; }
  std::size_t rank() const { return N.size(); }
  const DecFiltration& F_inf() const { return base.F; }
  const IncFiltration& W() const { return base.W; }
  Matrix N_sum() const;
  /// sum_j c_j N_j.
  Matrix N_of(const std::vector<Complex>& c) const;
};

struct AdmissibilityReport {
  std::vector<std::pair<std::string, bool>> clauses;
  std::string first_failed;
  std::optional<IncFiltration> M;
  std::optional<Bigrading> limit_bigrading;
  bool ok() const { return first_failed.empty(); }
};

/// Clauses: preconditions (real, nilpotent, W-preserving), commute, horizontal,
/// relative-weight-filtration, limit-mhs, morphism.
AdmissibilityReport check_admissible_orbit(const NilpotentOrbitSpec& spec);

}  // namespace hodge
