#pragma once

#include "hodge/orbits.hpp"

namespace hodge {

enum class LimitKind { pure, mixed, satake };
std::string to_string(LimitKind k);

struct ReducedLimit {
  DecFiltration Phi;
  LimitKind kind = LimitKind::pure;
};

/// Phi^p = sum_{s <= k - p} I^{r,s} of (e^{-i delta} F, W(N)[-k]), N the sum of the cone
/// generators. Throws not-a-nilpotent-orbit unless the N_j are commuting nilpotents, satisfy
/// N_j F^p in F^{p-1}, and (F, W(N)[-k]) is a mixed Hodge structure.
ReducedLimit reduced_limit_pure(const std::vector<Matrix>& cone, const DecFiltration& f, int k);

/// Phi^p = sum over k of sum_{s <= k - p} I^{r,s} cap E_k(Y0) for the split limit
/// (hat F_inf, M). Throws y0-incompatible unless Y0 grades W and preserves every I^{r,s}.
ReducedLimit reduced_limit_mixed(const NilpotentOrbitSpec& spec, const Matrix& y0);

/// The R-split limit used above: F_inf itself when split, else e^{-i delta} F_inf (weight span <= 2).
DecFiltration split_limit(const NilpotentOrbitSpec& spec);

struct SatakeResult {
  ReducedLimit Psi;      // Psi^0 = (sum_{p even} I^{p,-1-p}) + W_{-2}
  DecFiltration tilde_F;  // tilde F^0 = (sum_{p even} I^{p,-p-1}) + (sum_p I^{p,-p})
  bool invariant = false;  // e^N Psi = Psi for N in sigma_C
  bool in_boundary = false;  // Psi^0 cap conj(Psi^0) = W_{-2}
};

/// Satake boundary map for a weight -1 orbit of even type (N^2 = 0 on the cone and
/// I^{p,-1-p} = 0 for odd p). Throws not-even-type otherwise.
SatakeResult satake_map(const std::vector<Matrix>& cone, const DecFiltration& f);

/// Exact limit of e^{sum_j i t^{a_j} N_j} e^{N(x)} F as t -> infinity.
DecFiltration path_limit(const std::vector<Matrix>& n, const DecFiltration& f, const std::vector<int>& exponents,
                         const std::vector<Complex>& x = {});

/// Distance of g from the candidate filtration phi, read in the chart of phi: per level, the norm
/// of the map A: Phi^p -> (Phi^p)^perp whose graph is G^p. Falls back to the projector
/// difference when the graph map does not exist. Infinite when the dimensions differ.
struct ChartDistance {
  double value = 0;
  bool fallback = false;
};
ChartDistance filtration_distance(const DecFiltration& phi, const DecFiltration& g);

enum class SequenceMode { direct, hat, tilde };
std::string to_string(SequenceMode m);

struct SequencePoint {
  Point z;
  double distance = 0;
  bool fallback = false;
};

struct SequenceReport {
  std::vector<SequencePoint> points;
  bool monotone_tail = false;
  bool converged = false;  // final distance < tolerance with a monotone tail
};

/// Evaluates F(z(m)) (direct), hat F(z(m)) = e^{-i delta} F(z(m)) (hat), or
/// e^{-N(x)} hat F(z(m)) (tilde) and measures the distance to the candidate.
SequenceReport sequence_limit(const NilpotentOrbitSpec& spec, const LocalNormalForm& lnf, const std::vector<Point>& zs,
                              const DecFiltration& candidate, SequenceMode mode = SequenceMode::direct,
                              double tolerance = 1e-6);

struct SL2Sequence {
  std::vector<std::vector<double>> T;  // r x d, columns normalized to 1 at their pivot rows
  std::vector<std::size_t> pivots;
  std::vector<std::vector<double>> v;  // per sample, d entries
  std::vector<std::vector<double>> b;  // per sample, r entries
  std::vector<double> b_limit;
  double residual = 0;  // max drift of b over the tail, relative to the scale of y
};

/// Fits y(m) = T v(m) + b(m) with v_j / v_{j+1} and v_d increasing over the tail and b(m)
/// convergent. Pivot sets are tried last rows first. Throws not-classified when no pivot set
/// fits to 1e-6 of scale.
SL2Sequence sl2_sequence_decompose(const std::vector<std::vector<double>>& ys, std::size_t d);

}  // namespace hodge
