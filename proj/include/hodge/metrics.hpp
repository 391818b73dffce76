#pragma once

#include "hodge/mhs.hpp"

namespace hodge {

enum class TwistSource { delta, epsilon };
enum class MetricMode { standard, twisted };

/// Mixed Hodge metric h at a point (F, W), optionally twisted by tau(F)^{(p+q)/2}.
struct MetricContext {
  GPMHSInstance inst;
  Bigrading bigrading;
  Matrix gram;  // h(e_i, e_j); h is linear in the first slot
  MetricMode mode = MetricMode::standard;
  TwistSource source = TwistSource::delta;
  double tau = 1.0;

  /// h(u, v) = u^T G conj(v).
  Complex h(const Vector& u, const Vector& v) const;
  /// Standard ||v||^2, exact.
  Rational norm2(const Vector& v) const;
  /// h-adjoint of A.
  Matrix adjoint(const Matrix& a) const;
  /// Standard Tr(A A*), exact.
  Rational endo_norm2(const Matrix& a) const;
};

/// Standard metric; throws not-in-M unless the instance validates as a point of M.
MetricContext hodge_metric(const GPMHSInstance& inst);
/// Same metric in twisted mode, tau computed from the given source.
MetricContext twisted_metric(const GPMHSInstance& inst, TwistSource source = TwistSource::delta);

/// Norm of v in the context's mode (standard or twisted).
double vector_norm(const Vector& v, const MetricContext& ctx);
/// Frobenius norm of A in a unitary basis for the context's metric.
double endo_norm(const Matrix& a, const MetricContext& ctx);

/// tau(F) = 1 + sum_{p,q<0} ||s^{p,q}||^{-2/(p+q)} with s = delta or epsilon.
double tau(const GPMHSInstance& inst, TwistSource source = TwistSource::delta);
double tau(const MetricContext& ctx, TwistSource source);

/// |v| with the twist tau(F)^{(p+q)/2} applied on each I^{p,q} (delta source).
double twisted_norm(const Vector& v, const GPMHSInstance& inst);

/// The unique u, block lower triangular for the Hodge types of (F1, W), with e^u F1 = F2.
/// Throws out-of-chart when F2 is not in the big cell around F1.
Matrix chart_log(const GPMHSInstance& f1, const DecFiltration& f2);

/// Length of t -> e^{tu} F1, u = chart_log(F1, F2), by composite Simpson with `panels`
/// subintervals. An upper bound for the Riemannian distance.
double distance_surrogate(const GPMHSInstance& f1, const DecFiltration& f2, MetricMode mode,
                          TwistSource source = TwistSource::delta, int panels = 64);

}  // namespace hodge
