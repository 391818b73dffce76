#include "hodge/biext.hpp"
#include "hodge/io.hpp"
#include "hodge/limits.hpp"
#include "hodge/metrics.hpp"
#include "hodge/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#ifndef HODGE_VERSION
#define HODGE_VERSION "0.0.0"
#endif

using namespace hodge;

namespace {

struct Options {
  std::string command;
  std::string input;
  std::string output;
  std::string format = "json";
  std::string grid;
  std::string metric;
  std::string twist = "delta";
  std::optional<double> tolerance;
  std::optional<long> seed;
  std::string path;
  std::string mode = "direct";
  std::optional<int> center;
  double eta = 0.0;
  double rho = 0.1;
  double angle = 0.3;
};

// Kinds that mean the input or the flags were unusable.
const std::set<std::string> kUsageKinds = {"parse-error",    "invalid-instance",    "dimension-mismatch",
                                           "invalid-argument", "grid-outside-region", "lnf-invalid",
                                           "invalid-sl2",    "io-error"};

std::string format_g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

Json nums(const std::vector<double>& v) {
  Json out = Json::array();
  for (double d : v) out.push_back(num(d));
  return out;
}

Json complex_num(std::complex<double> c) { return Json{{"re", num(c.real())}, {"im", num(c.imag())}}; }

// Grid values are decimal inputs; read them back as the decimal with 15 significant digits.
double round15(double v) { return std::stod(format_g15(v)); }

Rational decimal_rational(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  std::string text(buf);
  auto e = text.find('e');
  Rational r = parse_rational(text.substr(0, e));
  int exp10 = std::stoi(text.substr(e + 1));
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exp10)));
  if (exp10 >= 0) r *= Rational(p);
  else r /= Rational(p);
  r.canonicalize();
  return r;
}

// Grid spec: comma separated "name=start:stop:count" or "name=value". y, s and t are log-spaced,
// x is linear.
struct GridAxis {
  std::string name;
  std::vector<double> values;
};

std::vector<GridAxis> parse_grid(const std::string& spec) {
  std::vector<GridAxis> axes;
  if (spec.empty()) return axes;
  static const std::regex entry(R"(^\s*([a-z])(\d*)\s*=\s*([^:]+)(?::([^:]+):(\d+))?\s*$)");
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::smatch m;
    if (!std::regex_match(part, m, entry)) throw HodgeError("invalid-argument", "bad grid entry '" + part + "'");
    GridAxis axis{m[1].str() + m[2].str(), {}};
    double a = 0, b = 0;
    int count = 1;
    try {
      a = std::stod(m[3].str());
      b = m[4].matched ? std::stod(m[4].str()) : a;
      count = m[5].matched ? std::stoi(m[5].str()) : 1;
    } catch (const std::exception&) {
      throw HodgeError("invalid-argument", "bad number in grid entry '" + part + "'");
    }
    if (count < 1) throw HodgeError("invalid-argument", "grid count must be positive in '" + part + "'");
    bool log_spaced = m[1].str() != "x";
    if (log_spaced && (a <= 0 || b <= 0))
      throw HodgeError("invalid-argument", "log-spaced grid needs positive bounds in '" + part + "'");
    for (int k = 0; k < count; ++k) {
      double u = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      axis.values.push_back(round15(log_spaced ? std::exp(std::log(a) + u * (std::log(b) - std::log(a))) : a + u * (b - a)));
    }
    for (const auto& other : axes)
      if (other.name == axis.name) throw HodgeError("invalid-argument", "grid variable " + axis.name + " repeated");
    axes.push_back(std::move(axis));
  }
  return axes;
}

// Values of prefix1..prefixR in order; missing variables are an error unless `optional`.
std::vector<std::vector<double>> axis_values(const std::vector<GridAxis>& axes, char prefix, std::size_t rank,
                                             bool optional) {
  std::vector<std::vector<double>> out;
  for (std::size_t j = 1; j <= rank; ++j) {
    std::string name = std::string(1, prefix) + std::to_string(j);
    auto it = std::find_if(axes.begin(), axes.end(), [&](const GridAxis& a) { return a.name == name; });
    if (it == axes.end()) {
      if (optional) return {};
      throw HodgeError("invalid-argument", "grid is missing " + name);
    }
    out.push_back(it->values);
  }
  for (const auto& a : axes) {
    if (a.name[0] != prefix || a.name.size() < 2) continue;
    if (std::stoul(a.name.substr(1)) > rank || std::stoul(a.name.substr(1)) == 0)
      throw HodgeError("dimension-mismatch", "grid variable " + a.name + " exceeds the number of nilpotents");
  }
  return out;
}

std::vector<std::vector<double>> cartesian(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& values : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& head : out)
      for (double v : values) {
        auto p = head;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<double>> zipped(const std::vector<std::vector<double>>& axes) {
  if (axes.empty()) return {};
  std::size_t n = axes[0].size();
  for (const auto& a : axes)
    if (a.size() != n) throw HodgeError("invalid-argument", "zipped grid variables need equal counts");
  std::vector<std::vector<double>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& a : axes) out[i].push_back(a[i]);
  return out;
}

// Single real parts x_j, one value each.
std::vector<double> fixed_x(const std::vector<GridAxis>& axes, std::size_t rank) {
  auto xs = axis_values(axes, 'x', rank, true);
  std::vector<double> out;
  for (const auto& v : xs) {
    if (v.size() != 1) throw HodgeError("invalid-argument", "x variables take a single value for this command");
    out.push_back(v[0]);
  }
  return out;
}

Point to_point(const std::vector<double>& x, const std::vector<double>& y) {
  Point z;
  for (std::size_t j = 0; j < y.size(); ++j)
    z.push_back(Complex(j < x.size() ? decimal_rational(x[j]) : Rational(0), decimal_rational(y[j])));
  return z;
}

MetricMode metric_mode(const Options& o) {
  if (o.metric.empty() || o.metric == "standard") return MetricMode::standard;
  if (o.metric == "twisted") return MetricMode::twisted;
  throw HodgeError("invalid-argument", "--metric must be standard or twisted");
}

TwistSource twist_source(const Options& o) {
  if (o.twist == "delta") return TwistSource::delta;
  if (o.twist == "epsilon") return TwistSource::epsilon;
  throw HodgeError("invalid-argument", "--twist must be delta or epsilon");
}

std::vector<int> parse_path(const std::string& s, std::size_t rank) {
  std::vector<int> out;
  if (s.empty()) return std::vector<int>(rank, 1);
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw HodgeError("invalid-argument", "bad --path entry '" + part + "'");
    }
  }
  if (out.size() != rank) throw HodgeError("dimension-mismatch", "--path needs one exponent per nilpotent");
  return out;
}

struct Outcome {
  Json result = Json::object();
  bool pass = true;
  std::string failed;
  // Per-point table for CSV output; empty for non-scan commands.
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Json scan_to_json(const ScanReport& rep) {
  Json pts = Json::array();
  for (const auto& p : rep.points) {
    Json j{{"y", nums(p.y)}, {"x", nums(p.x)}, {"value", num(p.value)}};
    if (rep.command == "distance-scan") j["adjusted"] = num(p.adjusted);
    j["status"] = p.status;
    pts.push_back(j);
  }
  Json fit = Json::object();
  for (const auto& [k, v] : rep.fit) fit[k] = num(v);
  Json flags = Json::object();
  for (const auto& [k, v] : rep.flags) flags[k] = v;
  Json out{{"points", pts}, {"fit", fit}, {"flags", flags}};
  out["alpha"] = rep.alpha ? num(*rep.alpha) : Json(nullptr);
  return out;
}

void scan_table(const ScanReport& rep, std::size_t rank, Outcome& o) {
  o.header = {"record", "key"};
  for (std::size_t j = 1; j <= rank; ++j) o.header.push_back("y" + std::to_string(j));
  for (std::size_t j = 1; j <= rank; ++j) o.header.push_back("x" + std::to_string(j));
  o.header.insert(o.header.end(), {"value", "adjusted", "status"});
  for (const auto& p : rep.points) {
    std::vector<std::string> row{"point", ""};
    for (std::size_t j = 0; j < rank; ++j) row.push_back(j < p.y.size() ? format_double(p.y[j]) : "");
    for (std::size_t j = 0; j < rank; ++j) row.push_back(j < p.x.size() ? format_double(p.x[j]) : "");
    row.insert(row.end(), {format_double(p.value), format_double(p.adjusted), p.status});
    o.rows.push_back(std::move(row));
  }
  auto extra = [&](const std::string& kind, const std::string& key, const std::string& value) {
    std::vector<std::string> row{kind, key};
    row.resize(2 + 2 * rank, "");
    row.insert(row.end(), {value, "", ""});
    o.rows.push_back(std::move(row));
  };
  for (const auto& [k, v] : rep.fit) extra("fit", k, format_double(v));
  for (const auto& [k, v] : rep.flags) extra("flag", k, v ? "1" : "0");
  if (rep.alpha) extra("fit", "alpha", format_double(*rep.alpha));
}

Outcome run(const Options& o, const InstanceFile& file, const std::vector<GridAxis>& axes) {
  Outcome out;
  const auto& inst = file.inst;
  auto spec = file.spec();
  const std::string& c = o.command;

  if (c == "bigrade" || c == "split-delta") {
    // Orbit instances are read through their limit (F_inf, M).
    IncFiltration w = inst.W;
    if (!spec.N.empty()) {
      auto m = try_relative_weight_filtration(spec.N_sum(), inst.W);
      if (!m) {
        out.pass = false;
        out.failed = "relative-weight-filtration";
        return out;
      }
      w = *m;
      out.result["weight_filtration"] = filtration_to_json(w);
    }
    if (!is_mhs(inst.F, w)) {
      out.pass = false;
      out.failed = "mixed-hodge-structure";
      return out;
    }
    auto b = deligne_bigrading(inst.F, w);
    if (c == "bigrade") {
      out.result["bigrading"] = bigrading_to_json(b);
      out.result["r_split"] = b.is_r_split();
    } else {
      Matrix delta = delta_operator(inst.F, w);
      out.result["delta"] = matrix_to_json(delta);
      out.result["split_hodge_filtration"] = filtration_to_json(inst.F.transformed(exp_nilpotent(-Complex::i() * delta)));
      out.result["r_split"] = delta.is_zero();
    }
  } else if (c == "weight-filt") {
    if (spec.N.empty()) throw HodgeError("invalid-instance", "instance has no nilpotents");
    int center = o.center.value_or(file.pure_weight.value_or(0));
    out.result["center"] = center;
    out.result["weight_filtration"] = filtration_to_json(monodromy_weight_filtration(spec.N_sum(), center));
  } else if (c == "rel-weight-filt") {
    if (spec.N.empty()) throw HodgeError("invalid-instance", "instance has no nilpotents");
    auto m = try_relative_weight_filtration(spec.N_sum(), inst.W);
    if (!m) {
      out.pass = false;
      out.failed = "relative-weight-filtration";
      return out;
    }
    out.result["relative_weight_filtration"] = filtration_to_json(*m);
  } else if (c == "admissible-check") {
    auto rep = check_admissible_orbit(spec);
    Json clauses = Json::object();
    for (const auto& [name, ok] : rep.clauses) clauses[name] = ok;
    out.result["clauses"] = clauses;
    if (rep.M) out.result["relative_weight_filtration"] = filtration_to_json(*rep.M);
    if (rep.limit_bigrading) out.result["limit_bigrading"] = bigrading_to_json(*rep.limit_bigrading);
    out.pass = rep.ok();
    out.failed = rep.first_failed;
  } else if (c == "metric") {
    auto ctx = metric_mode(o) == MetricMode::twisted ? twisted_metric(inst, twist_source(o)) : hodge_metric(inst);
    out.result["mode"] = metric_mode(o) == MetricMode::twisted ? "twisted" : "standard";
    out.result["gram"] = matrix_to_json(ctx.gram);
    out.result["tau"] = num(ctx.tau);
  } else if (c == "tau") {
    out.result["twist"] = o.twist;
    out.result["tau"] = num(tau(inst, twist_source(o)));
  } else if (c == "orbit-eval" || c == "lnf-eval") {
    auto ys = cartesian(axis_values(axes, 'y', spec.rank(), false));
    auto x = fixed_x(axes, spec.rank());
    if (c == "lnf-eval") check_lnf(spec, file.gamma);
    Json pts = Json::array();
    for (const auto& y : ys) {
      Point z = to_point(x, y);
      auto f = c == "orbit-eval" ? orbit_eval(spec, z) : lnf_eval(spec, file.gamma, z);
      auto mem = orbit_membership(spec, f);
      if (mem != Membership::in_M) out.pass = false;
      pts.push_back(Json{{"y", nums(y)}, {"x", nums(x)}, {"hodge_filtration", filtration_to_json(f)},
                         {"membership", to_string(mem)}});
    }
    out.result["points"] = pts;
    if (!out.pass) out.failed = "membership";
  } else if (c == "sl2-triple") {
    if (spec.N.empty()) throw HodgeError("invalid-instance", "instance has no nilpotents");
    auto t = sl2_triple_one_var(spec.N_sum(), split_limit(spec), file.pure_weight.value_or(0));
    out.result["N"] = matrix_to_json(t.N);
    out.result["H"] = matrix_to_json(t.H);
    out.result["N_plus"] = matrix_to_json(t.N_plus);
  } else if (c == "distance-scan") {
    // Cartesian product restricted to y_1 >= ... >= y_r >= 1.
    auto all = cartesian(axis_values(axes, 'y', spec.rank(), false));
    std::vector<std::vector<double>> ys;
    for (auto& y : all)
      if (in_region(y)) ys.push_back(std::move(y));
    if (ys.empty()) throw HodgeError("grid-outside-region", "no grid point satisfies y_1 >= ... >= y_r >= 1");
    auto rep = distance_scan(spec, file.gamma, ys, metric_mode(o), fixed_x(axes, spec.rank()),
                             o.tolerance.value_or(0.25));
    out.result = scan_to_json(rep);
    out.result["dropped_points"] = all.size() - ys.size();
    scan_table(rep, spec.rank(), out);
    out.pass = rep.pass();
    for (const auto& [k, v] : rep.flags)
      if (!v && out.failed.empty()) out.failed = k;
  } else if (c == "rel-compact-scan") {
    auto ys = cartesian(axis_values(axes, 'y', spec.rank(), false));
    bool twist = o.metric != "standard";
    auto rep = rel_compact_scan(spec, file.gamma, file.sl2_data(), ys, fixed_x(axes, spec.rank()), twist, o.eta);
    out.result = scan_to_json(rep);
    out.result["twisted"] = twist;
    scan_table(rep, spec.rank(), out);
    out.pass = rep.pass();
    for (const auto& [k, v] : rep.flags)
      if (!v && out.failed.empty()) out.failed = k;
  } else if (c == "biext-metric") {
    auto b = file.biext();
    Matrix mu = build_mu(b);
    Rational lambda = delta_over_mu(inst, mu);
    out.result["mu"] = matrix_to_json(mu);
    out.result["delta_over_mu"] = rational_str(lambda);
    out.result["metric"] = num(biext_metric_value(b));
  } else if (c == "phi-scan") {
    auto b = file.biext();
    auto mods = zipped(axis_values(axes, 's', spec.rank(), false));
    std::vector<std::vector<std::complex<double>>> grid;
    for (const auto& m : mods) {
      std::vector<std::complex<double>> s;
      for (double r : m) s.push_back(std::polar(r, o.angle));
      grid.push_back(std::move(s));
    }
    auto rep = phi_scan(b, spec, file.gamma, file.sl2_data(), grid, o.rho);
    Json pts = Json::array();
    for (const auto& p : rep.points) {
      Json s = Json::array();
      for (auto v : p.s) s.push_back(complex_num(v));
      pts.push_back(Json{{"s", s}, {"phi", num(p.phi)}, {"phi_compact", num(p.phi_compact)}, {"ratio", num(p.ratio)}});
    }
    out.result["points"] = pts;
    out.result["ratio_max"] = num(rep.ratio_max);
    out.result["slopes"] = nums(rep.slopes);
    out.result["refinements"] = rep.refinements;
    out.result["integrals"] = nums(rep.integrals);
    out.result["rho"] = num(rep.rho);
    out.result["shrinking"] = nums(rep.shrinking);
    out.result["flags"] = Json{{"bounded", rep.bounded},
                               {"compact_agrees", rep.compact_agrees},
                               {"integral_converged", rep.integral_converged}};
    out.header = {"record", "key"};
    for (std::size_t j = 1; j <= spec.rank(); ++j) out.header.push_back("abs_s" + std::to_string(j));
    out.header.insert(out.header.end(), {"phi", "phi_compact", "ratio"});
    for (const auto& p : rep.points) {
      std::vector<std::string> row{"point", ""};
      for (auto v : p.s) row.push_back(format_double(std::abs(v)));
      row.insert(row.end(), {format_double(p.phi), format_double(p.phi_compact), format_double(p.ratio)});
      out.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k < rep.integrals.size(); ++k) {
      std::vector<std::string> row{"integral", std::to_string(rep.refinements[k])};
      row.resize(2 + spec.rank(), "");
      row.insert(row.end(), {format_double(rep.integrals[k]), "", ""});
      out.rows.push_back(std::move(row));
    }
    out.pass = rep.pass();
    out.failed = !rep.bounded ? "bounded" : !rep.compact_agrees ? "compact_agrees" : !rep.integral_converged ? "integral_converged" : "";
  } else if (c == "reduced-limit") {
    ReducedLimit r;
    if (file.pure_weight) {
      r = reduced_limit_pure(spec.N, inst.F, *file.pure_weight);
    } else {
      r = reduced_limit_mixed(spec, file.sl2_data().Y0);
    }
    out.result["kind"] = to_string(r.kind);
    out.result["limit_filtration"] = filtration_to_json(r.Phi);
    bool invariant = true;
    for (const auto& n : spec.N)
      for (int p = r.Phi.p_min(); p <= r.Phi.p_max(); ++p)
        if (!r.Phi.at(p - 1).contains(image(n, r.Phi.at(p)))) invariant = false;
    out.result["n_horizontal"] = invariant;
  } else if (c == "satake") {
    auto s = satake_map(spec.N, inst.F);
    out.result["psi"] = filtration_to_json(s.Psi.Phi);
    out.result["tilde_hodge_filtration"] = filtration_to_json(s.tilde_F);
    out.result["invariant"] = s.invariant;
    out.result["in_boundary"] = s.in_boundary;
    out.pass = s.invariant && s.in_boundary;
    out.failed = !s.invariant ? "invariant" : !s.in_boundary ? "in_boundary" : "";
  } else if (c == "sequence-limit") {
    auto exps = parse_path(o.path, spec.rank());
    auto x = fixed_x(axes, spec.rank());
    std::vector<Point> zs;
    auto t = std::find_if(axes.begin(), axes.end(), [](const GridAxis& a) { return a.name == "t"; });
    if (t != axes.end()) {
      for (double v : t->values) {
        std::vector<double> y;
        for (int a : exps) y.push_back(round15(std::pow(v, a)));
        zs.push_back(to_point(x, y));
      }
    } else {
      for (const auto& y : zipped(axis_values(axes, 'y', spec.rank(), false))) zs.push_back(to_point(x, y));
    }
    SequenceMode mode;
    if (o.mode == "direct") mode = SequenceMode::direct;
    else if (o.mode == "hat") mode = SequenceMode::hat;
    else if (o.mode == "tilde") mode = SequenceMode::tilde;
    else throw HodgeError("invalid-argument", "--mode must be direct, hat or tilde");
    std::vector<Complex> xc;
    for (double v : x) xc.push_back(Complex(decimal_rational(v)));
    DecFiltration phi = path_limit(spec.N, inst.F, exps);
    if (mode != SequenceMode::tilde && !xc.empty()) phi = phi.transformed(exp_nilpotent(spec.N_of(xc)));
    auto rep = sequence_limit(spec, file.gamma, zs, phi, mode, o.tolerance.value_or(1e-6));
    out.result["mode"] = o.mode;
    out.result["path"] = exps;
    out.result["candidate"] = filtration_to_json(phi);
    Json pts = Json::array();
    out.header = {"record"};
    for (std::size_t j = 1; j <= spec.rank(); ++j) out.header.insert(out.header.end(), {"x" + std::to_string(j), "y" + std::to_string(j)});
    out.header.insert(out.header.end(), {"distance", "fallback"});
    for (const auto& p : rep.points) {
      Json z = Json::array();
      std::vector<std::string> row{"point"};
      for (const auto& v : p.z) {
        z.push_back(complex_num(v.to_double()));
        row.push_back(format_double(v.to_double().real()));
        row.push_back(format_double(v.to_double().imag()));
      }
      row.insert(row.end(), {format_double(p.distance), p.fallback ? "1" : "0"});
      out.rows.push_back(std::move(row));
      pts.push_back(Json{{"z", z}, {"distance", num(p.distance)}, {"fallback", p.fallback}});
    }
    out.result["points"] = pts;
    out.result["monotone_tail"] = rep.monotone_tail;
    out.result["converged"] = rep.converged;
    out.pass = rep.converged;
    if (!out.pass) out.failed = rep.monotone_tail ? "tolerance" : "monotone_tail";
  }
  return out;
}

Json flags_json(const Options& o) {
  Json f;
  f["input"] = o.input;
  f["format"] = o.format;
  if (!o.grid.empty()) f["grid"] = o.grid;
  if (!o.metric.empty()) f["metric"] = o.metric;
  f["twist"] = o.twist;
  if (o.tolerance) f["tolerance"] = *o.tolerance;
  if (o.seed) f["seed"] = *o.seed;
  if (!o.path.empty()) f["path"] = o.path;
  if (o.command == "sequence-limit") f["mode"] = o.mode;
  if (o.center) f["center"] = *o.center;
  if (o.command == "rel-compact-scan") f["eta"] = o.eta;
  if (o.command == "phi-scan") {
    f["rho"] = o.rho;
    f["angle"] = o.angle;
  }
  return f;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  auto cell = [](const Json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  bool flat_array = j.is_array() && !j.empty() &&
                    std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
  if (flat_array) {
    // a vector is one cell, entries separated by spaces
    std::string joined;
    for (const auto& v : j) joined += (joined.empty() ? "" : " ") + cell(v);
    out.emplace_back(prefix, joined);
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, cell(j));
  }
}

std::string render(const Options& o, const Outcome& out) {
  Json report;
  report["schema"] = kSchemaVersion;
  report["tool_version"] = HODGE_VERSION;
  report["command"] = o.command;
  report["flags"] = flags_json(o);
  report["result"] = out.result;
  report["pass"] = out.pass;
  if (!out.pass) report["failed"] = out.failed;
  if (o.format == "json") return report.dump(2) + "\n";

  std::ostringstream csv;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) csv << (i ? "," : "") << csv_field(cells[i]);
    csv << "\n";
  };
  if (!out.header.empty()) {
    line(out.header);
    for (const auto& r : out.rows) line(r);
    std::vector<std::string> pass_row(out.header.size(), "");
    pass_row[0] = "pass";
    pass_row[1] = out.pass ? "1" : "0";
    line(pass_row);
    return csv.str();
  }
  std::vector<std::pair<std::string, std::string>> cells;
  flatten(out.result, "", cells);
  line({"field", "value"});
  for (const auto& [k, v] : cells) line({k, v});
  line({"pass", out.pass ? "1" : "0"});
  return csv.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
  } else {
    write_atomic(o.output, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("THREADS")) {
    try {
      int n = std::stoi(t);
      if (n > 0) set_thread_count(static_cast<unsigned>(n));
    } catch (const std::exception&) {
      std::cerr << "hodge: ignoring THREADS=" << t << "\n";
    }
  }

  Options o;
  CLI::App app{"Asymptotic mixed Hodge theory toolkit"};
  app.set_version_flag("--version", HODGE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--input,-i", o.input, "instance JSON file")->required();
  app.add_option("--output,-o", o.output, "report path (stdout when omitted)");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", o.grid, "e.g. \"y1=5:40:8,y2=2:10:5\"; y, s, t log-spaced, x linear");
  app.add_option("--metric", o.metric, "standard or twisted")->check(CLI::IsMember({"standard", "twisted"}));
  app.add_option("--twist", o.twist, "delta or epsilon")->check(CLI::IsMember({"delta", "epsilon"}));
  app.add_option("--tolerance", o.tolerance, "pass tolerance of the scan");
  app.add_option("--seed", o.seed, "echoed in the report; every command is deterministic");
  app.add_option("--path", o.path, "sequence-limit exponents a1,...,ar for z_j = x_j + i t^{a_j}");
  app.add_option("--mode", o.mode, "sequence-limit: direct, hat or tilde");
  app.add_option("--center", o.center, "weight-filt: center of W(N)");
  app.add_option("--eta", o.eta, "rel-compact-scan: positivity margin floor");
  app.add_option("--rho", o.rho, "phi-scan: polydisk radius");
  app.add_option("--angle", o.angle, "phi-scan: argument of the s_j");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"bigrade", "Deligne bigrading I^{p,q} of (F, W)"},
      {"split-delta", "delta and the R-split structure e^{-i delta} F"},
      {"weight-filt", "monodromy weight filtration of the sum of the nilpotents"},
      {"rel-weight-filt", "relative weight filtration M(N, W)"},
      {"admissible-check", "admissibility clauses of the nilpotent orbit"},
      {"metric", "Gram matrix of the standard or twisted Hodge metric"},
      {"tau", "twist factor of the twisted metric"},
      {"orbit-eval", "e^{N(z)} F over the y grid"},
      {"lnf-eval", "e^{N(z)} e^{Gamma(s)} F over the y grid"},
      {"sl2-triple", "(N, H, N+) for the split limit"},
      {"distance-scan", "distance between F(z) and the nilpotent orbit over the y grid"},
      {"rel-compact-scan", "t^{-1}(y) e^{-N(x)} F(z) over the y grid"},
      {"biext-metric", "delta/mu and the biextension metric"},
      {"phi-scan", "phi near the puncture and its integral over small polydisks"},
      {"reduced-limit", "reduced limit filtration"},
      {"satake", "Satake boundary map"},
      {"sequence-limit", "distance of F along a sequence to the path limit"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&o, n = name] { o.command = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto axes = parse_grid(o.grid);
    InstanceFile file = read_instance(o.input);
    Outcome out;
    try {
      out = run(o, file, axes);
    } catch (const HodgeError& e) {
      if (kUsageKinds.count(e.kind())) throw;
      out = Outcome{};
      out.pass = false;
      out.failed = e.kind();
      out.result = Json{{"error", e.kind()}, {"message", e.what()}};
    }
    emit(o, render(o, out));
    if (!out.pass) std::cerr << "hodge " << o.command << ": failed: " << out.failed << "\n";
    return out.pass ? 0 : 1;
  } catch (const HodgeError& e) {
    std::cerr << "hodge " << o.command << ": " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hodge " << o.command << ": " << e.what() << "\n";
    return 2;
  }
}
