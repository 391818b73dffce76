#include "hodge/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hodge {

namespace {

[[noreturn]] void bad(const std::string& what) { throw HodgeError("invalid-instance", what); }

int int_key(const std::string& key) {
  try {
    std::size_t used = 0;
    int v = std::stoi(key, &used);
    if (used != key.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw HodgeError("parse-error", "expected an integer key, got '" + key + "'");
  }
}

std::vector<int> int_list(const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(int_key(part));
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

Subspace span_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw HodgeError("parse-error", "expected a list of vectors");
  std::vector<Vector> vs;
  for (const auto& v : j) vs.push_back(vector_from_json(v, n));
  return Subspace::span(std::span<const Vector>(vs), n);
}

// Levels keyed by integer strings.
std::map<int, Subspace> levels_from_json(const Json& j, std::size_t n, const char* name) {
  if (!j.is_object() || j.empty()) throw HodgeError("parse-error", std::string(name) + " must be a non-empty object");
  std::map<int, Subspace> out;
  for (const auto& [k, v] : j.items()) out.emplace(int_key(k), span_from_json(v, n));
  return out;
}

}  // namespace

Json scalar_to_json(const Complex& c) {
  if (c.is_real()) return rational_str(c.re());
  return Json{{"re", rational_str(c.re())}, {"im", rational_str(c.im())}};
}

Complex scalar_from_json(const Json& j) {
  try {
    if (j.is_string()) return Complex(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return Complex(Rational(j.get<long>()));
    if (j.is_object()) {
      Rational re = j.contains("re") ? scalar_from_json(j.at("re")).re() : Rational(0);
      Rational im = j.contains("im") ? scalar_from_json(j.at("im")).re() : Rational(0);
      return Complex(re, im);
    }
  } catch (const HodgeError&) {
    throw;
  } catch (const std::exception& e) {
    throw HodgeError("parse-error", std::string("bad scalar: ") + e.what());
  }
  throw HodgeError("parse-error", "scalars are strings \"a/b\" or {\"re\", \"im\"} objects, got " + j.dump());
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(scalar_to_json(c));
  return out;
}

Vector vector_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw HodgeError("parse-error", "expected a vector, got " + j.dump());
  if (j.size() != n) bad("vector of length " + std::to_string(j.size()) + " in dimension " + std::to_string(n));
  Vector v;
  for (const auto& c : j) v.push_back(scalar_from_json(c));
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k)));
    out.push_back(row);
  }
  return out;
}

Matrix matrix_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) throw HodgeError("parse-error", "expected a matrix (list of rows)");
  if (j.size() != n) bad("matrix with " + std::to_string(j.size()) + " rows in dimension " + std::to_string(n));
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, n));
  return Matrix::from_rows(rows, n);
}

Json subspace_to_json(const Subspace& s) {
  Json out = Json::array();
  for (const auto& v : s.basis()) out.push_back(vector_to_json(v));
  return out;
}

Json filtration_to_json(const IncFiltration& w) {
  Json out = Json::object();
  for (int k = w.k_min(); k <= w.k_max(); ++k) out[std::to_string(k)] = subspace_to_json(w.at(k));
  return out;
}

Json filtration_to_json(const DecFiltration& f) {
  Json out = Json::object();
  for (int p = f.p_min(); p <= f.p_max(); ++p) out[std::to_string(p)] = subspace_to_json(f.at(p));
  return out;
}

Json bigrading_to_json(const Bigrading& b) {
  Json out = Json::object();
  for (const auto& [pq, s] : b.pieces())
    if (!s.is_zero()) out[join({pq.first, pq.second})] = subspace_to_json(s);
  return out;
}

NilpotentOrbitSpec InstanceFile::spec() const {
  NilpotentOrbitSpec s;
  s.N = nilpotents;
  s.base = inst;
  s.pure_weight = pure_weight;
  return s;
}

const SL2Data& InstanceFile::sl2_data() const {
  if (!sl2) bad("instance has no sl2 block");
  return *sl2;
}

BiextensionInstance InstanceFile::biext() const {
  if (!one || !one_dual) bad("instance has no biextension block");
  return {inst, *one, *one_dual};
}

Json instance_to_json(const InstanceFile& f) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["dimension"] = f.inst.dim;
  if (f.pure_weight) j["pure_weight"] = *f.pure_weight;
  j["weight_filtration"] = filtration_to_json(f.inst.W);
  j["hodge_filtration"] = filtration_to_json(f.inst.F);
  Json h = Json::object();
  for (const auto& [pq, n] : f.inst.hodge_numbers)
    if (n != 0) h[join({pq.first, pq.second})] = n;
  j["hodge_numbers"] = h;
  Json pol = Json::object();
  for (const auto& [w, p] : f.inst.polarizations) {
    Json lift = Json::array();
    for (const auto& v : p.lift) lift.push_back(vector_to_json(v));
    pol[std::to_string(w)] = Json{{"lift_basis", lift}, {"form", matrix_to_json(p.form)}};
  }
  j["polarizations"] = pol;
  Json ns = Json::array();
  for (const auto& n : f.nilpotents) ns.push_back(matrix_to_json(n));
  j["nilpotents"] = ns;
  Json g = Json::object();
  for (const auto& [k, m] : f.gamma.gamma) g[join(k)] = matrix_to_json(m);
  j["gamma"] = g;
  if (f.sl2) {
    Json hs = Json::array();
    for (const auto& h2 : f.sl2->H) hs.push_back(matrix_to_json(h2));
    j["sl2"] = Json{{"H", hs}, {"Y0", matrix_to_json(f.sl2->Y0)}};
  }
  if (f.one && f.one_dual) j["biextension"] = Json{{"one", vector_to_json(*f.one)}, {"one_dual", vector_to_json(*f.one_dual)}};
  return j;
}

InstanceFile instance_from_json(const Json& j) {
  if (!j.is_object()) throw HodgeError("parse-error", "instance must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion)
    throw HodgeError("parse-error", "unsupported schema " + j.at("schema").dump());
  for (const char* key : {"dimension", "weight_filtration", "hodge_filtration"})
    if (!j.contains(key)) throw HodgeError("parse-error", std::string("missing field ") + key);
  InstanceFile f;
  try {
    const auto n = j.at("dimension").get<std::size_t>();
    if (n == 0) bad("dimension must be positive");
    f.inst.dim = n;
    if (j.contains("pure_weight")) f.pure_weight = j.at("pure_weight").get<int>();

    auto w = levels_from_json(j.at("weight_filtration"), n, "weight_filtration");
    std::vector<Subspace> wl;
    Subspace prev(n);
    for (int k = w.begin()->first; k <= w.rbegin()->first; ++k) {
      // a missing level equals the listed level below it
      auto it = w.find(k);
      if (it != w.end()) prev = it->second;
      wl.push_back(prev);
    }
    if (!wl.back().is_full()) bad("top level of the weight filtration must be the whole space");
    for (std::size_t i = 1; i < wl.size(); ++i)
      if (!wl[i].contains(wl[i - 1])) bad("weight filtration is not increasing");
    f.inst.W = IncFiltration(w.begin()->first, wl);

    auto fl = levels_from_json(j.at("hodge_filtration"), n, "hodge_filtration");
    std::vector<Subspace> levels;
    for (int p = fl.begin()->first; p <= fl.rbegin()->first; ++p) {
      // a missing level equals the next listed level above it
      auto it = fl.lower_bound(p);
      levels.push_back(it->second);
    }
    if (!levels.front().is_full()) bad("lowest level of the Hodge filtration must be the whole space");
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (!levels[i - 1].contains(levels[i])) bad("Hodge filtration is not decreasing");
    f.inst.F = DecFiltration(fl.begin()->first, levels);

    if (j.contains("hodge_numbers")) {
      for (const auto& [k, v] : j.at("hodge_numbers").items()) {
        auto pq = int_list(k);
        if (pq.size() != 2) throw HodgeError("parse-error", "hodge number keys are \"p,q\"");
        f.inst.hodge_numbers[{pq[0], pq[1]}] = v.get<int>();
      }
    } else {
      f.inst.hodge_numbers = hodge_numbers_of(f.inst.F, f.inst.W);
    }
    if (j.contains("polarizations")) {
      for (const auto& [k, v] : j.at("polarizations").items()) {
        Polarization p;
        for (const auto& u : v.at("lift_basis")) p.lift.push_back(vector_from_json(u, n));
        p.form = matrix_from_json(v.at("form"), p.lift.size());
        f.inst.polarizations[int_key(k)] = std::move(p);
      }
    }
    if (j.contains("nilpotents"))
      for (const auto& m : j.at("nilpotents")) f.nilpotents.push_back(matrix_from_json(m, n));
    if (j.contains("gamma")) {
      for (const auto& [k, m] : j.at("gamma").items()) {
        auto e = int_list(k);
        if (e.size() != f.nilpotents.size()) bad("gamma exponent " + k + " does not match the number of nilpotents");
        f.gamma.gamma[e] = matrix_from_json(m, n);
      }
    }
    if (j.contains("sl2")) {
      SL2Data s;
      for (const auto& m : j.at("sl2").at("H")) s.H.push_back(matrix_from_json(m, n));
      s.Y0 = matrix_from_json(j.at("sl2").at("Y0"), n);
      f.sl2 = std::move(s);
    }
    if (j.contains("biextension")) {
      f.one = vector_from_json(j.at("biextension").at("one"), n);
      f.one_dual = vector_from_json(j.at("biextension").at("one_dual"), n);
    }
  } catch (const HodgeError&) {
    throw;
  } catch (const std::exception& e) {
    throw HodgeError("parse-error", e.what());
  }
  return f;
}

InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HodgeError("parse-error", "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw HodgeError("parse-error", path + ": " + e.what());
  }
  return instance_from_json(j);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw HodgeError("io-error", "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw HodgeError("io-error", "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw HodgeError("io-error", "cannot rename into " + path + ": " + ec.message());
  }
}

}  // namespace hodge
