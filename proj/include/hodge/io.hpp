#pragma once

#include "hodge/biext.hpp"
#include "hodge/orbits.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace hodge {

using Json = nlohmann::ordered_json;

/// Everything an instance file can carry. Only dimension, weight_filtration and
/// hodge_filtration are required.
struct InstanceFile {
  GPMHSInstance inst;
  std::vector<Matrix> nilpotents;
  LocalNormalForm gamma;
  std::optional<SL2Data> sl2;
  std::optional<Vector> one, one_dual;
  std::optional<int> pure_weight;

  NilpotentOrbitSpec spec() const;
  /// Throws invalid-instance when the file has no sl2 block.
  const SL2Data& sl2_data() const;
  /// Throws invalid-instance when the file has no biextension block.
  BiextensionInstance biext() const;
};

constexpr int kSchemaVersion = 1;

Json scalar_to_json(const Complex& c);
Complex scalar_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, std::size_t n);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, std::size_t n);
Json subspace_to_json(const Subspace& s);
Json filtration_to_json(const IncFiltration& w);
Json filtration_to_json(const DecFiltration& f);
Json bigrading_to_json(const Bigrading& b);

/// Canonical form: reduced echelon bases, contiguous levels, rational strings.
Json instance_to_json(const InstanceFile& f);
/// Throws parse-error on malformed documents and invalid-instance on inconsistent data.
InstanceFile instance_from_json(const Json& j);
InstanceFile read_instance(const std::string& path);

/// %.17g, enough to round-trip any double.
std::string format_double(double v);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hodge
