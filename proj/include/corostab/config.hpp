#pragma once

// Flat sectioned text files:
//
//   # comment
//   [section]
//   key = value
//
// Keys are unique within a section; blank lines and '#' comments are
// ignored, and an inline '#' starts a comment only when preceded by
// whitespace. Material files use the sections [material], [parameters]
// and [expressions]; scan configs add [grid] or [random], [audit] and
// [output]. See docs/file-formats.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corostab/material.hpp"
#include "corostab/quadforms.hpp"

namespace corostab {

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;

  const IniEntry* find(std::string_view key) const;
};

struct IniDocument {
  std::vector<IniSection> sections;

  const IniSection* find(std::string_view name) const;
};

/// Throws SchemaError (with line) on malformed lines, duplicate sections
/// or duplicate keys.
IniDocument parse_ini(std::string_view text);

/// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Material description from [material], [parameters], [expressions].
MaterialConfig material_config_from_ini(const IniDocument& doc);
MaterialConfig load_material_config(const std::filesystem::path& path);

/// Built-in law by name with parameters, e.g. ("hencky", {mu, lam}).
MaterialLaw load_material(std::string_view name, const ParameterMap& parameters);
/// Material file; runs the equivariance check for custom laws.
MaterialLaw load_material(const std::filesystem::path& path);

/// Parses "1.5" strictly (whole string); throws SchemaError with `line`.
double parse_number(std::string_view text, int line);

struct GridSpec {
  double min = -1.0;
  double max = 1.0;
  int points = 9;
};

struct RandomSpec {
  int count = 100;
  double box = 1.0;  ///< samples x uniformly in [-box, box]^3
  std::uint64_t seed = 1;
};

enum class OutputFormat { Json, Csv };

struct ScanConfig {
  MaterialConfig material;
  std::optional<std::filesystem::path> material_file;  ///< resolved path when given
  std::variant<GridSpec, RandomSpec> sampling = GridSpec{};
  std::vector<StressFlavor> flavors = {StressFlavor::Cauchy, StressFlavor::Kirchhoff};
  double margin = 1e-6;
  double definiteness = 1e-10;
  int directions = 200;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::filesystem::path> output;
};

/// Relative material paths resolve against `base_dir`. Throws SchemaError.
ScanConfig scan_config_from_ini(const IniDocument& doc, const std::filesystem::path& base_dir = {});
ScanConfig load_scan_config(const std::filesystem::path& path);

MaterialLaw scan_material(const ScanConfig& config);
/// Grid points (x3 fastest) or seeded uniform samples.
std::vector<Vector3> scan_states(const ScanConfig& config);

}  // namespace corostab
