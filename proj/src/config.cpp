#include "corostab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "corostab/errors.hpp"
#include "corostab/random.hpp"

namespace corostab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  if (!line.empty() && trim(line).starts_with('#')) return {};
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) return line.substr(0, i);
  }
  return line;
}

void reject_unknown_keys(const IniSection& section, std::initializer_list<std::string_view> allowed) {
  for (const IniEntry& e : section.entries) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      throw SchemaError("unknown key '" + e.key + "' in [" + section.name + "]", e.line);
    }
  }
}

void reject_unknown_sections(const IniDocument& doc, std::initializer_list<std::string_view> allowed) {
  for (const IniSection& s : doc.sections) {
    if (std::find(allowed.begin(), allowed.end(), s.name) == allowed.end()) {
      throw SchemaError("unknown section [" + s.name + "]", s.line);
    }
  }
}

int parse_int(std::string_view text, int line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError("expected an integer, got '" + std::string(text) + "'", line);
  }
  return value;
}

std::uint64_t parse_seed(std::string_view text, int line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError("expected a non-negative integer seed, got '" + std::string(text) + "'", line);
  }
  return value;
}

void read_parameters(const IniDocument& doc, ParameterMap& out) {
  if (const IniSection* p = doc.find("parameters")) {
    for (const IniEntry& e : p->entries) out[e.key] = parse_number(e.value, e.line);
  }
}

MaterialKind parse_kind(const IniEntry& entry) {
  const auto kind = material_kind_from_string(entry.value);
  if (!kind) throw SchemaError("unknown material kind '" + entry.value + "'", entry.line);
  return *kind;
}

}  // namespace

const IniEntry* IniSection::find(std::string_view key) const {
  for (const IniEntry& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const IniSection* IniDocument::find(std::string_view name) const {
  for (const IniSection& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

IniDocument parse_ini(std::string_view text) {
  IniDocument doc;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    const std::string_view line = trim(strip_comment(text.substr(start, end - start)));
    ++line_no;
    start = end + 1;
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw SchemaError("unterminated section header", line_no);
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) throw SchemaError("empty section name", line_no);
      if (doc.find(name)) throw SchemaError("duplicate section [" + name + "]", line_no);
      doc.sections.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SchemaError("expected 'key = value'", line_no);
    if (doc.sections.empty()) throw SchemaError("entry outside of any section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw SchemaError("empty key", line_no);
    IniSection& section = doc.sections.back();
    if (section.find(key)) throw SchemaError("duplicate key '" + key + "' in [" + section.name + "]", line_no);
    section.entries.push_back({key, value, line_no});
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

double parse_number(std::string_view text, int line) {
  double value = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError("expected a number, got '" + std::string(text) + "'", line);
  }
  return value;
}

MaterialConfig material_config_from_ini(const IniDocument& doc) {
  reject_unknown_sections(doc, {"material", "parameters", "expressions"});
  const IniSection* m = doc.find("material");
  if (!m) throw SchemaError("missing [material] section");
  reject_unknown_keys(*m, {"kind", "name", "variables"});
  const IniEntry* kind = m->find("kind");
  if (!kind) throw SchemaError("[material] needs 'kind'", m->line);

  MaterialConfig config;
  config.kind = parse_kind(*kind);
  const IniEntry* name = m->find("name");
  config.name = name ? name->value : to_string(config.kind);
  if (const IniEntry* v = m->find("variables")) {
    if (v->value == "log-stretch") {
      config.variables = VariableSpace::LogStretch;
    } else if (v->value == "green-lagrange") {
      config.variables = VariableSpace::GreenLagrange;
    } else {
      throw SchemaError("variables must be 'log-stretch' or 'green-lagrange'", v->line);
    }
  }
  read_parameters(doc, config.parameters);
  if (const IniSection* e = doc.find("expressions")) {
    for (const IniEntry& entry : e->entries) config.expressions[entry.key] = entry.value;
  }
  return config;
}

MaterialConfig load_material_config(const std::filesystem::path& path) {
  return material_config_from_ini(parse_ini(read_file(path)));
}

MaterialLaw load_material(std::string_view name, const ParameterMap& parameters) {
  const auto kind = material_kind_from_string(name);
  if (!kind) throw SchemaError("unknown material '" + std::string(name) + "'");
  MaterialConfig config;
  config.kind = *kind;
  config.name = std::string(name);
  config.parameters = parameters;
  return law_from_config(config);
}

MaterialLaw load_material(const std::filesystem::path& path) { return law_from_config(load_material_config(path)); }

ScanConfig scan_config_from_ini(const IniDocument& doc, const std::filesystem::path& base_dir) {
  reject_unknown_sections(doc, {"material", "parameters", "expressions", "grid", "random", "audit", "output"});
  ScanConfig config;

  const IniSection* m = doc.find("material");
  if (!m) throw SchemaError("missing [material] section");
  if (const IniEntry* file = m->find("file")) {
    reject_unknown_keys(*m, {"file"});
    if (doc.find("expressions")) throw SchemaError("[expressions] cannot be combined with a material file");
    std::filesystem::path p(file->value);
    if (p.is_relative()) p = base_dir / p;
    config.material_file = p;
    config.material = load_material_config(p);
    read_parameters(doc, config.material.parameters);
  } else {
    config.material = material_config_from_ini(
        [&] {
          IniDocument sub;
          for (const IniSection& s : doc.sections) {
            if (s.name == "material" || s.name == "parameters" || s.name == "expressions") sub.sections.push_back(s);
          }
          return sub;
        }());
  }

  const IniSection* grid = doc.find("grid");
  const IniSection* random = doc.find("random");
  if (grid && random) throw SchemaError("give either [grid] or [random], not both", random->line);
  if (grid) {
    reject_unknown_keys(*grid, {"min", "max", "points"});
    GridSpec g;
    if (const IniEntry* e = grid->find("min")) g.min = parse_number(e->value, e->line);
    if (const IniEntry* e = grid->find("max")) g.max = parse_number(e->value, e->line);
    if (const IniEntry* e = grid->find("points")) g.points = parse_int(e->value, e->line);
    if (!(g.min < g.max)) throw SchemaError("grid min must be below max", grid->line);
    if (g.points < 2) throw SchemaError("grid needs at least 2 points per axis", grid->line);
    config.sampling = g;
  } else if (random) {
    reject_unknown_keys(*random, {"count", "box", "seed"});
    RandomSpec r;
    if (const IniEntry* e = random->find("count")) r.count = parse_int(e->value, e->line);
    if (const IniEntry* e = random->find("box")) r.box = parse_number(e->value, e->line);
    if (const IniEntry* e = random->find("seed")) r.seed = parse_seed(e->value, e->line);
    if (r.count < 1) throw SchemaError("random count must be positive", random->line);
    if (!(r.box > 0.0)) throw SchemaError("random box must be positive", random->line);
    config.sampling = r;
  }

  if (const IniSection* a = doc.find("audit")) {
    reject_unknown_keys(*a, {"flavors", "margin", "definiteness", "directions", "seed"});
    if (const IniEntry* e = a->find("flavors")) {
      config.flavors.clear();
      std::string_view rest = e->value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item == "sigma") {
          config.flavors.push_back(StressFlavor::Cauchy);
        } else if (item == "tau") {
          config.flavors.push_back(StressFlavor::Kirchhoff);
        } else {
          throw SchemaError("unknown flavor '" + std::string(item) + "' (use sigma, tau)", e->line);
        }
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      if (config.flavors.empty()) throw SchemaError("flavors list is empty", e->line);
    }
    if (const IniEntry* e = a->find("margin")) config.margin = parse_number(e->value, e->line);
    if (const IniEntry* e = a->find("definiteness")) config.definiteness = parse_number(e->value, e->line);
    if (const IniEntry* e = a->find("directions")) config.directions = parse_int(e->value, e->line);
    if (const IniEntry* e = a->find("seed")) config.seed = parse_seed(e->value, e->line);
    if (config.directions < 50) throw SchemaError("directions must be at least 50", a->line);
    if (!(config.margin >= 0.0)) throw SchemaError("margin must be non-negative", a->line);
  }

  if (const IniSection* o = doc.find("output")) {
    reject_unknown_keys(*o, {"format", "path"});
    if (const IniEntry* e = o->find("format")) {
      if (e->value == "json") {
        config.format = OutputFormat::Json;
      } else if (e->value == "csv") {
        config.format = OutputFormat::Csv;
      } else {
        throw SchemaError("format must be json or csv", e->line);
      }
    }
    if (const IniEntry* e = o->find("path")) {
      std::filesystem::path p(e->value);
      if (p.is_relative()) p = base_dir / p;
      config.output = p;
    }
  }
  return config;
}

ScanConfig load_scan_config(const std::filesystem::path& path) {
  return scan_config_from_ini(parse_ini(read_file(path)), path.parent_path());
}

MaterialLaw scan_material(const ScanConfig& config) { return law_from_config(config.material); }

std::vector<Vector3> scan_states(const ScanConfig& config) {
  std::vector<Vector3> states;
  if (const auto* g = std::get_if<GridSpec>(&config.sampling)) {
    std::vector<double> axis(g->points);
    for (int k = 0; k < g->points; ++k) {
      axis[k] = k + 1 == g->points ? g->max : g->min + (g->max - g->min) * k / (g->points - 1);
    }
    states.reserve(axis.size() * axis.size() * axis.size());
    for (double a : axis) {
      for (double b : axis) {
        for (double c : axis) states.emplace_back(a, b, c);
      }
    }
  } else {
    const auto& r = std::get<RandomSpec>(config.sampling);
    Rng rng(r.seed);
    states.reserve(r.count);
    for (int k = 0; k < r.count; ++k) states.push_back(rng.uniform_vector(-r.box, r.box));
  }
  return states;
}

}  // namespace corostab
