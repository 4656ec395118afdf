#include "corostab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "corostab/errors.hpp"

namespace corostab {

namespace {

Json vec(const Vector3& v) { return Json::array({v(0), v(1), v(2)}); }

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(2 * (indent + 1), ' ');
  const std::string close(2 * indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        emit(value, out, indent + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      const bool inline_numbers =
          j.size() <= 6 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); });
      if (inline_numbers) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out += ", ";
          emit(j[k], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        emit(j[k], out, indent + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const char* flavor_key(StressFlavor f) { return to_string(f); }

}  // namespace

Json config_to_json(const ScanConfig& config) {
  Json material;
  material["kind"] = to_string(config.material.kind);
  material["name"] = config.material.name;
  if (config.material_file) material["file"] = config.material_file->string();
  material["variables"] =
      config.material.variables == VariableSpace::LogStretch ? "log-stretch" : "green-lagrange";
  Json params = Json::object();
  for (const auto& [k, v] : config.material.parameters) params[k] = v;
  material["parameters"] = params;
  Json exprs = Json::object();
  for (const auto& [k, v] : config.material.expressions) exprs[k] = v;
  material["expressions"] = exprs;

  Json j;
  j["material"] = material;
  if (const auto* g = std::get_if<GridSpec>(&config.sampling)) {
    j["grid"] = {{"min", g->min}, {"max", g->max}, {"points", g->points}};
  } else {
    const auto& r = std::get<RandomSpec>(config.sampling);
    j["random"] = {{"count", r.count}, {"box", r.box}, {"seed", r.seed}};
  }
  Json flavors = Json::array();
  for (StressFlavor f : config.flavors) flavors.push_back(flavor_key(f));
  j["audit"] = {{"flavors", flavors},
                {"margin", config.margin},
                {"definiteness", config.definiteness},
                {"directions", config.directions},
                {"seed", config.seed}};
  j["format"] = config.format == OutputFormat::Json ? "json" : "csv";
  return j;
}

Json record_to_json(const StateRecord& r) {
  Json j;
  j["index"] = r.index;
  j["x"] = vec(r.x);
  j["stretches"] = vec(r.stretches);
  j["J"] = r.J;
  j["sigma"] = vec(r.sigma);
  j["tau"] = vec(r.tau);
  Json be;
  be["pass"] = r.be.pass;
  be["margin"] = r.be.margin ? Json(*r.be.margin) : Json(nullptr);
  be["worst_pair"] = r.be.worst_pair ? Json::array({(*r.be.worst_pair)[0], (*r.be.worst_pair)[1]}) : Json(nullptr);
  j["be"] = be;
  Json flavors = Json::object();
  for (const FlavorRecord& f : r.flavors) {
    flavors[flavor_key(f.flavor)] = {{"lambda_min", f.lambda_min},
                                     {"csp_exact", f.csp_exact},
                                     {"csp_sampled", f.csp_sampled},
                                     {"block_min", f.block_min},
                                     {"lambda_verdict", to_string(f.lambda_verdict)},
                                     {"csp_verdict", to_string(f.csp_verdict)},
                                     {"verdict", to_string(f.verdict)},
                                     {"consistent", f.consistent},
                                     {"sampling_consistent", f.sampling_consistent},
                                     {"implication_ok", f.implication_ok}};
  }
  j["flavors"] = flavors;
  return j;
}

Json report_to_json(const ScanConfig& config, const AuditReport& report, const OracleStats& oracles) {
  Json j;
  j["schema"] = kReportSchema;
  j["config"] = config_to_json(config);
  Json states = Json::array();
  for (const StateRecord& r : report.records) states.push_back(record_to_json(r));
  j["states"] = states;

  const double n = static_cast<double>(report.records.size());
  Json summary;
  summary["states"] = report.records.size();
  summary["consistent"] = report.consistent();
  summary["be_failures"] = report.be_failures;
  Json flavors = Json::object();
  for (const FlavorSummary& s : report.summaries) {
    Json f;
    f["pass"] = s.pass;
    f["fail"] = s.fail;
    f["marginal"] = s.marginal;
    f["pass_fraction"] = n > 0 ? s.pass / n : 0.0;
    f["fail_fraction"] = n > 0 ? s.fail / n : 0.0;
    f["marginal_fraction"] = n > 0 ? s.marginal / n : 0.0;
    f["inconsistent"] = s.inconsistent;
    f["sampling_mismatches"] = s.sampling_mismatches;
    f["implication_violations"] = s.implication_violations;
    if (s.worst_state) {
      const StateRecord& w = report.records[*s.worst_state];
      f["worst_state"] = {{"index", w.index}, {"x", vec(w.x)}};
    } else {
      f["worst_state"] = nullptr;
    }
    flavors[flavor_key(s.flavor)] = f;
  }
  summary["flavors"] = flavors;
  j["summary"] = summary;
  j["oracles"] = {{"samples", oracles.samples},
                  {"q1_route_max", oracles.q1_route_max},
                  {"form_route_max", oracles.form_route_max},
                  {"sampling_gap_min", oracles.sampling_gap_min}};
  return j;
}

std::string dump_json(const Json& value) {
  std::string out;
  emit(value, out, 0);
  out += "\n";
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
}

std::string report_to_csv(const AuditReport& report) {
  std::string out = "index,x1,x2,x3,lambda1,lambda2,lambda3,J,sigma1,sigma2,sigma3,tau1,tau2,tau3,be_pass,be_margin";
  if (!report.records.empty()) {
    for (const FlavorRecord& f : report.records.front().flavors) {
      const std::string k = flavor_key(f.flavor);
      for (const char* col : {"lambda_min", "csp_exact", "csp_sampled", "verdict", "consistent"}) {
        out += "," + std::string(col) + "_" + k;
      }
    }
  }
  out += "\n";
  for (const StateRecord& r : report.records) {
    out += std::to_string(r.index);
    auto add = [&](double v) { out += "," + (std::isfinite(v) ? number(v) : std::string()); };
    for (int i = 0; i < 3; ++i) add(r.x(i));
    for (int i = 0; i < 3; ++i) add(r.stretches(i));
    add(r.J);
    for (int i = 0; i < 3; ++i) add(r.sigma(i));
    for (int i = 0; i < 3; ++i) add(r.tau(i));
    out += r.be.pass ? ",1" : ",0";
    out += ",";
    if (r.be.margin) out += number(*r.be.margin);
    for (const FlavorRecord& f : r.flavors) {
      add(f.lambda_min);
      add(f.csp_exact);
      add(f.csp_sampled);
      out += ",";
      out += to_string(f.verdict);
      out += f.consistent ? ",1" : ",0";
    }
    out += "\n";
  }
  return out;
}

}  // namespace corostab
