#include "partcheck/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "partcheck/errors.hpp"
#include "partcheck/ltl.hpp"

namespace partcheck {

using nlohmann::json;

const Gene* ProjectConfig::find_gene(const std::string& id) const {
  for (const auto& g : genes) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

const PromoterConfig* ProjectConfig::find_promoter(const std::string& id) const {
  for (const auto& p : promoters) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const DeviceConfig* ProjectConfig::find_device(const std::string& name) const {
  for (const auto& d : devices) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const SpecificationConfig* ProjectConfig::find_specification(const std::string& name) const {
  for (const auto& s : specifications) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::filesystem::path ProjectConfig::resolve(const std::string& rel) const {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base_dir / p;
}

FitKind fit_kind_from_string(const std::string& s) {
  if (s == "constant") return FitKind::kConstant;
  if (s == "pwc" || s == "piecewise-constant") return FitKind::kPiecewiseConstant;
  if (s == "pwl" || s == "piecewise-linear") return FitKind::kPiecewiseLinear;
  throw ConfigError("unknown fit kind '" + s + "' (expected constant|pwc|pwl)");
}

std::string to_string(FitKind kind) {
  switch (kind) {
    case FitKind::kConstant:
      return "constant";
    case FitKind::kPiecewiseConstant:
      return "pwc";
    case FitKind::kPiecewiseLinear:
      return "pwl";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

double need_number(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number()) fail(ctx + ": missing numeric '" + key + "'");
  return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_string()) fail(ctx + ": missing string '" + key + "'");
  return j[key].get<std::string>();
}

GeneratorConfig parse_generator(const json& j, const std::string& ctx) {
  GeneratorConfig g;
  g.hill_n = j.value("hill_n", g.hill_n);
  g.k = j.value("K", j.value("k", g.k));
  g.beta_max = need_number(j, "beta_max", ctx);
  g.beta_leak = j.value("beta_leak", g.beta_leak);
  g.noise_sd = j.value("noise_sd", g.noise_sd);
  g.regulator_init = j.value("regulator_init", g.regulator_init);
  g.reporter_init = j.value("reporter_init", g.reporter_init);
  if (g.noise_sd < 0) fail(ctx + ": noise_sd must be nonnegative");
  return g;
}

}  // namespace

ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config is not valid JSON: " + std::string(e.what()));
  }

  ProjectConfig cfg;
  cfg.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    fail("config needs an integer format_version");
  }
  cfg.format_version = j["format_version"].get<int>();
  if (cfg.format_version != 1) {
    fail("unsupported format_version " + std::to_string(cfg.format_version));
  }

  std::set<std::string> gene_ids;
  for (const auto& gj : j.value("genes", json::array())) {
    Gene g;
    g.id = need_string(gj, "id", "gene");
    g.alpha = need_number(gj, "alpha", "gene " + g.id);
    g.conc_min = need_number(gj, "min", "gene " + g.id);
    g.conc_max = need_number(gj, "max", "gene " + g.id);
    if (!(g.alpha > 0 && g.alpha < 1)) fail("gene " + g.id + ": alpha must be in (0,1)");
    if (!(g.conc_min < g.conc_max)) fail("gene " + g.id + ": min must be below max");
    if (!gene_ids.insert(g.id).second) fail("duplicate gene id '" + g.id + "'");
    cfg.genes.push_back(std::move(g));
  }

  std::set<std::string> promoter_ids;
  for (const auto& pj : j.value("promoters", json::array())) {
    PromoterConfig p;
    p.id = need_string(pj, "id", "promoter");
    const std::string ctx = "promoter " + p.id;
    std::string kind = need_string(pj, "kind", ctx);
    if (kind == "constitutive") {
      p.kind = PromoterKind::kConstitutive;
    } else if (kind == "regulated") {
      p.kind = PromoterKind::kRegulated;
    } else {
      fail(ctx + ": kind must be constitutive|regulated");
    }
    if (p.kind == PromoterKind::kRegulated) {
      p.regulator = need_string(pj, "regulator", ctx);
      if (!gene_ids.count(p.regulator)) fail(ctx + ": unknown regulator '" + p.regulator + "'");
    } else if (pj.contains("regulator")) {
      fail(ctx + ": constitutive promoters take no regulator");
    }
    p.data = pj.value("data", "");
    p.reporter = pj.value("reporter", "");
    if (!p.reporter.empty() && !gene_ids.count(p.reporter)) {
      fail(ctx + ": unknown reporter gene '" + p.reporter + "'");
    }
    p.mode = pj.value("mode", "single_cell");
    if (p.mode != "single_cell" && p.mode != "population") {
      fail(ctx + ": mode must be single_cell|population");
    }
    if (p.mode == "population" && p.kind == PromoterKind::kRegulated) {
      fail(ctx + ": population mode needs paired cells and is constitutive-only");
    }
    if (pj.contains("fit")) p.fit = fit_kind_from_string(pj["fit"].get<std::string>());
    if (pj.contains("thresholds")) {
      const auto& tj = pj["thresholds"];
      if (tj.contains("values")) {
        for (const auto& v : tj["values"]) p.thresholds.values.push_back(v.get<double>());
        if (p.thresholds.values.size() < 2) fail(ctx + ": explicit thresholds need >= 2 values");
      }
      p.thresholds.count = tj.value("count", 0);
      p.thresholds.candidates = tj.value("candidates", 50);
    }
    if (pj.contains("generator")) p.generator = parse_generator(pj["generator"], ctx);
    if (!promoter_ids.insert(p.id).second) fail("duplicate promoter id '" + p.id + "'");
    cfg.promoters.push_back(std::move(p));
  }

  std::set<std::string> device_names;
  for (const auto& dj : j.value("devices", json::array())) {
    DeviceConfig d;
    d.name = need_string(dj, "name", "device");
    for (const auto& wj : dj.value("wiring", json::array())) {
      WiringEntry w;
      w.gene = need_string(wj, "gene", "device " + d.name + " wiring");
      w.promoter = need_string(wj, "promoter", "device " + d.name + " wiring");
      if (!gene_ids.count(w.gene)) fail("device " + d.name + ": unknown gene '" + w.gene + "'");
      if (!promoter_ids.count(w.promoter)) {
        fail("device " + d.name + ": unknown promoter '" + w.promoter + "'");
      }
      d.wiring.push_back(std::move(w));
    }
    if (!device_names.insert(d.name).second) fail("duplicate device name '" + d.name + "'");
    cfg.devices.push_back(std::move(d));
  }

  std::vector<std::string> prop_names;
  for (const auto& pj : j.value("propositions", json::array())) {
    PropositionConfig p;
    p.name = need_string(pj, "name", "proposition");
    if (!pj.contains("c") || !pj["c"].is_array()) fail("proposition " + p.name + ": needs c[]");
    for (const auto& v : pj["c"]) p.c.push_back(v.get<double>());
    p.d = pj.value("d", 0.0);
    if (std::find(prop_names.begin(), prop_names.end(), p.name) != prop_names.end()) {
      fail("duplicate proposition name '" + p.name + "'");
    }
    prop_names.push_back(p.name);
    cfg.propositions.push_back(std::move(p));
  }

  std::set<std::string> spec_names;
  for (const auto& sj : j.value("specifications", json::array())) {
    SpecificationConfig s;
    s.name = need_string(sj, "name", "specification");
    s.formula = need_string(sj, "formula", "specification " + s.name);
    try {
      ltl::parse(s.formula, prop_names);
    } catch (const SyntaxError& e) {
      fail("specification " + s.name + ": " + e.what());
    }
    if (!spec_names.insert(s.name).second) fail("duplicate specification name '" + s.name + "'");
    cfg.specifications.push_back(std::move(s));
  }

  if (j.contains("analysis")) {
    const auto& aj = j["analysis"];
    cfg.analysis.seed = aj.value("seed", 0ull);
    if (aj.contains("fit")) cfg.analysis.fit = fit_kind_from_string(aj["fit"].get<std::string>());
    if (aj.contains("thresholds")) cfg.analysis.thresholds = aj["thresholds"].get<int>();
    cfg.analysis.out = aj.value("out", cfg.analysis.out);
  }

  return cfg;
}

}  // namespace partcheck
