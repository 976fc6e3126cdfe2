#include "partcheck/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "partcheck/csv.hpp"
#include "partcheck/datagen.hpp"
#include "partcheck/errors.hpp"
#include "partcheck/explore.hpp"
#include "partcheck/ltl.hpp"

namespace partcheck {

using nlohmann::json;

EffectiveOptions resolve_options(const ProjectConfig& cfg, const CommonOptions& cli) {
  EffectiveOptions e;
  e.seed = cli.seed.value_or(cfg.analysis.seed);
  e.fit_override = cli.fit ? cli.fit : cfg.analysis.fit;
  e.threshold_override = cli.thresholds ? cli.thresholds : cfg.analysis.thresholds;
  e.out_dir = cfg.resolve(cli.out.value_or(cfg.analysis.out));
  return e;
}

std::vector<RateSample> extract_samples(const ProjectConfig& cfg, const PromoterConfig& p) {
  if (p.data.empty()) {
    throw ConfigError("promoter '" + p.id + "' has no data file configured");
  }
  if (p.reporter.empty()) {
    throw ConfigError("promoter '" + p.id + "' has no reporter gene configured");
  }
  const Gene* reporter = cfg.find_gene(p.reporter);
  TrajectoryFile t = read_trajectory_csv(cfg.resolve(p.data));

  std::vector<RateSample> samples;
  if (p.kind == PromoterKind::kRegulated) {
    std::vector<std::string> cols = {p.regulator, p.reporter};
    for (const auto& cell : split_by_cell(t, cols)) {
      auto rates =
          rates_from_regulated_pair(cell.by_column[0], cell.by_column[1], reporter->alpha);
      samples.insert(samples.end(), rates.begin(), rates.end());
    }
  } else if (p.mode == "population") {
    auto bands = population_bands(t, p.reporter);
    samples = rates_from_population(bands, reporter->alpha);
  } else {
    std::vector<std::string> cols = {p.reporter};
    for (const auto& cell : split_by_cell(t, cols)) {
      auto rates = rates_from_single_cell_trajectory(cell.by_column[0], reporter->alpha);
      samples.insert(samples.end(), rates.begin(), rates.end());
    }
  }
  if (samples.empty()) throw IdentificationError("no rate samples in '" + p.data + "'");
  return samples;
}

namespace {

ThresholdSet thresholds_for(const ProjectConfig& cfg, const PromoterConfig& p,
                            std::span<const RateSample> samples,
                            const EffectiveOptions& opts) {
  const Gene* regulator = cfg.find_gene(p.regulator);
  double lo = regulator->conc_min, hi = regulator->conc_max;

  if (!p.thresholds.values.empty()) {
    ThresholdSet t;
    t.gene = p.regulator;
    t.values = p.thresholds.values;
    double tol = kGeomEps * (1.0 + std::abs(hi));
    if (std::abs(t.values.front() - lo) > tol || std::abs(t.values.back() - hi) > tol) {
      throw ConfigError("promoter '" + p.id +
                        "': explicit thresholds must span the regulator bounds");
    }
    return t;
  }

  int count = opts.threshold_override.value_or(p.thresholds.count);
  if (count <= 0) count = 5;
  if (count == 2) {
    ThresholdSet t;
    t.gene = p.regulator;
    t.values = {lo, hi};
    return t;
  }
  int candidates = std::max(p.thresholds.candidates, count);
  return select_thresholds(samples, p.regulator, lo, hi, candidates, count, opts.seed);
}

}  // namespace

PromoterFit characterize_promoter(const ProjectConfig& cfg, const PromoterConfig& p,
                                  const EffectiveOptions& opts) {
  PromoterFit out;
  out.promoter = p.id;
  out.samples = extract_samples(cfg, p);

  // Constitutive promoters always get the constant range; there is no
  // regulator axis to refine.
  FitKind kind = opts.fit_override.value_or(p.fit);
  if (p.kind == PromoterKind::kConstitutive) kind = FitKind::kConstant;

  switch (kind) {
    case FitKind::kConstant:
      out.map = fit_constant(out.samples);
      break;
    case FitKind::kPiecewiseConstant:
      out.map = fit_piecewise_constant(out.samples, thresholds_for(cfg, p, out.samples, opts));
      break;
    case FitKind::kPiecewiseLinear:
      out.map = fit_piecewise_linear(out.samples, thresholds_for(cfg, p, out.samples, opts));
      break;
  }
  return out;
}

std::string fit_to_json(const PromoterFit& fit) {
  json j;
  j["format_version"] = 1;
  j["promoter"] = fit.promoter;
  j["kind"] = to_string(fit.map.kind);
  if (fit.map.thresholds) {
    j["regulator"] = fit.map.thresholds->gene;
    j["thresholds"] = fit.map.thresholds->values;
  }
  switch (fit.map.kind) {
    case FitKind::kConstant:
      j["range"] = {fit.map.boxes[0].lo, fit.map.boxes[0].hi};
      break;
    case FitKind::kPiecewiseConstant: {
      json boxes = json::array();
      for (const auto& b : fit.map.boxes) boxes.push_back({b.lo, b.hi});
      j["boxes"] = std::move(boxes);
      break;
    }
    case FitKind::kPiecewiseLinear: {
      json traps = json::array();
      for (const auto& t : fit.map.trapezoids) {
        traps.push_back({{"left", {t.left.lo, t.left.hi}}, {"right", {t.right.lo, t.right.hi}}});
      }
      j["trapezoids"] = std::move(traps);
      break;
    }
  }
  json samples = json::array();
  for (const auto& s : fit.samples) {
    if (s.regulator_conc) {
      samples.push_back({s.rate, *s.regulator_conc});
    } else {
      samples.push_back({s.rate});
    }
  }
  j["samples"] = std::move(samples);
  return j.dump(2) + "\n";
}

PromoterFit fit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("fit file is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format_version", 0) != 1) throw ConfigError("unsupported fit format_version");

  PromoterFit fit;
  fit.promoter = j.value("promoter", "");
  fit.map.kind = fit_kind_from_string(j.value("kind", ""));
  if (j.contains("thresholds")) {
    ThresholdSet t;
    t.gene = j.value("regulator", "");
    for (const auto& v : j["thresholds"]) t.values.push_back(v.get<double>());
    fit.map.thresholds = std::move(t);
  }
  switch (fit.map.kind) {
    case FitKind::kConstant:
      fit.map.boxes = {{j["range"][0].get<double>(), j["range"][1].get<double>()}};
      break;
    case FitKind::kPiecewiseConstant:
      for (const auto& b : j["boxes"]) {
        fit.map.boxes.push_back({b[0].get<double>(), b[1].get<double>()});
      }
      break;
    case FitKind::kPiecewiseLinear:
      for (const auto& t : j["trapezoids"]) {
        RangeMap::EndpointIntervals e;
        e.left = {t["left"][0].get<double>(), t["left"][1].get<double>()};
        e.right = {t["right"][0].get<double>(), t["right"][1].get<double>()};
        fit.map.trapezoids.push_back(e);
      }
      break;
  }
  for (const auto& s : j.value("samples", json::array())) {
    RateSample r;
    r.rate = s[0].get<double>();
    if (s.size() > 1) r.regulator_conc = s[1].get<double>();
    fit.samples.push_back(r);
  }

  // Capture guarantee, re-checked at load: every stored sample must lie in
  // the fitted set.
  for (const auto& s : fit.samples) {
    if (fit.map.kind == FitKind::kConstant) {
      if (!fit.map.boxes[0].contains(s.rate)) {
        throw ConfigError("fit file violates the capture guarantee (rate " +
                          std::to_string(s.rate) + ")");
      }
      continue;
    }
    if (!s.regulator_conc) {
      throw ConfigError("piecewise fit with an unregulated sample");
    }
    const auto& th = fit.map.thresholds->values;
    bool captured = true;
    for (int i = 0; i < fit.map.interval_count(); ++i) {
      if (*s.regulator_conc < th[i] || *s.regulator_conc > th[i + 1]) continue;
      if (!slice(fit.map, *s.regulator_conc, i).contains(s.rate)) captured = false;
    }
    if (!captured) {
      throw ConfigError("fit file violates the capture guarantee at regulator " +
                        std::to_string(*s.regulator_conc));
    }
  }
  return fit;
}

std::map<std::string, PromoterFit> resolve_fits(const ProjectConfig& cfg,
                                                const DeviceConfig& dev,
                                                const EffectiveOptions& opts) {
  std::vector<std::string> ids;
  for (const auto& w : dev.wiring) ids.push_back(w.promoter);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::map<std::string, PromoterFit> fits;
  for (const auto& id : ids) {
    const PromoterConfig* p = cfg.find_promoter(id);
    if (!p) throw ConfigError("unknown promoter '" + id + "'");
    std::filesystem::path file = opts.out_dir / "fits" / (id + ".fit.json");
    if (std::filesystem::exists(file)) {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      fits.emplace(id, fit_from_json(ss.str()));
    } else {
      fits.emplace(id, characterize_promoter(cfg, *p, opts));
    }
  }
  return fits;
}

BuiltModel build_model(const ProjectConfig& cfg, const DeviceConfig& dev,
                       const std::map<std::string, PromoterFit>& fits,
                       std::vector<std::string>* warnings) {
  std::vector<Gene> genes;
  for (const auto& w : dev.wiring) {
    const Gene* g = cfg.find_gene(w.gene);
    if (!g) throw ConfigError("unknown gene '" + w.gene + "'");
    genes.push_back(*g);
  }

  std::vector<Promoter> promoters;
  for (const auto& w : dev.wiring) {
    const PromoterConfig* pc = cfg.find_promoter(w.promoter);
    if (!pc) throw ConfigError("unknown promoter '" + w.promoter + "'");
    auto it = fits.find(w.promoter);
    if (it == fits.end()) throw ConfigError("no fit available for promoter '" + w.promoter + "'");
    Promoter p;
    p.id = pc->id;
    p.kind = pc->kind;
    p.regulator = pc->regulator;
    p.range = it->second.map;
    promoters.push_back(std::move(p));
  }

  BuiltModel model;
  model.device = Device::assemble(genes, promoters, dev.wiring, warnings);

  for (const auto& pc : cfg.propositions) {
    if (static_cast<int>(pc.c.size()) != model.device.size()) continue;
    Proposition p;
    p.name = pc.name;
    p.c = Vec(model.device.size());
    for (int i = 0; i < model.device.size(); ++i) p.c[i] = pc.c[i];
    p.d = pc.d;
    model.props.push_back(std::move(p));
  }

  model.regions = partition(model.device, partition_axes_for(model.device), model.props);
  model.quotient = build_quotient(model.device, model.regions, model.props);
  return model;
}

VerifyReport run_verification(const ProjectConfig& cfg, const DeviceConfig& dev,
                              const SpecificationConfig& spec,
                              const std::map<std::string, PromoterFit>& fits,
                              const BuiltModel& model) {
  std::vector<std::string> atom_names;
  for (const auto& p : model.props) atom_names.push_back(p.name);
  ltl::FormulaPtr formula;
  try {
    formula = ltl::parse(spec.formula, atom_names);
  } catch (const SyntaxError& e) {
    throw ConfigError("specification '" + spec.name + "': " + e.what());
  }

  ModelCheckResult mc = model_check(model.quotient, formula);
  double space_volume = model.device.state_space().volume();
  VerificationResult vr = regions_and_volumes(mc, model.quotient, model.regions, space_volume);

  VerifyReport report;
  report.device_name = dev.name;
  report.spec_name = spec.name;
  report.formula = spec.formula;
  std::set<std::string> kinds;
  for (const auto& [id, fit] : fits) kinds.insert(to_string(fit.map.kind));
  for (auto it = kinds.begin(); it != kinds.end(); ++it) {
    report.fit_kind += (it == kinds.begin() ? "" : "+") + *it;
  }
  report.region_count = static_cast<int>(model.regions.size());
  report.space_volume = space_volume;
  report.result = std::move(vr);
  for (const auto& r : model.regions) {
    report.region_volumes.push_back(r.polytope.volume());
    report.region_labels.push_back(model.quotient.labels[r.id]);
  }
  return report;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

int fail_with(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 1;
}

}  // namespace

int cmd_characterize(const CommonOptions& cli, const std::string& promoter) {
  try {
    ProjectConfig cfg = load_config(cli.config_path);
    const PromoterConfig* p = cfg.find_promoter(promoter);
    if (!p) throw ConfigError("unknown promoter '" + promoter + "'");
    EffectiveOptions opts = resolve_options(cfg, cli);

    PromoterFit fit = characterize_promoter(cfg, *p, opts);
    std::filesystem::path file = opts.out_dir / "fits" / (promoter + ".fit.json");
    write_file(file, fit_to_json(fit));

    std::cout << "promoter " << promoter << ": fit=" << to_string(fit.map.kind)
              << " samples=" << fit.samples.size() << "\n";
    if (fit.map.thresholds) {
      std::cout << "thresholds:";
      for (double v : fit.map.thresholds->values) std::cout << " " << v;
      std::cout << "\ninterval areas:";
      double total = 0.0;
      for (int i = 0; i < fit.map.interval_count(); ++i) {
        double a = interval_area(fit.map, i);
        total += a;
        std::cout << " " << a;
      }
      std::cout << "  (total " << total << ")\n";
    } else {
      std::cout << "range: [" << fit.map.boxes[0].lo << ", " << fit.map.boxes[0].hi << "]\n";
    }
    std::cout << "wrote " << file.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    return fail_with(e);
  }
}

int cmd_simulate(const CommonOptions& cli, const std::string& promoter, int cells, int steps) {
  try {
    ProjectConfig cfg = load_config(cli.config_path);
    const PromoterConfig* p = cfg.find_promoter(promoter);
    if (!p) throw ConfigError("unknown promoter '" + promoter + "'");
    if (p->data.empty()) {
      throw ConfigError("promoter '" + promoter + "' has no data path to write to");
    }
    EffectiveOptions opts = resolve_options(cfg, cli);

    TrajectoryFile t = simulate_characterization(cfg, promoter, cells, steps, opts.seed);
    std::ostringstream os;
    write_trajectory_csv(os, t);
    write_file(cfg.resolve(p->data), os.str());
    std::cout << "wrote " << cfg.resolve(p->data).string() << " (cells=" << cells
              << ", steps=" << steps << ", seed=" << opts.seed << ")\n";
    return 0;
  } catch (const std::exception& e) {
    return fail_with(e);
  }
}

int cmd_verify(const CommonOptions& cli, const std::string& device, const std::string& spec,
               std::optional<double> min_satisfying) {
  try {
    ProjectConfig cfg = load_config(cli.config_path);
    const DeviceConfig* dev = cfg.find_device(device);
    if (!dev) throw ConfigError("unknown device '" + device + "'");
    const SpecificationConfig* sc = cfg.find_specification(spec);
    if (!sc) throw ConfigError("unknown specification '" + spec + "'");
    EffectiveOptions opts = resolve_options(cfg, cli);

    auto fits = resolve_fits(cfg, *dev, opts);
    std::vector<std::string> warnings;
    BuiltModel model = build_model(cfg, *dev, fits, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    VerifyReport report = run_verification(cfg, *dev, *sc, fits, model);
    write_verify_text(std::cout, report);
    std::ostringstream text;
    write_verify_text(text, report);
    write_file(opts.out_dir / ("verify_" + device + "_" + spec + ".txt"), text.str());
    write_file(opts.out_dir / ("verify_" + device + "_" + spec + ".json"),
               verify_report_json(report));

    if (min_satisfying && report.result.sat_fraction < *min_satisfying) {
      std::cerr << "satisfying fraction " << format_percent(report.result.sat_fraction)
                << " below the required " << format_percent(*min_satisfying) << "\n";
      return 2;
    }
    return 0;
  } catch (const std::exception& e) {
    return fail_with(e);
  }
}

int cmd_explore(const CommonOptions& cli, const std::string& topology,
                const std::vector<std::string>& specs) {
  try {
    ProjectConfig cfg = load_config(cli.config_path);
    if (topology != "mutual-repression") {
      throw ConfigError("unknown topology '" + topology + "' (supported: mutual-repression)");
    }
    EffectiveOptions opts = resolve_options(cfg, cli);

    std::vector<std::string> spec_names = specs;
    if (spec_names.empty()) {
      for (const auto& s : cfg.specifications) spec_names.push_back(s.name);
    }
    if (spec_names.empty()) throw ConfigError("no specifications to check");

    auto entries = explore_candidates(cfg, spec_names, opts);
    write_explore_text(std::cout, entries);
    std::ostringstream text;
    write_explore_text(text, entries);
    write_file(opts.out_dir / "explore.txt", text.str());
    write_file(opts.out_dir / "explore.json", explore_json(entries));
    return 0;
  } catch (const std::exception& e) {
    return fail_with(e);
  }
}

int cmd_export_quotient(const CommonOptions& cli, const std::string& device,
                        const std::optional<std::string>& spec) {
  try {
    ProjectConfig cfg = load_config(cli.config_path);
    const DeviceConfig* dev = cfg.find_device(device);
    if (!dev) throw ConfigError("unknown device '" + device + "'");
    EffectiveOptions opts = resolve_options(cfg, cli);

    auto fits = resolve_fits(cfg, *dev, opts);
    BuiltModel model = build_model(cfg, *dev, fits);

    std::ostringstream os;
    if (spec) {
      const SpecificationConfig* sc = cfg.find_specification(*spec);
      if (!sc) throw ConfigError("unknown specification '" + *spec + "'");
      VerifyReport report = run_verification(cfg, *dev, *sc, fits, model);
      write_dot(os, model.quotient, &report.result.mc.verdict);
    } else {
      write_dot(os, model.quotient);
    }
    std::filesystem::path file = opts.out_dir / ("quotient_" + device + ".dot");
    write_file(file, os.str());
    std::cout << "wrote " << file.string() << " (" << model.quotient.state_count()
              << " states)\n";
    return 0;
  } catch (const std::exception& e) {
    return fail_with(e);
  }
}

}  // namespace partcheck
