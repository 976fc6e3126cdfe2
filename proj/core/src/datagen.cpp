#include "partcheck/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "partcheck/errors.hpp"
#include "partcheck/rng.hpp"

namespace partcheck {
namespace {

// Box-Muller from the portable uniform; truncated to +-3 sigma by rejection.
double truncated_gaussian(std::mt19937_64& rng, double sd) {
  if (sd <= 0.0) return 0.0;
  for (;;) {
    double u1 = std::max(uniform_unit(rng), 1e-300);
    double u2 = uniform_unit(rng);
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    if (std::abs(z) <= 3.0) return sd * z;
  }
}

double hill_repression(const GeneratorConfig& g, double repressor) {
  double kn = std::pow(g.k, g.hill_n);
  double xn = std::pow(std::max(repressor, 0.0), g.hill_n);
  return g.beta_leak + (g.beta_max - g.beta_leak) * kn / (kn + xn);
}

}  // namespace

TrajectoryFile simulate_characterization(const ProjectConfig& cfg,
                                         const std::string& promoter_id, int cells, int steps,
                                         std::uint64_t seed) {
  const PromoterConfig* p = cfg.find_promoter(promoter_id);
  if (!p) throw ConfigError("unknown promoter '" + promoter_id + "'");
  if (!p->generator) throw ConfigError("promoter '" + promoter_id + "' has no generator");
  if (cells < 1 || steps < 1) throw ArgumentError("cells and steps must be positive");
  if (p->reporter.empty()) throw ConfigError("promoter '" + promoter_id + "' needs a reporter");
  const Gene* reporter = cfg.find_gene(p->reporter);
  if (!reporter) throw ConfigError("unknown reporter gene '" + p->reporter + "'");

  const GeneratorConfig& gen = *p->generator;
  const bool regulated = p->kind == PromoterKind::kRegulated;
  const Gene* regulator = regulated ? cfg.find_gene(p->regulator) : nullptr;

  double reg0 = gen.regulator_init;
  if (regulated && reg0 < 0.0) reg0 = regulator->conc_max;

  TrajectoryFile t;
  if (regulated) t.columns.push_back(regulator->id);
  t.columns.push_back(reporter->id);

  for (int c = 0; c < cells; ++c) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    double rep = gen.reporter_init;
    double reg = reg0;
    for (int k = 0; k <= steps; ++k) {
      TrajectoryFile::Row row;
      row.cell = "c" + std::to_string(c);
      row.step = k;
      if (regulated) row.values.push_back(reg);
      row.values.push_back(rep);
      t.rows.push_back(std::move(row));

      double base = regulated ? hill_repression(gen, reg) : gen.beta_max;
      double production = std::max(0.0, base + truncated_gaussian(rng, gen.noise_sd));
      rep = reporter->alpha * rep + production;
      if (regulated) reg = regulator->alpha * reg;  // pure decay, no production
    }
  }
  return t;
}

}  // namespace partcheck
