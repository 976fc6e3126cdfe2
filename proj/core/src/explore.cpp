#include "partcheck/explore.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <set>

#include <json.hpp>

#include "partcheck/errors.hpp"

namespace partcheck {

using nlohmann::json;

DeviceConfig ToggleCandidate::device_config() const {
  DeviceConfig d;
  d.name = name;
  d.wiring = {{gene_a, promoter_for_a}, {gene_b, promoter_for_b}};
  return d;
}

std::vector<ToggleCandidate> enumerate_mutual_repression(const ProjectConfig& cfg) {
  // Promoters by regulator, ids sorted for canonical output.
  std::map<std::string, std::vector<std::string>> repressed_by;
  for (const auto& p : cfg.promoters) {
    if (p.kind == PromoterKind::kRegulated) repressed_by[p.regulator].push_back(p.id);
  }
  for (auto& [gene, ids] : repressed_by) std::sort(ids.begin(), ids.end());

  std::vector<std::string> gene_ids;
  for (const auto& g : cfg.genes) gene_ids.push_back(g.id);
  std::sort(gene_ids.begin(), gene_ids.end());

  std::vector<ToggleCandidate> out;
  for (std::size_t i = 0; i < gene_ids.size(); ++i) {
    for (std::size_t j = i + 1; j < gene_ids.size(); ++j) {
      const std::string& a = gene_ids[i];
      const std::string& b = gene_ids[j];
      auto pa = repressed_by.find(b);  // promoter for a must be repressed by b
      auto pb = repressed_by.find(a);
      if (pa == repressed_by.end() || pb == repressed_by.end()) continue;
      for (const auto& pfa : pa->second) {
        for (const auto& pfb : pb->second) {
          ToggleCandidate c;
          c.gene_a = a;
          c.gene_b = b;
          c.promoter_for_a = pfa;
          c.promoter_for_b = pfb;
          c.name = a + "<-" + pfa + "," + b + "<-" + pfb;
          out.push_back(std::move(c));
        }
      }
    }
  }
  return out;
}

std::vector<ExploreEntry> explore_candidates(const ProjectConfig& cfg,
                                             const std::vector<std::string>& spec_names,
                                             const EffectiveOptions& opts) {
  std::vector<const SpecificationConfig*> specs;
  for (const auto& name : spec_names) {
    const SpecificationConfig* s = cfg.find_specification(name);
    if (!s) throw ConfigError("unknown specification '" + name + "'");
    specs.push_back(s);
  }

  auto candidates = enumerate_mutual_repression(cfg);

  // Fit every promoter any candidate uses, once.
  std::set<std::string> promoter_ids;
  for (const auto& c : candidates) {
    promoter_ids.insert(c.promoter_for_a);
    promoter_ids.insert(c.promoter_for_b);
  }
  std::map<std::string, PromoterFit> fits;
  for (const auto& id : promoter_ids) {
    fits.emplace(id, characterize_promoter(cfg, *cfg.find_promoter(id), opts));
  }

  std::vector<ExploreEntry> entries(candidates.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      ExploreEntry e;
      e.candidate = candidates[i];
      DeviceConfig dev = candidates[i].device_config();
      BuiltModel model = build_model(cfg, dev, fits);
      bool first = true;
      for (const SpecificationConfig* s : specs) {
        VerifyReport r = run_verification(cfg, dev, *s, fits, model);
        double sat = r.result.sat_fraction, viol = r.result.viol_fraction;
        e.min_sat = first ? sat : std::min(e.min_sat, sat);
        e.max_viol = first ? viol : std::max(e.max_viol, viol);
        first = false;
        e.per_spec.emplace_back(s->name, std::move(r));
      }
      entries[i] = std::move(e);
    }));
  }
  for (auto& j : jobs) j.get();

  std::stable_sort(entries.begin(), entries.end(), [](const ExploreEntry& a, const ExploreEntry& b) {
    if (a.min_sat != b.min_sat) return a.min_sat > b.min_sat;
    if (a.max_viol != b.max_viol) return a.max_viol < b.max_viol;
    return a.candidate.name < b.candidate.name;
  });
  return entries;
}

void write_explore_text(std::ostream& os, const std::vector<ExploreEntry>& entries) {
  if (entries.empty()) {
    os << "no candidates for this topology in the parts pool\n";
    return;
  }
  os << "rank  candidate";
  const auto& specs = entries[0].per_spec;
  for (const auto& [name, r] : specs) os << "  " << name << "(sat/viol)";
  os << "  min-sat\n";
  int rank = 1;
  for (const auto& e : entries) {
    os << rank++ << "  " << e.candidate.name;
    for (const auto& [name, r] : e.per_spec) {
      os << "  " << format_percent(r.result.sat_fraction) << "/"
         << format_percent(r.result.viol_fraction);
    }
    os << "  " << format_percent(e.min_sat) << "\n";
  }
}

std::string explore_json(const std::vector<ExploreEntry>& entries) {
  json j = json::array();
  for (const auto& e : entries) {
    json ej;
    ej["candidate"] = e.candidate.name;
    ej["wiring"] = {{{"gene", e.candidate.gene_a}, {"promoter", e.candidate.promoter_for_a}},
                    {{"gene", e.candidate.gene_b}, {"promoter", e.candidate.promoter_for_b}}};
    ej["min_satisfying"] = e.min_sat;
    ej["max_violating"] = e.max_viol;
    json per_spec = json::object();
    for (const auto& [name, r] : e.per_spec) {
      per_spec[name] = {{"satisfying", r.result.sat_fraction},
                        {"violating", r.result.viol_fraction},
                        {"undecided", r.result.undecided_fraction}};
    }
    ej["specifications"] = std::move(per_spec);
    j.push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

}  // namespace partcheck
