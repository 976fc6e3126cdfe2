#include "partcheck/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace partcheck {

using nlohmann::json;

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * fraction);
  return buf;
}

namespace {

std::string lasso_string(const WitnessLasso& l, int out_state) {
  auto name = [&](int s) {
    return s == out_state ? std::string("OUT") : "r" + std::to_string(s);
  };
  std::string s;
  for (int v : l.prefix) s += name(v) + " -> ";
  s += "(";
  for (std::size_t i = 0; i < l.cycle.size(); ++i) {
    s += (i ? " -> " : "") + name(l.cycle[i]);
  }
  s += ")^w";
  return s;
}

}  // namespace

void write_verify_text(std::ostream& os, const VerifyReport& r) {
  os << "device:        " << r.device_name << "\n";
  os << "specification: " << r.spec_name << " = " << r.formula << "\n";
  os << "fit:           " << r.fit_kind << "\n";
  os << "regions:       " << r.region_count << " (+ OUT)\n";
  os << "satisfying:    " << format_percent(r.result.sat_fraction) << "\n";
  os << "violating:     " << format_percent(r.result.viol_fraction) << "\n";
  os << "undecided:     " << format_percent(r.result.undecided_fraction) << "\n";
  os << "OUT-reaching:  " << format_percent(r.result.out_reaching_fraction)
     << " of the space can leave it\n";

  os << "\nper-region verdicts:\n";
  for (int i = 0; i < r.region_count; ++i) {
    const char v = r.result.mc.verdict[i];
    os << "  r" << i << ": " << (v == 's' ? "satisfying" : v == 'v' ? "violating" : "undecided");
    os << "  vol=" << format_percent(r.region_volumes[i] / r.space_volume);
    os << "  labels={";
    for (std::size_t k = 0; k < r.region_labels[i].size(); ++k) {
      os << (k ? "," : "") << r.region_labels[i][k];
    }
    os << "}";
    if (r.result.out_reaching[i]) os << "  [can reach OUT]";
    os << "\n";
  }

  if (!r.result.mc.witnesses.empty()) {
    os << "\nviolation witnesses:\n";
    for (const auto& [region, lasso] : r.result.mc.witnesses) {
      os << "  r" << region << ": " << lasso_string(lasso, r.region_count) << "\n";
    }
  }
}

std::string verify_report_json(const VerifyReport& r) {
  json j;
  j["device"] = r.device_name;
  j["specification"] = r.spec_name;
  j["formula"] = r.formula;
  j["fit"] = r.fit_kind;
  j["region_count"] = r.region_count;
  j["fractions"] = {{"satisfying", r.result.sat_fraction},
                    {"violating", r.result.viol_fraction},
                    {"undecided", r.result.undecided_fraction},
                    {"out_reaching", r.result.out_reaching_fraction}};
  json regions = json::array();
  for (int i = 0; i < r.region_count; ++i) {
    json rj;
    rj["id"] = i;
    rj["verdict"] = std::string(1, r.result.mc.verdict[i]);
    rj["volume"] = r.region_volumes[i];
    rj["labels"] = r.region_labels[i];
    rj["can_reach_out"] = static_cast<bool>(r.result.out_reaching[i]);
    auto it = r.result.mc.witnesses.find(i);
    if (it != r.result.mc.witnesses.end()) {
      rj["witness"] = {{"prefix", it->second.prefix}, {"cycle", it->second.cycle}};
    }
    regions.push_back(std::move(rj));
  }
  j["regions"] = std::move(regions);
  return j.dump(2) + "\n";
}

}  // namespace partcheck
