#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "partcheck/model_check.hpp"

namespace partcheck {

struct VerifyReport {
  std::string device_name;
  std::string spec_name;
  std::string formula;
  std::string fit_kind;
  int region_count = 0;
  double space_volume = 0.0;
  VerificationResult result;
  std::vector<double> region_volumes;              // per region
  std::vector<std::vector<std::string>> region_labels;
};

// Relative volumes rendered to 0.1% precision.
std::string format_percent(double fraction);

void write_verify_text(std::ostream& os, const VerifyReport& r);
std::string verify_report_json(const VerifyReport& r);

}  // namespace partcheck
