#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "covpolar/stats/corpus.hpp"

namespace covpolar {

struct Thresholds {
  double discrepancy = 0.05;
  double ks = 0.05;
  double mean_relative = 0.05;
  double correlation = 0.05;
};

struct ReportConfig {
  std::uint64_t seed = 1;
  std::size_t caps = 1000;
  double radius = 1.2;
  Thresholds thresholds;
  // Cap discrepancy may grow by this fraction between consecutive targets
  // and still count as decreasing.
  double noise_allowance = 0.2;
  std::size_t histogram_bins = 50;
};

nlohmann::json to_json(ReportConfig const& c);
// Missing keys keep their defaults; unknown keys raise ValidationError.
ReportConfig report_config_from_json(nlohmann::json const& j);

// Statistics of every target against the limit measure and the reference.
// Targets are compared in the given order for the monotonicity flag and the
// last two form the "largest pair".  Component errors become
// {"error": {"type", "message"}} entries.  Keys are sorted, so the dump is
// deterministic.
nlohmann::json build_report(std::vector<Corpus> const& targets, Corpus const& reference,
                            ReportConfig const& config);

// True when every "pass" flag in the report is true and no entry holds an
// error.
bool report_passes(nlohmann::json const& report);

}  // namespace covpolar
