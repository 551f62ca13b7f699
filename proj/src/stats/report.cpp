#include "covpolar/stats/report.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "covpolar/error.hpp"
#include "covpolar/sampling/rng.hpp"
#include "covpolar/stats/stats.hpp"

namespace covpolar {

using nlohmann::json;

json to_json(ReportConfig const& c) {
  return json{{"seed", c.seed},
              {"caps", c.caps},
              {"radius", c.radius},
              {"noise_allowance", c.noise_allowance},
              {"histogram_bins", c.histogram_bins},
              {"thresholds",
               {{"discrepancy", c.thresholds.discrepancy},
                {"ks", c.thresholds.ks},
                {"mean_relative", c.thresholds.mean_relative},
                {"correlation", c.thresholds.correlation}}}};
}

namespace {

template <class T>
void read_key(json const& j, char const* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (json::exception const& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(json const& j, std::initializer_list<char const*> keys, char const* where) {
  for (auto const& item : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || item.key() == k;
    if (!known) throw ValidationError(std::string("unknown key '") + item.key() + "' in " + where);
  }
}

}  // namespace

ReportConfig report_config_from_json(json const& j) {
  if (!j.is_object()) throw ValidationError("report config must be a JSON object");
  reject_unknown(j, {"seed", "caps", "radius", "noise_allowance", "histogram_bins", "thresholds"},
                 "report config");
  ReportConfig c;
  read_key(j, "seed", c.seed);
  read_key(j, "caps", c.caps);
  read_key(j, "radius", c.radius);
  read_key(j, "noise_allowance", c.noise_allowance);
  read_key(j, "histogram_bins", c.histogram_bins);
  if (j.contains("thresholds")) {
    auto const& t = j.at("thresholds");
    if (!t.is_object()) throw ValidationError("thresholds must be a JSON object");
    reject_unknown(t, {"discrepancy", "ks", "mean_relative", "correlation"}, "thresholds");
    read_key(t, "discrepancy", c.thresholds.discrepancy);
    read_key(t, "ks", c.thresholds.ks);
    read_key(t, "mean_relative", c.thresholds.mean_relative);
    read_key(t, "correlation", c.thresholds.correlation);
  }
  if (c.caps == 0) throw ValidationError("caps must be positive");
  if (!(c.radius > 0)) throw ValidationError("radius must be positive");
  if (c.histogram_bins == 0) throw ValidationError("histogram_bins must be positive");
  if (!(c.noise_allowance >= 0)) throw ValidationError("noise_allowance must be non-negative");
  return c;
}

namespace {

json guarded(std::function<json()> const& f) {
  try {
    return f();
  } catch (Error const& e) {
    return json{{"error", {{"type", error_kind(e)}, {"message", e.what()}}}};
  } catch (std::exception const& e) {
    return json{{"error", {{"type", "internal"}, {"message", e.what()}}}};
  }
}

json ks_entry(std::vector<double> const& a, std::vector<double> const& b, double threshold) {
  auto r = ks_two_sample(a, b);
  return json{{"statistic", r.statistic}, {"p_value", r.p_value}, {"n", r.n}, {"m", r.m},
              {"threshold", threshold}, {"pass", r.statistic < threshold}};
}

json describe(Corpus const& c) {
  std::vector<std::int64_t> norms(c.n2.begin(), c.n2.end());
  std::sort(norms.begin(), norms.end());
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  json j{{"label", c.label}, {"d", c.d}, {"count", c.size()}};
  // Long norm lists (reference populations) are summarized by their range.
  if (norms.size() <= 16) {
    j["norm2"] = norms;
  } else {
    j["norm2_range"] = {norms.front(), norms.back()};
    j["distinct_norm2"] = norms.size();
  }
  return j;
}

json histogram_entry(Corpus const& c, std::size_t bins) {
  json out = json::array();
  if (c.size() == 0) return out;
  double hi = *std::max_element(c.lambda1.begin(), c.lambda1.end());
  for (auto const& b : histogram(c.lambda1, bins, 0.0, std::max(hi, 1e-9))) {
    out.push_back({b.left, b.right, b.count});
  }
  return out;
}

json corpus_section(Corpus const& c, Corpus const* reference, std::vector<Cap> const& caps,
                    ReportConfig const& cfg) {
  json j = describe(c);
  auto const& th = cfg.thresholds;
  j["cap_discrepancy"] = guarded([&] {
    double v = cap_discrepancy(c, caps);
    return json{{"value", v}, {"threshold", th.discrepancy}, {"pass", v < th.discrepancy}};
  });
  j["mean_ball_count"] = guarded([&] {
    auto m = mean_ball_count(c.ball_count);
    double const target = siegel_mean(c.d - 1, cfg.radius);
    double const rel = std::abs(m.mean - target) / target;
    return json{{"mean", m.mean},           {"standard_error", m.standard_error},
                {"n", m.n},                 {"target", target},
                {"relative_error", rel},    {"threshold", th.mean_relative},
                {"pass", rel < th.mean_relative}};
  });
  j["independence"] = guarded([&] {
    double r = independence_stat(c);
    return json{{"correlation", r}, {"threshold", th.correlation},
                {"pass", std::abs(r) < th.correlation}};
  });
  if (reference) {
    j["ks_lambda1_vs_reference"] =
        guarded([&] { return ks_entry(c.lambda1, reference->lambda1, th.ks); });
    j["ks_ratio_vs_reference"] =
        guarded([&] { return ks_entry(c.ratio, reference->ratio, th.ks); });
  }
  j["lambda1_histogram"] = histogram_entry(c, cfg.histogram_bins);
  return j;
}

bool passes(json const& j) {
  if (j.is_object()) {
    if (j.contains("error")) return false;
    if (j.contains("pass") && j.at("pass").is_boolean() && !j.at("pass").get<bool>()) {
      return false;
    }
    for (auto const& item : j.items()) {
      if (item.key() != "pass" && !passes(item.value())) return false;
    }
  } else if (j.is_array()) {
    for (auto const& v : j) {
      if (!passes(v)) return false;
    }
  }
  return true;
}

}  // namespace

json build_report(std::vector<Corpus> const& targets, Corpus const& reference,
                  ReportConfig const& cfg) {
  if (targets.empty()) throw PreconditionError("report needs at least one target corpus");
  for (auto const& t : targets) {
    if (t.d != reference.d) throw PreconditionError("target and reference dimensions differ");
  }
  Rng rng(cfg.seed);
  auto caps = random_caps(reference.d, cfg.caps, rng);

  json report;
  report["config"] = to_json(cfg);
  report["reference"] = corpus_section(reference, nullptr, caps, cfg);
  json sections = json::array();
  for (auto const& t : targets) sections.push_back(corpus_section(t, &reference, caps, cfg));
  report["targets"] = sections;

  if (targets.size() >= 2) {
    auto const& a = targets[targets.size() - 2];
    auto const& b = targets.back();
    json pair = guarded([&] { return ks_entry(a.lambda1, b.lambda1, cfg.thresholds.ks); });
    pair["labels"] = {a.label, b.label};
    report["ks_lambda1_largest_pair"] = pair;

    json values = json::array();
    bool monotone = true;
    bool have_all = true;
    for (auto const& s : sections) {
      auto const& cd = s.at("cap_discrepancy");
      if (!cd.contains("value")) {
        have_all = false;
        break;
      }
      values.push_back(cd.at("value"));
    }
    if (have_all) {
      for (std::size_t i = 1; i < values.size(); ++i) {
        monotone = monotone && values[i].get<double>() <
                                   values[i - 1].get<double>() * (1 + cfg.noise_allowance);
      }
      report["discrepancy_trend"] = {
          {"values", values}, {"noise_allowance", cfg.noise_allowance}, {"pass", monotone}};
    } else {
      report["discrepancy_trend"] = {
          {"error", {{"type", "precondition"}, {"message", "a target has no discrepancy value"}}}};
    }
  }
  report["pass"] = passes(report);
  return report;
}

bool report_passes(json const& report) { return passes(report); }

}  // namespace covpolar
