#include "core/compare.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "core/common.hpp"
#include "core/vecmath.hpp"

namespace driftbench {

using nlohmann::json;

namespace {

std::vector<double> metric_values(const json& summary, const std::string& metric) {
  static const char* kKnown[] = {"online_avg", "f_avg", "f_avg_paper_literal"};
  bool known = false;
  for (const char* k : kKnown)
    if (metric == k) known = true;
  if (!known)
    fail(errc::invalid_argument,
         "unknown metric '" + metric +
             "'; available: online_avg, f_avg, f_avg_paper_literal");
  if (!summary.contains("per_episode"))
    fail(errc::parse, "summary has no per_episode section");
  std::vector<double> values;
  for (const json& e : summary["per_episode"]) {
    if (!e.contains(metric))
      fail(errc::parse, "per-episode entry is missing metric '" + metric + "'");
    if (e[metric].is_null()) continue;
    values.push_back(e[metric].get<double>());
  }
  if (values.size() < 2)
    fail(errc::invalid_argument,
         "metric '" + metric + "' needs at least two defined episode values per side");
  return values;
}

}  // namespace

CompareResult compare_summaries(const json& a, const json& b, const std::string& metric,
                                const std::string& direction, double margin) {
  if (direction != "<" && direction != ">")
    fail(errc::invalid_argument, "direction must be '<' or '>'");
  if (margin < 0.0) fail(errc::invalid_argument, "margin must be non-negative");

  const std::vector<double> va = metric_values(a, metric);
  const std::vector<double> vb = metric_values(b, metric);

  CompareResult r;
  r.count_a = static_cast<int>(va.size());
  r.count_b = static_cast<int>(vb.size());
  r.mean_a = vec::mean(va);
  r.mean_b = vec::mean(vb);
  const double sa = vec::sample_std(va);
  const double sb = vec::sample_std(vb);
  r.pooled_std = std::sqrt(((r.count_a - 1) * sa * sa + (r.count_b - 1) * sb * sb) /
                           static_cast<double>(r.count_a + r.count_b - 2));

  const double gap = margin * r.pooled_std;
  if (direction == "<") {
    r.pass = r.mean_a + gap < r.mean_b;
  } else {
    r.pass = r.mean_a - gap > r.mean_b;
  }

  std::ostringstream line;
  line << (r.pass ? "PASS" : "FAIL") << ": " << metric << " " << r.mean_a << " " << direction
       << " " << r.mean_b << " by margin " << margin << " pooled-std (s_p=" << r.pooled_std
       << ", n=" << r.count_a << "/" << r.count_b << ")";
  r.verdict = line.str();
  return r;
}

}  // namespace driftbench
