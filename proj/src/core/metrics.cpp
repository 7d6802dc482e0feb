#include "core/metrics.hpp"

#include "core/vecmath.hpp"

namespace driftbench {

std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
  std::vector<double> defined;
  for (const auto& v : values)
    if (v) defined.push_back(*v);
  if (defined.empty()) return std::nullopt;
  return vec::mean(defined);
}

ForgettingMetrics forgetting_metrics(const std::vector<std::vector<std::optional<double>>>& c) {
  const std::size_t n = c.size();
  ForgettingMetrics m;
  m.fff.assign(n, {});
  m.ff.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i].size() != i + 1) fail(errc::invalid_argument, "forgetting: C is not lower-triangular");
    m.fff[i].assign(i + 1, std::nullopt);
    for (std::size_t j = 0; j <= i; ++j) {
      if (c[j][j] && c[i][j]) m.fff[i][j] = *c[j][j] - *c[i][j];
    }
    if (i > 0) {
      std::vector<std::optional<double>> row(m.fff[i].begin(), m.fff[i].begin() + i);
      m.ff[i] = mean_defined(row);
    }
  }
  if (n >= 2) {
    std::vector<std::optional<double>> tail(m.ff.begin() + 1, m.ff.end());
    m.f_avg_default = mean_defined(tail);
    std::vector<double> literal = {0.0};
    for (const auto& v : tail)
      if (v) literal.push_back(*v);
    m.f_avg_paper_literal = vec::mean(literal);
  }
  return m;
}

EpisodeMetrics episode_metrics(const EpisodeResult& result) {
  EpisodeMetrics m;
  m.online = result.online;
  m.online_avg = mean_defined(result.online);
  ForgettingMetrics f = forgetting_metrics(result.c);
  m.ff = f.ff;
  m.f_avg = f.f_avg_default;
  m.f_avg_paper_literal = f.f_avg_paper_literal;
  return m;
}

namespace {

struct MeanStd {
  std::optional<double> mean;
  std::optional<double> std;
};

MeanStd mean_std(const std::vector<std::optional<double>>& values) {
  std::vector<double> defined;
  for (const auto& v : values)
    if (v) defined.push_back(*v);
  MeanStd r;
  if (defined.empty()) return r;
  r.mean = vec::mean(defined);
  if (defined.size() >= 2) r.std = vec::sample_std(defined);
  return r;
}

}  // namespace

Aggregate aggregate_metrics(const std::vector<EpisodeMetrics>& episodes) {
  Aggregate agg;
  agg.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return agg;

  std::vector<std::optional<double>> online_avg, f_avg, f_lit;
  for (const EpisodeMetrics& e : episodes) {
    online_avg.push_back(e.online_avg);
    f_avg.push_back(e.f_avg);
    f_lit.push_back(e.f_avg_paper_literal);
  }
  MeanStd o = mean_std(online_avg);
  agg.online_avg_mean = o.mean;
  agg.online_avg_std = o.std;
  MeanStd f = mean_std(f_avg);
  agg.f_avg_mean = f.mean;
  agg.f_avg_std = f.std;
  MeanStd fl = mean_std(f_lit);
  agg.f_avg_paper_literal_mean = fl.mean;
  agg.f_avg_paper_literal_std = fl.std;

  const std::size_t n_envs = episodes.front().online.size();
  agg.online_per_env_mean.assign(n_envs, std::nullopt);
  agg.ff_per_env_mean.assign(n_envs, std::nullopt);
  for (std::size_t i = 0; i < n_envs; ++i) {
    std::vector<std::optional<double>> o_col, ff_col;
    for (const EpisodeMetrics& e : episodes) {
      if (e.online.size() != n_envs || e.ff.size() != n_envs)
        fail(errc::invalid_argument, "aggregate: episodes disagree on environment count");
      o_col.push_back(e.online[i]);
      ff_col.push_back(e.ff[i]);
    }
    agg.online_per_env_mean[i] = mean_defined(o_col);
    agg.ff_per_env_mean[i] = mean_defined(ff_col);
  }
  return agg;
}

}  // namespace driftbench
