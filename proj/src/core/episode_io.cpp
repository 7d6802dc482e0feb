#include "core/episode_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace driftbench {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    std::size_t end = line.find(sep, begin);
    if (end == std::string::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, end - begin));
    begin = end + 1;
  }
}

bool blank_line(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string expect_kv(const std::string& token, const std::string& key,
                      const std::string& where) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    fail(errc::parse, where + ": expected " + key + "=<value>, got '" + token + "'");
  return token.substr(prefix.size());
}

}  // namespace

std::string episode_to_string(const Episode& episode) {
  validate_episode(episode);
  const int n = static_cast<int>(episode.environments.size());
  const int t_count = static_cast<int>(episode.environments.front().frames.size());
  const int dim = static_cast<int>(episode.environments.front().frames.front().features.size());

  std::ostringstream out;
  out << "DBENCH1 D=" << dim << " N=" << n << " T=" << t_count
      << " rho=" << format_double(episode.label_fraction) << " seed=" << episode.seed << "\n";
  for (const Environment& env : episode.environments) {
    for (const FeatureFrame& f : env.frames) {
      out << f.t << "," << f.env_index << "," << f.true_class << "," << (f.labeled ? 1 : 0);
      for (double v : f.features) out << "," << format_double(v);
      out << "\n";
    }
  }
  return out.str();
}

Episode episode_from_string(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, name + ": empty file");
  if (!line.empty() && line.back() == '\r')
    fail(errc::parse, name + ":1: CRLF line endings are not supported");

  std::vector<std::string> head = split(line, ' ');
  if (head.size() != 6 || head[0] != "DBENCH1")
    fail(errc::parse, name + ":1: malformed header, expected "
                             "'DBENCH1 D=<int> N=<int> T=<int> rho=<decimal> seed=<int>'");
  const std::string where = name + ":1";
  const int dim = static_cast<int>(parse_int_exact(expect_kv(head[1], "D", where), where));
  const int n = static_cast<int>(parse_int_exact(expect_kv(head[2], "N", where), where));
  const int t_count = static_cast<int>(parse_int_exact(expect_kv(head[3], "T", where), where));
  const double rho = parse_double_exact(expect_kv(head[4], "rho", where), where);
  const uint64_t seed = parse_uint_exact(expect_kv(head[5], "seed", where), where);
  if (dim <= 0 || n <= 0 || t_count <= 0)
    fail(errc::parse, where + ": D, N, T must all be positive");

  Episode episode;
  episode.seed = seed;
  episode.label_fraction = rho;
  episode.environments.resize(n);
  for (int e = 0; e < n; ++e) {
    episode.environments[e].env_index = e;
    episode.environments[e].context_shift.assign(dim, 0.0);
    episode.environments[e].frames.reserve(t_count);
  }

  const int total = n * t_count;
  int lineno = 1;
  for (int t = 0; t < total; ++t) {
    ++lineno;
    const std::string fwhere = name + ":" + std::to_string(lineno);
    if (!std::getline(in, line)) fail(errc::parse, fwhere + ": expected frame line");
    if (!line.empty() && line.back() == '\r')
      fail(errc::parse, fwhere + ": CRLF line endings are not supported");
    std::vector<std::string> cols = split(line, ',');
    if (static_cast<int>(cols.size()) != 4 + dim)
      fail(errc::parse, fwhere + ": expected " + std::to_string(4 + dim) + " fields, got " +
                            std::to_string(cols.size()));
    FeatureFrame f;
    f.t = static_cast<int>(parse_int_exact(cols[0], fwhere + " field t"));
    f.env_index = static_cast<int>(parse_int_exact(cols[1], fwhere + " field env_index"));
    f.true_class = static_cast<ClassId>(parse_int_exact(cols[2], fwhere + " field class_id"));
    if (cols[3] == "1") {
      f.labeled = true;
    } else if (cols[3] == "0") {
      f.labeled = false;
    } else {
      fail(errc::parse, fwhere + " field labeled: expected 0 or 1, got '" + cols[3] + "'");
    }
    if (f.t != t) fail(errc::parse, fwhere + " field t: expected " + std::to_string(t));
    if (f.env_index != t / t_count)
      fail(errc::parse, fwhere + " field env_index: expected " + std::to_string(t / t_count));
    f.features.reserve(dim);
    for (int d = 0; d < dim; ++d)
      f.features.push_back(parse_double_exact(cols[4 + d], fwhere + " field f_" + std::to_string(d)));
    episode.environments[f.env_index].frames.push_back(std::move(f));
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank_line(line))
      fail(errc::parse, name + ":" + std::to_string(lineno) + ": trailing content after frames");
  }

  for (Environment& env : episode.environments) {
    std::vector<ClassId> classes;
    for (const FeatureFrame& f : env.frames) classes.push_back(f.true_class);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    env.class_set = std::move(classes);
  }
  validate_episode(episode);
  return episode;
}

void write_episode(const Episode& episode, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot open for writing: " + path);
  out << episode_to_string(episode);
  if (!out) fail(errc::io, "write failed: " + path);
}

Episode load_episode(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return episode_from_string(buf.str(), path);
}

}  // namespace driftbench
