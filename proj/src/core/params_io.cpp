#include "core/params_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace driftbench {

namespace {

void emit_rows(std::ostringstream& out, const std::vector<double>& flat, std::size_t rows,
               std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c > 0) out << ",";
      out << format_double(flat[r * cols + c]);
    }
    out << "\n";
  }
}

std::vector<double> read_row(std::istream& in, std::size_t cols, int& lineno,
                             const std::string& name) {
  std::string line;
  ++lineno;
  const std::string where = name + ":" + std::to_string(lineno);
  if (!std::getline(in, line)) fail(errc::parse, where + ": unexpected end of file");
  std::vector<double> row;
  row.reserve(cols);
  std::size_t begin = 0;
  while (begin <= line.size()) {
    std::size_t end = line.find(',', begin);
    std::string token =
        end == std::string::npos ? line.substr(begin) : line.substr(begin, end - begin);
    row.push_back(parse_double_exact(token, where));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (row.size() != cols)
    fail(errc::parse, where + ": expected " + std::to_string(cols) + " values, got " +
                          std::to_string(row.size()));
  return row;
}

std::string expect_kv(const std::string& token, const std::string& key,
                      const std::string& where) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    fail(errc::parse, where + ": expected " + key + "=<value>, got '" + token + "'");
  return token.substr(prefix.size());
}

}  // namespace

std::string params_to_string(const EmbeddingParams& p) {
  validate_params(p);
  std::ostringstream out;
  out << "DBPARAMS1 din=" << p.input_dim << " demb=" << p.embed_dim
      << " hidden=" << p.hidden_dim << " bias=" << (p.use_bias ? 1 : 0) << "\n";
  const std::size_t first_rows = p.hidden_dim > 0 ? p.hidden_dim : p.embed_dim;
  emit_rows(out, p.w1, first_rows, p.input_dim);
  if (p.use_bias) emit_rows(out, p.b1, 1, first_rows);
  if (p.hidden_dim > 0) {
    emit_rows(out, p.w2, p.embed_dim, p.hidden_dim);
    if (p.use_bias) emit_rows(out, p.b2, 1, p.embed_dim);
  }
  return out.str();
}

EmbeddingParams params_from_string(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line)) fail(errc::parse, name + ": empty file");
  std::istringstream head(line);
  std::string tag, din, demb, hidden, bias;
  if (!(head >> tag >> din >> demb >> hidden >> bias) || tag != "DBPARAMS1")
    fail(errc::parse, name + ":1: malformed header, expected "
                             "'DBPARAMS1 din=<int> demb=<int> hidden=<int> bias=<0|1>'");
  std::string extra;
  if (head >> extra) fail(errc::parse, name + ":1: trailing content in header");
  const std::string where = name + ":1";
  EmbeddingParams p;
  p.input_dim = static_cast<int>(parse_int_exact(expect_kv(din, "din", where), where));
  p.embed_dim = static_cast<int>(parse_int_exact(expect_kv(demb, "demb", where), where));
  p.hidden_dim = static_cast<int>(parse_int_exact(expect_kv(hidden, "hidden", where), where));
  const int64_t bias_flag = parse_int_exact(expect_kv(bias, "bias", where), where);
  if (bias_flag != 0 && bias_flag != 1) fail(errc::parse, where + ": bias must be 0 or 1");
  p.use_bias = bias_flag == 1;
  if (p.input_dim <= 0 || p.embed_dim <= 0 || p.hidden_dim < 0)
    fail(errc::parse, where + ": bad dimensions");

  const std::size_t first_rows = p.hidden_dim > 0 ? p.hidden_dim : p.embed_dim;
  for (std::size_t r = 0; r < first_rows; ++r) {
    std::vector<double> row = read_row(in, p.input_dim, lineno, name);
    p.w1.insert(p.w1.end(), row.begin(), row.end());
  }
  if (p.use_bias) p.b1 = read_row(in, first_rows, lineno, name);
  if (p.hidden_dim > 0) {
    for (int r = 0; r < p.embed_dim; ++r) {
      std::vector<double> row = read_row(in, p.hidden_dim, lineno, name);
      p.w2.insert(p.w2.end(), row.begin(), row.end());
    }
    if (p.use_bias) p.b2 = read_row(in, p.embed_dim, lineno, name);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      fail(errc::parse, name + ":" + std::to_string(lineno) + ": trailing content");
  }
  validate_params(p);
  return p;
}

void write_params(const EmbeddingParams& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot open for writing: " + path);
  out << params_to_string(p);
  if (!out) fail(errc::io, "write failed: " + path);
}

EmbeddingParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_string(buf.str(), path);
}

}  // namespace driftbench
