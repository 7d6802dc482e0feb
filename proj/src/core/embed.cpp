#include "core/embed.hpp"

#include <algorithm>
#include <cmath>

#include "core/vecmath.hpp"

namespace driftbench {

void validate_params(const EmbeddingParams& p) {
  if (p.input_dim <= 0 || p.embed_dim <= 0 || p.hidden_dim < 0)
    fail(errc::invalid_argument, "embedding: bad dimensions");
  const std::size_t first_rows = p.hidden_dim > 0 ? p.hidden_dim : p.embed_dim;
  if (p.w1.size() != first_rows * static_cast<std::size_t>(p.input_dim))
    fail(errc::invalid_argument, "embedding: W1 size mismatch");
  if (p.use_bias && p.b1.size() != first_rows)
    fail(errc::invalid_argument, "embedding: b1 size mismatch");
  if (!p.use_bias && !p.b1.empty()) fail(errc::invalid_argument, "embedding: unexpected b1");
  if (p.hidden_dim > 0) {
    if (p.w2.size() != static_cast<std::size_t>(p.embed_dim) * p.hidden_dim)
      fail(errc::invalid_argument, "embedding: W2 size mismatch");
    if (p.use_bias && p.b2.size() != static_cast<std::size_t>(p.embed_dim))
      fail(errc::invalid_argument, "embedding: b2 size mismatch");
    if (!p.use_bias && !p.b2.empty()) fail(errc::invalid_argument, "embedding: unexpected b2");
  } else if (!p.w2.empty() || !p.b2.empty()) {
    fail(errc::invalid_argument, "embedding: linear form must not carry W2/b2");
  }
}

EmbeddingParams identity_params(int dim) {
  EmbeddingParams p;
  p.input_dim = dim;
  p.embed_dim = dim;
  p.hidden_dim = 0;
  p.use_bias = false;
  p.w1.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) p.w1[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return p;
}

EmbeddingParams init_params(int input_dim, int embed_dim, int hidden_dim, bool use_bias,
                            Rng& rng) {
  EmbeddingParams p;
  p.input_dim = input_dim;
  p.embed_dim = embed_dim;
  p.hidden_dim = hidden_dim;
  p.use_bias = use_bias;
  const int first_rows = hidden_dim > 0 ? hidden_dim : embed_dim;
  p.w1 = rng.normal_vector(static_cast<std::size_t>(first_rows) * input_dim,
                           1.0 / std::sqrt(static_cast<double>(input_dim)));
  if (use_bias) p.b1.assign(first_rows, 0.0);
  if (hidden_dim > 0) {
    p.w2 = rng.normal_vector(static_cast<std::size_t>(embed_dim) * hidden_dim,
                             1.0 / std::sqrt(static_cast<double>(hidden_dim)));
    if (use_bias) p.b2.assign(embed_dim, 0.0);
  }
  return p;
}

std::vector<double> embed_forward(const EmbeddingParams& p, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(p.input_dim))
    fail(errc::invalid_argument, "embedding: input dimension mismatch");
  if (p.hidden_dim == 0) {
    std::vector<double> y = vec::matvec(p.w1, x, p.embed_dim, p.input_dim);
    if (p.use_bias) y = vec::add(y, p.b1);
    return y;
  }
  std::vector<double> h = vec::matvec(p.w1, x, p.hidden_dim, p.input_dim);
  if (p.use_bias) h = vec::add(h, p.b1);
  h = vec::tanh_vec(h);
  std::vector<double> y = vec::matvec(p.w2, h, p.embed_dim, p.hidden_dim);
  if (p.use_bias) y = vec::add(y, p.b2);
  return y;
}

EmbeddingVars stage_embedding(Tape& tape, const EmbeddingParams& p) {
  EmbeddingVars vars;
  vars.w1 = tape.input(p.w1);
  if (p.use_bias) vars.b1 = tape.input(p.b1);
  if (p.hidden_dim > 0) {
    vars.w2 = tape.input(p.w2);
    if (p.use_bias) vars.b2 = tape.input(p.b2);
  }
  return vars;
}

Tape::Var embed_forward_tape(Tape& tape, const EmbeddingParams& p, const EmbeddingVars& vars,
                             Tape::Var x) {
  if (p.hidden_dim == 0) {
    Tape::Var y = tape.matvec(vars.w1, x, p.embed_dim, p.input_dim);
    if (p.use_bias) y = tape.add(y, vars.b1);
    return y;
  }
  Tape::Var h = tape.matvec(vars.w1, x, p.hidden_dim, p.input_dim);
  if (p.use_bias) h = tape.add(h, vars.b1);
  h = tape.tanh(h);
  Tape::Var y = tape.matvec(vars.w2, h, p.embed_dim, p.hidden_dim);
  if (p.use_bias) y = tape.add(y, vars.b2);
  return y;
}

std::vector<double> params_to_vector(const EmbeddingParams& p) {
  std::vector<double> flat;
  flat.insert(flat.end(), p.w1.begin(), p.w1.end());
  flat.insert(flat.end(), p.b1.begin(), p.b1.end());
  flat.insert(flat.end(), p.w2.begin(), p.w2.end());
  flat.insert(flat.end(), p.b2.begin(), p.b2.end());
  return flat;
}

void vector_to_params(const std::vector<double>& flat, EmbeddingParams& p) {
  if (flat.size() != p.w1.size() + p.b1.size() + p.w2.size() + p.b2.size())
    fail(errc::invalid_argument, "embedding: flat vector size mismatch");
  std::size_t off = 0;
  auto take = [&](std::vector<double>& dst) {
    std::copy(flat.begin() + off, flat.begin() + off + dst.size(), dst.begin());
    off += dst.size();
  };
  take(p.w1);
  take(p.b1);
  take(p.w2);
  take(p.b2);
}

std::vector<double> collect_gradient(const Tape& tape, const EmbeddingParams& p,
                                     const EmbeddingVars& vars) {
  std::vector<double> flat;
  auto append = [&](Tape::Var v) {
    const std::vector<double>& g = tape.grad(v);
    flat.insert(flat.end(), g.begin(), g.end());
  };
  append(vars.w1);
  if (p.use_bias) append(vars.b1);
  if (p.hidden_dim > 0) {
    append(vars.w2);
    if (p.use_bias) append(vars.b2);
  }
  return flat;
}

}  // namespace driftbench
