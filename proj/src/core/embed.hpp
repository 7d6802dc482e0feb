#pragma once

#include <vector>

#include "core/rng.hpp"
#include "core/tape.hpp"

namespace driftbench {

// Feature extractor: either a plain linear map or one tanh hidden layer.
//   linear: y = W1 x (+ b1)          W1 is embed_dim x input_dim
//   mlp:    h = tanh(W1 x + b1)      W1 is hidden_dim x input_dim
//           y = W2 h (+ b2)          W2 is embed_dim x hidden_dim
struct EmbeddingParams {
  int input_dim = 0;
  int embed_dim = 0;
  int hidden_dim = 0;  // 0 selects the linear form
  bool use_bias = false;
  std::vector<double> w1, b1, w2, b2;
};

// Square linear map fixed at the identity; embeds every vector to itself.
EmbeddingParams identity_params(int dim);

// Gaussian init scaled by 1/sqrt(fan_in); biases start at zero.
EmbeddingParams init_params(int input_dim, int embed_dim, int hidden_dim, bool use_bias,
                            Rng& rng);

std::vector<double> embed_forward(const EmbeddingParams& params, const std::vector<double>& x);

// Tape mirror of embed_forward. Staged parameter vars line up with
// params_to_vector's flat layout so gradients can be read back in order.
struct EmbeddingVars {
  Tape::Var w1 = -1, b1 = -1, w2 = -1, b2 = -1;
};
EmbeddingVars stage_embedding(Tape& tape, const EmbeddingParams& params);
Tape::Var embed_forward_tape(Tape& tape, const EmbeddingParams& params,
                             const EmbeddingVars& vars, Tape::Var x);

// Flat layout: w1, b1, w2, b2 (present pieces only, in that order).
std::vector<double> params_to_vector(const EmbeddingParams& params);
void vector_to_params(const std::vector<double>& flat, EmbeddingParams& params);
std::vector<double> collect_gradient(const Tape& tape, const EmbeddingParams& params,
                                     const EmbeddingVars& vars);

void validate_params(const EmbeddingParams& params);

}  // namespace driftbench
