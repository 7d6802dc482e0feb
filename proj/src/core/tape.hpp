#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "core/common.hpp"

namespace driftbench {

// Reverse-mode tape over dense double vectors. Scalars are size-1 vectors.
// Forward values are produced by the vec:: kernels, so a tape forward pass is
// bitwise identical to the corresponding plain computation.
class Tape {
 public:
  using Var = int;

  Var input(std::vector<double> value);

  Var add(Var a, Var b);
  Var scale(Var a, double s);
  Var mul(Var a, Var b);               // elementwise
  Var dot(Var a, Var b);               // scalar result
  Var matvec(Var w, Var x, std::size_t rows, std::size_t cols);  // w row-major
  Var l2_normalize(Var x);             // zero vector maps to itself, gradient 0
  Var softmax_cross_entropy(Var z, std::size_t target);
  Var soft_cross_entropy(Var z, std::vector<double> q);
  Var concat(const std::vector<Var>& parts);
  Var tanh(Var x);

  const std::vector<double>& value(Var v) const;
  double scalar(Var v) const;

  // Accumulates adjoints of every node reachable from root (a scalar).
  void backward(Var root);
  const std::vector<double>& grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op { Input, Add, Scale, Mul, Dot, MatVec, L2Normalize, SoftmaxCE, SoftCE, Concat, Tanh };

  struct Node {
    Op op;
    std::vector<Var> inputs;
    std::vector<double> value;
    std::vector<double> adjoint;
    double s = 0.0;                 // Scale factor
    std::size_t rows = 0, cols = 0; // MatVec shape
    std::size_t target = 0;         // SoftmaxCE target index
    std::vector<double> aux;        // softmax probabilities / soft target q
  };

  Var push(Node node);
  const Node& at(Var v) const;

  std::vector<Node> nodes_;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
};

// Central-difference check of an analytic gradient. Per coordinate i the step
// is eps*max(1,|theta_i|) and the error is |a_i - n_i| / max(1, |n_i|).
GradCheckReport grad_check(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& theta,
                           const std::vector<double>& analytic_grad, double eps = 1e-5);

}  // namespace driftbench
