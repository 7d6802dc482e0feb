#include "core/tape.hpp"

#include <algorithm>
#include <cmath>

#include "core/vecmath.hpp"

namespace driftbench {

Tape::Var Tape::push(Node node) {
  node.adjoint.assign(node.value.size(), 0.0);
  nodes_.push_back(std::move(node));
  return static_cast<Var>(nodes_.size() - 1);
}

const Tape::Node& Tape::at(Var v) const {
  if (v < 0 || v >= static_cast<Var>(nodes_.size()))
    fail(errc::invalid_argument, "tape: bad variable id");
  return nodes_[v];
}

Tape::Var Tape::input(std::vector<double> value) {
  Node n;
  n.op = Op::Input;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Var Tape::add(Var a, Var b) {
  if (at(a).value.size() != at(b).value.size())
    fail(errc::invalid_argument, "tape add: size mismatch");
  Node n;
  n.op = Op::Add;
  n.inputs = {a, b};
  n.value = vec::add(at(a).value, at(b).value);
  return push(std::move(n));
}

Tape::Var Tape::scale(Var a, double s) {
  Node n;
  n.op = Op::Scale;
  n.inputs = {a};
  n.s = s;
  n.value = vec::scale(at(a).value, s);
  return push(std::move(n));
}

Tape::Var Tape::mul(Var a, Var b) {
  if (at(a).value.size() != at(b).value.size())
    fail(errc::invalid_argument, "tape mul: size mismatch");
  Node n;
  n.op = Op::Mul;
  n.inputs = {a, b};
  n.value = vec::hadamard(at(a).value, at(b).value);
  return push(std::move(n));
}

Tape::Var Tape::dot(Var a, Var b) {
  if (at(a).value.size() != at(b).value.size())
    fail(errc::invalid_argument, "tape dot: size mismatch");
  Node n;
  n.op = Op::Dot;
  n.inputs = {a, b};
  n.value = {vec::dot(at(a).value, at(b).value)};
  return push(std::move(n));
}

Tape::Var Tape::matvec(Var w, Var x, std::size_t rows, std::size_t cols) {
  if (at(w).value.size() != rows * cols) fail(errc::invalid_argument, "tape matvec: bad W size");
  if (at(x).value.size() != cols) fail(errc::invalid_argument, "tape matvec: bad x size");
  Node n;
  n.op = Op::MatVec;
  n.inputs = {w, x};
  n.rows = rows;
  n.cols = cols;
  n.value = vec::matvec(at(w).value, at(x).value, rows, cols);
  return push(std::move(n));
}

Tape::Var Tape::l2_normalize(Var x) {
  Node n;
  n.op = Op::L2Normalize;
  n.inputs = {x};
  n.value = vec::l2_normalize(at(x).value);
  return push(std::move(n));
}

Tape::Var Tape::softmax_cross_entropy(Var z, std::size_t target) {
  if (target >= at(z).value.size())
    fail(errc::invalid_argument, "tape softmax_cross_entropy: target out of range");
  Node n;
  n.op = Op::SoftmaxCE;
  n.inputs = {z};
  n.target = target;
  n.value = {vec::softmax_cross_entropy(at(z).value, target, &n.aux)};
  return push(std::move(n));
}

Tape::Var Tape::soft_cross_entropy(Var z, std::vector<double> q) {
  if (q.size() != at(z).value.size())
    fail(errc::invalid_argument, "tape soft_cross_entropy: size mismatch");
  Node n;
  n.op = Op::SoftCE;
  n.inputs = {z};
  std::vector<double> p;
  n.value = {vec::soft_cross_entropy(at(z).value, q, &p)};
  n.aux = std::move(p);
  for (double v : q) n.aux.push_back(v);  // aux = [softmax(z), q]
  return push(std::move(n));
}

Tape::Var Tape::concat(const std::vector<Var>& parts) {
  if (parts.empty()) fail(errc::invalid_argument, "tape concat: no parts");
  Node n;
  n.op = Op::Concat;
  n.inputs = parts;
  for (Var p : parts)
    n.value.insert(n.value.end(), at(p).value.begin(), at(p).value.end());
  return push(std::move(n));
}

Tape::Var Tape::tanh(Var x) {
  Node n;
  n.op = Op::Tanh;
  n.inputs = {x};
  n.value = vec::tanh_vec(at(x).value);
  return push(std::move(n));
}

const std::vector<double>& Tape::value(Var v) const { return at(v).value; }

double Tape::scalar(Var v) const {
  const Node& n = at(v);
  if (n.value.size() != 1) fail(errc::invalid_argument, "tape scalar: not a scalar node");
  return n.value[0];
}

const std::vector<double>& Tape::grad(Var v) const { return at(v).adjoint; }

void Tape::backward(Var root) {
  const Node& r = at(root);
  if (r.value.size() != 1) fail(errc::invalid_argument, "tape backward: root must be scalar");
  for (Node& n : nodes_) n.adjoint.assign(n.value.size(), 0.0);
  nodes_[root].adjoint[0] = 1.0;

  for (Var v = root; v >= 0; --v) {
    Node& n = nodes_[v];
    bool any = false;
    for (double g : n.adjoint)
      if (g != 0.0) any = true;
    if (!any) continue;
    switch (n.op) {
      case Op::Input:
        break;
      case Op::Add: {
        for (Var in : n.inputs) {
          Node& src = nodes_[in];
          for (std::size_t i = 0; i < n.adjoint.size(); ++i) src.adjoint[i] += n.adjoint[i];
        }
        break;
      }
      case Op::Scale: {
        Node& src = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < n.adjoint.size(); ++i) src.adjoint[i] += n.s * n.adjoint[i];
        break;
      }
      case Op::Mul: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < n.adjoint.size(); ++i) {
          a.adjoint[i] += n.adjoint[i] * b.value[i];
          b.adjoint[i] += n.adjoint[i] * a.value[i];
        }
        break;
      }
      case Op::Dot: {
        Node& a = nodes_[n.inputs[0]];
        Node& b = nodes_[n.inputs[1]];
        double g = n.adjoint[0];
        for (std::size_t i = 0; i < a.value.size(); ++i) {
          a.adjoint[i] += g * b.value[i];
          b.adjoint[i] += g * a.value[i];
        }
        break;
      }
      case Op::MatVec: {
        Node& w = nodes_[n.inputs[0]];
        Node& x = nodes_[n.inputs[1]];
        for (std::size_t i = 0; i < n.rows; ++i) {
          double g = n.adjoint[i];
          if (g == 0.0) continue;
          for (std::size_t j = 0; j < n.cols; ++j) {
            w.adjoint[i * n.cols + j] += g * x.value[j];
            x.adjoint[j] += g * w.value[i * n.cols + j];
          }
        }
        break;
      }
      case Op::L2Normalize: {
        Node& x = nodes_[n.inputs[0]];
        double norm = vec::l2_norm(x.value);
        if (norm == 0.0) break;  // subgradient convention: zero
        double gy = vec::dot(n.adjoint, n.value);
        for (std::size_t i = 0; i < x.value.size(); ++i)
          x.adjoint[i] += (n.adjoint[i] - gy * n.value[i]) / norm;
        break;
      }
      case Op::SoftmaxCE: {
        Node& z = nodes_[n.inputs[0]];
        double g = n.adjoint[0];
        for (std::size_t i = 0; i < z.value.size(); ++i) {
          double indicator = (i == n.target) ? 1.0 : 0.0;
          z.adjoint[i] += g * (n.aux[i] - indicator);
        }
        break;
      }
      case Op::SoftCE: {
        Node& z = nodes_[n.inputs[0]];
        double g = n.adjoint[0];
        std::size_t k = z.value.size();
        for (std::size_t i = 0; i < k; ++i)
          z.adjoint[i] += g * (n.aux[i] - n.aux[k + i]);
        break;
      }
      case Op::Concat: {
        std::size_t offset = 0;
        for (Var in : n.inputs) {
          Node& src = nodes_[in];
          for (std::size_t i = 0; i < src.value.size(); ++i)
            src.adjoint[i] += n.adjoint[offset + i];
          offset += src.value.size();
        }
        break;
      }
      case Op::Tanh: {
        Node& x = nodes_[n.inputs[0]];
        for (std::size_t i = 0; i < n.value.size(); ++i)
          x.adjoint[i] += n.adjoint[i] * (1.0 - n.value[i] * n.value[i]);
        break;
      }
    }
  }
}

GradCheckReport grad_check(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& theta,
                           const std::vector<double>& analytic_grad, double eps) {
  if (theta.size() != analytic_grad.size())
    fail(errc::invalid_argument, "grad_check: gradient size mismatch");
  GradCheckReport report;
  std::vector<double> probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double h = eps * std::max(1.0, std::abs(theta[i]));
    probe[i] = theta[i] + h;
    double up = f(probe);
    probe[i] = theta[i] - h;
    double down = f(probe);
    probe[i] = theta[i];
    double numeric = (up - down) / (2.0 * h);
    double rel = std::abs(analytic_grad[i] - numeric) / std::max(1.0, std::abs(numeric));
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_index = i;
    }
  }
  return report;
}

}  // namespace driftbench
