#include "core/vecmath.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace driftbench::vec {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

std::vector<double> scale(const std::vector<double>& a, double s) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

std::vector<double> hadamard(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
  return r;
}

std::vector<double> l2_normalize(const std::vector<double>& x) {
  double n = l2_norm(x);
  if (n == 0.0) return x;
  return scale(x, 1.0 / n);
}

std::vector<double> matvec(const std::vector<double>& w, const std::vector<double>& x,
                           std::size_t rows, std::size_t cols) {
  assert(w.size() == rows * cols);
  assert(x.size() == cols);
  std::vector<double> r(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    const double* wi = w.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) s += wi[j] * x[j];
    r[i] = s;
  }
  return r;
}

std::vector<double> tanh_vec(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::tanh(x[i]);
  return r;
}

std::vector<double> softmax(const std::vector<double>& z) {
  assert(!z.empty());
  double m = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - m);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double softmax_cross_entropy(const std::vector<double>& z, std::size_t target,
                             std::vector<double>* p_out) {
  assert(target < z.size());
  double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  double loss = std::log(sum) - (z[target] - m);
  if (p_out) {
    p_out->resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) (*p_out)[i] = std::exp(z[i] - m) / sum;
  }
  return loss;
}

double soft_cross_entropy(const std::vector<double>& z, const std::vector<double>& q,
                          std::vector<double>* p_out) {
  assert(z.size() == q.size());
  double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  double lse = std::log(sum) + m;
  double loss = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) loss += q[i] * (lse - z[i]);
  if (p_out) {
    p_out->resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) (*p_out)[i] = std::exp(z[i] - m) / sum;
  }
  return loss;
}

std::size_t argmax(const std::vector<double>& v) {
  assert(!v.empty());
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

double mean(const std::vector<double>& v) {
  assert(!v.empty());
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace driftbench::vec
