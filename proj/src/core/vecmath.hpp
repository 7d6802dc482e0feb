#pragma once

#include <cstddef>
#include <vector>

namespace driftbench::vec {

// All kernels here are the single source of truth for numeric results: both the
// plain forward paths and the autodiff tape call exactly these functions, which
// is what makes "tape forward == plain forward" hold bitwise.

double dot(const std::vector<double>& a, const std::vector<double>& b);
double l2_norm(const std::vector<double>& a);

// y += alpha * x
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> scale(const std::vector<double>& a, double s);
std::vector<double> hadamard(const std::vector<double>& a, const std::vector<double>& b);

// Returns x / ||x||; the zero vector maps to itself (subgradient convention 0).
std::vector<double> l2_normalize(const std::vector<double>& x);

// w is row-major rows x cols; returns w * x of length rows.
std::vector<double> matvec(const std::vector<double>& w, const std::vector<double>& x,
                           std::size_t rows, std::size_t cols);

std::vector<double> tanh_vec(const std::vector<double>& x);

// Numerically stable softmax (max subtraction).
std::vector<double> softmax(const std::vector<double>& z);

// -log softmax(z)[target]; p_out (optional) receives softmax(z).
double softmax_cross_entropy(const std::vector<double>& z, std::size_t target,
                             std::vector<double>* p_out = nullptr);

// -sum_k q[k] * log softmax(z)[k] for a target distribution q; gradient wrt z
// is softmax(z) - q. p_out (optional) receives softmax(z).
double soft_cross_entropy(const std::vector<double>& z, const std::vector<double>& q,
                          std::vector<double>* p_out = nullptr);

// First maximum wins ties.
std::size_t argmax(const std::vector<double>& v);

double mean(const std::vector<double>& v);
// Sample standard deviation (K-1 denominator); 0 for fewer than two values.
double sample_std(const std::vector<double>& v);

}  // namespace driftbench::vec
