#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialrl/diffcore/rng.hpp"

namespace dialrl::diffcore {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { Identity, Relu, Tanh, Sigmoid, Softmax };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Layer sizes [in, h1, ..., out] with one activation per weight layer.
// Softmax is only legal as the final activation.
struct NetSpec {
  std::vector<int> layer_sizes;
  std::vector<Activation> activations;

  void validate() const;
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(activations.size()); }
  bool operator==(const NetSpec&) const = default;
};

struct Layer {
  Matrix W;  // fan_in x fan_out
  Vector b;  // fan_out
};

struct NetParams {
  NetSpec spec;
  std::vector<Layer> layers;

  static NetParams glorot(const NetSpec& spec, Rng& rng);
  static NetParams zeros(const NetSpec& spec);
  std::size_t param_count() const;
  bool all_finite() const;
};

// Activations cached by forward, consumed by backward.
struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
};

struct NetGrads {
  std::vector<Layer> layers;
  static NetGrads zeros_like(const NetParams& p);
  void accumulate(const NetGrads& other);
  void scale(double s);
  double squared_norm() const;
};

// Batch-major: each row of `batch` is one sample.
Matrix forward(const NetParams& params, const Matrix& batch,
               ForwardCache* cache = nullptr);

// Returns the gradient w.r.t. the input batch and fills `grads`.
Matrix backward(const NetParams& params, const ForwardCache& cache,
                const Matrix& output_grad, NetGrads& grads);

// Flat views used by the gradient checker and serialization.
Vector flatten(const NetParams& p);
Vector flatten(const NetGrads& g, const NetParams& shape);
void unflatten(NetParams& p, const Vector& theta);

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dialrl::diffcore
