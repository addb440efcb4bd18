#include "dialrl/diffcore/net.hpp"

#include <cmath>

namespace dialrl::diffcore {

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "softmax") return Activation::Softmax;
  throw BadInput("unknown activation: " + s);
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

void NetSpec::validate() const {
  if (layer_sizes.size() < 2) throw BadInput("NetSpec needs at least one layer");
  if (activations.size() != layer_sizes.size() - 1)
    throw BadInput("NetSpec activation count must match layer count");
  for (int s : layer_sizes)
    if (s <= 0) throw BadInput("NetSpec layer sizes must be positive");
  for (std::size_t i = 0; i + 1 < activations.size(); ++i)
    if (activations[i] == Activation::Softmax)
      throw BadInput("softmax only allowed as final activation");
}

NetParams NetParams::glorot(const NetSpec& spec, Rng& rng) {
  spec.validate();
  NetParams p;
  p.spec = spec;
  for (int l = 0; l < spec.num_layers(); ++l) {
    int fan_in = spec.layer_sizes[l];
    int fan_out = spec.layer_sizes[l + 1];
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    Layer layer;
    layer.W.resize(fan_in, fan_out);
    for (int i = 0; i < fan_in; ++i)
      for (int j = 0; j < fan_out; ++j)
        layer.W(i, j) = rng.uniform(-bound, bound);
    layer.b = Vector::Zero(fan_out);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

NetParams NetParams::zeros(const NetSpec& spec) {
  spec.validate();
  NetParams p;
  p.spec = spec;
  for (int l = 0; l < spec.num_layers(); ++l) {
    p.layers.push_back({Matrix::Zero(spec.layer_sizes[l], spec.layer_sizes[l + 1]),
                        Vector::Zero(spec.layer_sizes[l + 1])});
  }
  return p;
}

std::size_t NetParams::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.W.size() + l.b.size();
  return n;
}

bool NetParams::all_finite() const {
  for (const auto& l : layers)
    if (!l.W.allFinite() || !l.b.allFinite()) return false;
  return true;
}

NetGrads NetGrads::zeros_like(const NetParams& p) {
  NetGrads g;
  for (const auto& l : p.layers)
    g.layers.push_back({Matrix::Zero(l.W.rows(), l.W.cols()), Vector::Zero(l.b.size())});
  return g;
}

void NetGrads::accumulate(const NetGrads& other) {
  if (layers.empty()) {
    layers = other.layers;
    return;
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].W += other.layers[i].W;
    layers[i].b += other.layers[i].b;
  }
}

void NetGrads::scale(double s) {
  for (auto& l : layers) {
    l.W *= s;
    l.b *= s;
  }
}

double NetGrads::squared_norm() const {
  double n = 0;
  for (const auto& l : layers) n += l.W.squaredNorm() + l.b.squaredNorm();
  return n;
}

namespace {

Matrix apply_activation(Activation a, const Matrix& z) {
  switch (a) {
    case Activation::Identity:
      return z;
    case Activation::Relu:
      return z.cwiseMax(0.0);
    case Activation::Tanh:
      return z.array().tanh();
    case Activation::Sigmoid:
      return (1.0 / (1.0 + (-z.array()).exp()));
    case Activation::Softmax: {
      Matrix y(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        Eigen::ArrayXd row = z.row(r).array();
        row -= row.maxCoeff();
        Eigen::ArrayXd e = row.exp();
        y.row(r) = e / e.sum();
      }
      return y;
    }
  }
  return z;
}

// grad through the activation: dZ from dY given pre (z) and post (y)
Matrix activation_backward(Activation a, const Matrix& dY, const Matrix& z,
                           const Matrix& y) {
  switch (a) {
    case Activation::Identity:
      return dY;
    case Activation::Relu:
      return (z.array() > 0.0).select(dY, Matrix::Zero(dY.rows(), dY.cols()));
    case Activation::Tanh:
      return dY.array() * (1.0 - y.array().square());
    case Activation::Sigmoid:
      return dY.array() * y.array() * (1.0 - y.array());
    case Activation::Softmax: {
      Matrix dZ(dY.rows(), dY.cols());
      for (Eigen::Index r = 0; r < dY.rows(); ++r) {
        double dot = dY.row(r).dot(y.row(r));
        dZ.row(r) = y.row(r).array() * (dY.row(r).array() - dot);
      }
      return dZ;
    }
  }
  return dY;
}

}  // namespace

Matrix forward(const NetParams& params, const Matrix& batch, ForwardCache* cache) {
  if (batch.cols() != params.spec.input_size())
    throw BadInput("forward: batch width " + std::to_string(batch.cols()) +
                   " != input size " + std::to_string(params.spec.input_size()));
  if (cache) {
    cache->input = batch;
    cache->pre.clear();
    cache->post.clear();
  }
  Matrix x = batch;
  for (int l = 0; l < params.spec.num_layers(); ++l) {
    Matrix z = (x * params.layers[l].W).rowwise() + params.layers[l].b.transpose();
    Matrix y = apply_activation(params.spec.activations[l], z);
    if (cache) {
      cache->pre.push_back(z);
      cache->post.push_back(y);
    }
    x = std::move(y);
  }
  return x;
}

Matrix backward(const NetParams& params, const ForwardCache& cache,
                const Matrix& output_grad, NetGrads& grads) {
  int L = params.spec.num_layers();
  if (static_cast<int>(cache.pre.size()) != L ||
      cache.input.cols() != params.spec.input_size())
    throw BadInput("backward: cache does not match params");
  if (output_grad.rows() != cache.post.back().rows() ||
      output_grad.cols() != cache.post.back().cols())
    throw BadInput("backward: output_grad shape mismatch");

  grads = NetGrads::zeros_like(params);
  Matrix dY = output_grad;
  for (int l = L - 1; l >= 0; --l) {
    Matrix dZ = activation_backward(params.spec.activations[l], dY, cache.pre[l],
                                    cache.post[l]);
    const Matrix& x_prev = (l == 0) ? cache.input : cache.post[l - 1];
    grads.layers[l].W = x_prev.transpose() * dZ;
    grads.layers[l].b = dZ.colwise().sum().transpose();
    dY = dZ * params.layers[l].W.transpose();
  }
  return dY;
}

Vector flatten(const NetParams& p) {
  Vector v(p.param_count());
  Eigen::Index k = 0;
  for (const auto& l : p.layers) {
    v.segment(k, l.W.size()) = Eigen::Map<const Vector>(l.W.data(), l.W.size());
    k += l.W.size();
    v.segment(k, l.b.size()) = l.b;
    k += l.b.size();
  }
  return v;
}

Vector flatten(const NetGrads& g, const NetParams& shape) {
  Vector v(shape.param_count());
  Eigen::Index k = 0;
  for (const auto& l : g.layers) {
    v.segment(k, l.W.size()) = Eigen::Map<const Vector>(l.W.data(), l.W.size());
    k += l.W.size();
    v.segment(k, l.b.size()) = l.b;
    k += l.b.size();
  }
  return v;
}

void unflatten(NetParams& p, const Vector& theta) {
  Eigen::Index k = 0;
  for (auto& l : p.layers) {
    l.W = Eigen::Map<const Matrix>(theta.data() + k, l.W.rows(), l.W.cols());
    k += l.W.size();
    l.b = theta.segment(k, l.b.size());
    k += l.b.size();
  }
}

}  // namespace dialrl::diffcore
