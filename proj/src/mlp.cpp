#include "taexplore/mlp.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

namespace taexplore {

std::string to_string(Activation act) {
  switch (act) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      return "identity";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

int MlpParams::input_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

int MlpParams::output_size() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows());
}

Eigen::Index MlpParams::parameter_count() const {
  Eigen::Index n = log_spread.size();
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

MlpParams MlpParams::zeros_like() const {
  MlpParams z;
  z.hidden = hidden;
  z.output = output;
  for (const auto& l : layers) {
    z.layers.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()),
                        Vector::Zero(l.bias.size())});
  }
  z.log_spread = Vector::Zero(log_spread.size());
  return z;
}

Vector MlpParams::flatten() const {
  Vector flat(parameter_count());
  Eigen::Index at = 0;
  for (const auto& l : layers) {
    flat.segment(at, l.weight.size()) =
        Eigen::Map<const Vector>(l.weight.data(), l.weight.size());
    at += l.weight.size();
    flat.segment(at, l.bias.size()) = l.bias;
    at += l.bias.size();
  }
  flat.segment(at, log_spread.size()) = log_spread;
  return flat;
}

void MlpParams::assign(const Vector& flat) {
  if (flat.size() != parameter_count())
    throw ContractViolation("MlpParams::assign: size mismatch");
  Eigen::Index at = 0;
  for (auto& l : layers) {
    Eigen::Map<Vector>(l.weight.data(), l.weight.size()) =
        flat.segment(at, l.weight.size());
    at += l.weight.size();
    l.bias = flat.segment(at, l.bias.size());
    at += l.bias.size();
  }
  log_spread = flat.segment(at, log_spread.size());
}

MlpParams mlp_init(const std::vector<int>& sizes, Activation hidden,
                   Activation output, RngStream& rng, int spread_dim) {
  if (sizes.size() < 2) throw ContractViolation("mlp_init: need >= 2 sizes");
  for (int s : sizes)
    if (s < 1) throw ContractViolation("mlp_init: layer sizes must be >= 1");
  MlpParams p;
  p.hidden = hidden;
  p.output = output;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / fan_in);
    DenseLayer layer{Matrix(fan_out, fan_in), Vector::Zero(fan_out)};
    // Column-major fill order keeps initialization independent of Eigen
    // expression evaluation order.
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
        layer.weight(i, j) = rng.uniform(-bound, bound);
    p.layers.push_back(std::move(layer));
  }
  p.log_spread = Vector::Zero(spread_dim);
  return p;
}

namespace {

void apply_activation(Activation act, Matrix& z) {
  switch (act) {
    case Activation::kRelu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::kTanh:
      z = z.array().tanh().matrix();
      break;
    case Activation::kIdentity:
      break;
  }
}

// Multiplies upstream gradient by the activation derivative.
void activation_backward(Activation act, const Matrix& pre, const Matrix& post,
                         Matrix& grad) {
  switch (act) {
    case Activation::kRelu:
      grad = (pre.array() > 0.0).select(grad, 0.0);
      break;
    case Activation::kTanh:
      grad.array() *= 1.0 - post.array().square();
      break;
    case Activation::kIdentity:
      break;
  }
}

}  // namespace

MlpCache mlp_forward(const MlpParams& params, const Matrix& x) {
  if (params.layers.empty()) throw ContractViolation("mlp_forward: empty net");
  if (x.rows() != params.input_size()) {
    throw ContractViolation("mlp_forward: input has " +
                            std::to_string(x.rows()) + " rows, expected " +
                            std::to_string(params.input_size()));
  }
  MlpCache cache;
  const std::size_t n = params.layers.size();
  cache.inputs.reserve(n);
  cache.pre.reserve(n);
  Matrix a = x;
  for (std::size_t l = 0; l < n; ++l) {
    const auto& layer = params.layers[l];
    Matrix z = layer.weight * a;
    z.colwise() += layer.bias;
    cache.inputs.push_back(std::move(a));
    a = z;
    apply_activation(l + 1 == n ? params.output : params.hidden, a);
    cache.pre.push_back(std::move(z));
  }
  cache.output = std::move(a);
  return cache;
}

Vector mlp_forward(const MlpParams& params, const Vector& x) {
  return mlp_forward(params, Matrix(x)).output.col(0);
}

MlpParams mlp_backward(const MlpParams& params, const MlpCache& cache,
                       const Matrix& output_gradient) {
  const std::size_t n = params.layers.size();
  if (cache.pre.size() != n || output_gradient.rows() != cache.output.rows() ||
      output_gradient.cols() != cache.output.cols()) {
    throw ContractViolation("mlp_backward: cache/gradient shape mismatch");
  }
  MlpParams grads = params.zeros_like();
  Matrix delta = output_gradient;
  for (std::size_t k = n; k-- > 0;) {
    const Matrix& post = k + 1 == n ? cache.output : cache.inputs[k + 1];
    activation_backward(k + 1 == n ? params.output : params.hidden,
                        cache.pre[k], post, delta);
    grads.layers[k].weight.noalias() = delta * cache.inputs[k].transpose();
    grads.layers[k].bias = delta.rowwise().sum();
    if (k > 0) delta = params.layers[k].weight.transpose() * delta;
  }
  return grads;
}

AdamState AdamState::for_params(const MlpParams& params, double lr) {
  AdamState s;
  s.lr = lr;
  s.first_moment = Vector::Zero(params.parameter_count());
  s.second_moment = Vector::Zero(params.parameter_count());
  return s;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  const Vector g = grads.flatten();
  if (g.size() != params.parameter_count() ||
      state.first_moment.size() != g.size() ||
      state.second_moment.size() != g.size()) {
    throw ContractViolation("adam_step: shape mismatch");
  }
  ++state.step;
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * g;
  state.second_moment = state.beta2 * state.second_moment +
                        (1.0 - state.beta2) * g.cwiseProduct(g);
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  Vector theta = params.flatten();
  theta.array() -= state.lr * (state.first_moment.array() / c1) /
                   ((state.second_moment.array() / c2).sqrt() + state.epsilon);
  params.assign(theta);
}

double clip_grad_norm(MlpParams& grads, double max_norm) {
  const Vector flat = grads.flatten();
  const double norm = flat.norm();
  if (norm > max_norm && norm > 0.0) grads.assign(flat * (max_norm / norm));
  return norm;
}

GradCheckResult grad_check(const MlpParams& params, const LossFn& loss_fn,
                           double perturbation, Eigen::Index max_coordinates,
                           std::uint64_t seed) {
  MlpParams analytic = params.zeros_like();
  loss_fn(params, &analytic);
  const Vector g = analytic.flatten();
  const Vector theta = params.flatten();

  std::vector<Eigen::Index> coords(theta.size());
  std::iota(coords.begin(), coords.end(), Eigen::Index{0});
  if (static_cast<Eigen::Index>(coords.size()) > max_coordinates) {
    RngStream rng(seed, 0x6772616463686bULL);
    std::shuffle(coords.begin(), coords.end(), rng.engine());
    coords.resize(max_coordinates);
  }

  GradCheckResult result;
  MlpParams probe = params;
  Vector work = theta;
  for (Eigen::Index i : coords) {
    work[i] = theta[i] + perturbation;
    probe.assign(work);
    const double up = loss_fn(probe, nullptr);
    work[i] = theta[i] - perturbation;
    probe.assign(work);
    const double down = loss_fn(probe, nullptr);
    work[i] = theta[i];
    const double numeric = (up - down) / (2.0 * perturbation);
    const double scale =
        std::max({std::abs(g[i]), std::abs(numeric), 1e-7});
    result.max_relative_error =
        std::max(result.max_relative_error, std::abs(g[i] - numeric) / scale);
    ++result.coordinates_checked;
  }
  return result;
}

namespace {

nlohmann::json array_json(const Matrix& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix array_from_json(const nlohmann::json& j, const std::string& name) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw std::runtime_error("checkpoint: array '" + name + "' size mismatch");
  return Eigen::Map<const Matrix>(data.data(), rows, cols);
}

}  // namespace

void save_params(const MlpParams& params, std::ostream& out) {
  nlohmann::json j;
  j["format"] = "taexplore-mlp/1";
  j["hidden_activation"] = to_string(params.hidden);
  j["output_activation"] = to_string(params.output);
  nlohmann::json arrays = nlohmann::json::object();
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    arrays["layer" + std::to_string(l) + ".weight"] =
        array_json(params.layers[l].weight);
    arrays["layer" + std::to_string(l) + ".bias"] =
        array_json(params.layers[l].bias);
  }
  if (params.log_spread.size() > 0)
    arrays["log_spread"] = array_json(params.log_spread);
  j["layer_count"] = params.layers.size();
  j["arrays"] = std::move(arrays);
  out << j.dump(1) << '\n';
}

MlpParams load_params(std::istream& in) {
  const nlohmann::json j = nlohmann::json::parse(in);
  if (j.value("format", "") != "taexplore-mlp/1")
    throw std::runtime_error("checkpoint: unrecognized format");
  MlpParams p;
  p.hidden = activation_from_string(j.at("hidden_activation"));
  p.output = activation_from_string(j.at("output_activation"));
  const auto& arrays = j.at("arrays");
  const auto count = j.at("layer_count").get<std::size_t>();
  for (std::size_t l = 0; l < count; ++l) {
    const std::string w = "layer" + std::to_string(l) + ".weight";
    const std::string b = "layer" + std::to_string(l) + ".bias";
    p.layers.push_back(
        {array_from_json(arrays.at(w), w), array_from_json(arrays.at(b), b)});
  }
  if (arrays.contains("log_spread"))
    p.log_spread = array_from_json(arrays.at("log_spread"), "log_spread");
  return p;
}

}  // namespace taexplore
