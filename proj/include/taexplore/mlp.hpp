#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "taexplore/mdp.hpp"
#include "taexplore/rng.hpp"

namespace taexplore {

using Matrix = Eigen::MatrixXd;

enum class Activation { kRelu, kTanh, kIdentity };

std::string to_string(Activation act);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// Dense network parameters. Also used as the gradient container, in which
// case every block has the shape of the parameters it differentiates.
struct MlpParams {
  std::vector<DenseLayer> layers;
  Activation hidden = Activation::kRelu;
  Activation output = Activation::kIdentity;
  // Per-dimension log standard deviation of a Gaussian policy; empty for
  // networks that are not policies.
  Vector log_spread;

  int input_size() const;
  int output_size() const;
  Eigen::Index parameter_count() const;

  MlpParams zeros_like() const;
  // Layer weights, then biases, layer by layer, then log_spread.
  Vector flatten() const;
  void assign(const Vector& flat);
};

// sizes = {input, hidden..., output}. Weights ~ U[-b, b], b = sqrt(6 / fan_in);
// biases 0; log_spread = 0 with length spread_dim.
MlpParams mlp_init(const std::vector<int>& sizes, Activation hidden,
                   Activation output, RngStream& rng, int spread_dim = 0);

// Activations for a batch (one sample per column).
struct MlpCache {
  std::vector<Matrix> inputs;  // inputs[l] feeds layer l
  std::vector<Matrix> pre;     // pre-activation of layer l
  Matrix output;
};

MlpCache mlp_forward(const MlpParams& params, const Matrix& x);
Vector mlp_forward(const MlpParams& params, const Vector& x);

// Gradient of sum_j <output_gradient(:, j), f(x_j)> with respect to every
// weight and bias. log_spread gradient is returned as zeros.
MlpParams mlp_backward(const MlpParams& params, const MlpCache& cache,
                       const Matrix& output_gradient);

struct AdamState {
  double lr = 0.00025;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long step = 0;
  Vector first_moment;
  Vector second_moment;

  static AdamState for_params(const MlpParams& params, double lr = 0.00025);
};

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

// Rescales grads in place so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(MlpParams& grads, double max_norm);

// Loss value at params; fills *grad with the analytic gradient when non-null.
using LossFn = std::function<double(const MlpParams&, MlpParams*)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  Eigen::Index coordinates_checked = 0;
};

// Central differences on up to max_coordinates coordinates (all of them if
// the network is small enough, otherwise a seeded random subset).
// Relative error per coordinate is |g - g_fd| / max(|g|, |g_fd|, 1e-7).
GradCheckResult grad_check(const MlpParams& params, const LossFn& loss_fn,
                           double perturbation = 1e-5,
                           Eigen::Index max_coordinates = 4000,
                           std::uint64_t seed = 0);

// Checkpoint container: JSON object of named arrays with explicit shapes.
void save_params(const MlpParams& params, std::ostream& out);
MlpParams load_params(std::istream& in);

}  // namespace taexplore
