#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace prosody {

class Rng;

// Mixture-of-logistics attention state carried across decoder steps: one
// (mean, scale, weight) triple per component. Means only ever move forward,
// which is what makes the alignment monotone.
struct MoLState {
  Eigen::VectorXd mu;
  Eigen::VectorXd s;
  Eigen::VectorXd w;

  int components() const { return static_cast<int>(mu.size()); }

  // mu = 0 (just before the first encoder position), s = 1, w = 1/K.
  static MoLState initial(int k);
};

// Raw per-component parameters before the advance transform.
struct RawParams {
  Eigen::VectorXd mu_hat;
  Eigen::VectorXd s_hat;
  Eigen::VectorXd w_hat;

  int components() const { return static_cast<int>(mu_hat.size()); }
};

// Two-layer parameter predictor: raw = W2 tanh(W1 q + b1) + b2, the output
// split into the (mu_hat, s_hat, w_hat) blocks. Zero biases reproduce the
// plain two-matrix form.
struct ParamLayer {
  Eigen::MatrixXd w1;  // hidden x query_dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // 3K x hidden
  Eigen::VectorXd b2;

  int components() const { return static_cast<int>(w2.rows()) / 3; }
  int query_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }

  static ParamLayer zeros(int k, int query_dim, int hidden_dim);
  static ParamLayer random(int k, int query_dim, int hidden_dim, Rng& rng,
                           double scale = 0.3, bool with_bias = true);
};

struct AttnWeights {
  Eigen::MatrixXd a;  // decoder steps x encoder positions, entries in [0, 1]
};

// Logistic CDF sigma((x - mu) / s), evaluated without overflow for large
// |x - mu| / s.
double logistic_cdf(double x, double mu, double s);  // NonPositiveScale

// Alignment probabilities over encoder positions j = 1..n: per component,
// the probability mass between j - 0.5 and j + 0.5, mixed by the weights.
Eigen::VectorXd alignment_row(const MoLState& state, int n);

// mu += exp(mu_hat), s = exp(s_hat), w = softmax(w_hat). The exponential
// increment keeps every mean strictly increasing across steps.
MoLState advance_state(const MoLState& prev, const RawParams& raw);  // NonFiniteInput

RawParams predict_params(const Eigen::VectorXd& query, const ParamLayer& layer);  // DimensionMismatch

// Context vector: weighted sum of the encoder rows.
Eigen::VectorXd context(const Eigen::VectorXd& weights,
                        const Eigen::MatrixXd& enc);  // DimensionMismatch

struct DecodeResult {
  AttnWeights weights;        // steps x N
  Eigen::MatrixXd contexts;   // steps x enc_dim
  std::vector<MoLState> states;  // state after each step's advance
};

// Runs the full per-step chain — predict, advance, align, contextualize —
// from the initial state, recording everything for inspection.
DecodeResult simulate_decode(const ParamLayer& layer,
                             const std::vector<Eigen::VectorXd>& queries,
                             const Eigen::MatrixXd& enc);

// Analytic Jacobians, matched against central differences in the tests.
// predict_params: d(raw)/d(query), 3K x query_dim.
Eigen::MatrixXd predict_params_jacobian(const Eigen::VectorXd& query,
                                        const ParamLayer& layer);
// One decode step from a fixed previous state: d(context)/d(query),
// enc_dim x query_dim.
Eigen::MatrixXd decode_step_jacobian(const ParamLayer& layer, const MoLState& prev,
                                     const Eigen::VectorXd& query,
                                     const Eigen::MatrixXd& enc);

std::string alignment_to_csv(const AttnWeights& weights);

}  // namespace prosody
