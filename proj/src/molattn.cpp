#include "prosody/molattn.hpp"

#include <cmath>
#include <sstream>

#include "prosody/errors.hpp"
#include "prosody/rng.hpp"
#include "prosody/util.hpp"

namespace prosody {

MoLState MoLState::initial(int k) {
  if (k < 1) throw Error(ErrorCode::BadArgument, "need at least one component");
  MoLState state;
  state.mu = Eigen::VectorXd::Zero(k);
  state.s = Eigen::VectorXd::Ones(k);
  state.w = Eigen::VectorXd::Constant(k, 1.0 / k);
  return state;
}

ParamLayer ParamLayer::zeros(int k, int query_dim, int hidden_dim) {
  ParamLayer layer;
  layer.w1 = Eigen::MatrixXd::Zero(hidden_dim, query_dim);
  layer.b1 = Eigen::VectorXd::Zero(hidden_dim);
  layer.w2 = Eigen::MatrixXd::Zero(3 * k, hidden_dim);
  layer.b2 = Eigen::VectorXd::Zero(3 * k);
  return layer;
}

ParamLayer ParamLayer::random(int k, int query_dim, int hidden_dim, Rng& rng,
                              double scale, bool with_bias) {
  ParamLayer layer = zeros(k, query_dim, hidden_dim);
  const auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = scale * rng.normal();
  };
  fill(layer.w1);
  fill(layer.w2);
  if (with_bias) {
    for (Eigen::Index i = 0; i < layer.b1.size(); ++i) layer.b1(i) = scale * rng.normal();
    for (Eigen::Index i = 0; i < layer.b2.size(); ++i) layer.b2(i) = scale * rng.normal();
  }
  return layer;
}

double logistic_cdf(double x, double mu, double s) {
  if (!(s > 0.0))
    throw Error(ErrorCode::NonPositiveScale, "scale must be positive, got " + fmt_double(s));
  const double z = (x - mu) / s;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);  // exp of a negative value cannot overflow
  return e / (1.0 + e);
}

namespace {

// Logistic density at x; equals F(1-F)/s.
double logistic_pdf(double x, double mu, double s) {
  const double f = logistic_cdf(x, mu, s);
  return f * (1.0 - f) / s;
}

void check_state(const MoLState& state) {
  if (state.components() < 1)
    throw Error(ErrorCode::BadArgument, "state has no components");
  for (Eigen::Index k = 0; k < state.s.size(); ++k)
    if (!(state.s(k) > 0.0))
      throw Error(ErrorCode::NonPositiveScale,
                  "component " + std::to_string(k) + " has non-positive scale");
}

}  // namespace

Eigen::VectorXd alignment_row(const MoLState& state, int n) {
  if (n < 1) throw Error(ErrorCode::BadArgument, "encoder length must be at least 1");
  check_state(state);
  const int k = state.components();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
  for (int j = 1; j <= n; ++j) {
    double mass = 0.0;
    for (int c = 0; c < k; ++c) {
      const double upper = logistic_cdf(j + 0.5, state.mu(c), state.s(c));
      const double lower = logistic_cdf(j - 0.5, state.mu(c), state.s(c));
      mass += state.w(c) * std::max(0.0, upper - lower);
    }
    row(j - 1) = mass;
  }
  return row;
}

MoLState advance_state(const MoLState& prev, const RawParams& raw) {
  check_state(prev);
  const int k = prev.components();
  if (raw.mu_hat.size() != k || raw.s_hat.size() != k || raw.w_hat.size() != k)
    throw Error(ErrorCode::DimensionMismatch, "raw parameter blocks do not match K");
  if (!raw.mu_hat.allFinite() || !raw.s_hat.allFinite() || !raw.w_hat.allFinite())
    throw Error(ErrorCode::NonFiniteInput, "raw parameters contain NaN or Inf");

  MoLState next;
  next.mu = prev.mu + raw.mu_hat.array().exp().matrix();
  next.s = raw.s_hat.array().exp().matrix();
  // Softmax with max subtraction; raw weights can be large.
  const double top = raw.w_hat.maxCoeff();
  Eigen::VectorXd e = (raw.w_hat.array() - top).exp().matrix();
  next.w = e / e.sum();
  return next;
}

RawParams predict_params(const Eigen::VectorXd& query, const ParamLayer& layer) {
  if (query.size() != layer.w1.cols())
    throw Error(ErrorCode::DimensionMismatch,
                "query has " + std::to_string(query.size()) + " dims, layer expects " +
                    std::to_string(layer.w1.cols()));
  if (layer.w2.cols() != layer.w1.rows() || layer.w2.rows() % 3 != 0)
    throw Error(ErrorCode::DimensionMismatch, "layer shapes are inconsistent");

  const Eigen::VectorXd hidden = ((layer.w1 * query + layer.b1).array().tanh()).matrix();
  const Eigen::VectorXd out = layer.w2 * hidden + layer.b2;
  const int k = layer.components();
  RawParams raw;
  raw.mu_hat = out.segment(0, k);
  raw.s_hat = out.segment(k, k);
  raw.w_hat = out.segment(2 * k, k);
  return raw;
}

Eigen::VectorXd context(const Eigen::VectorXd& weights, const Eigen::MatrixXd& enc) {
  if (weights.size() != enc.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "got " + std::to_string(weights.size()) + " weights for " +
                    std::to_string(enc.rows()) + " encoder rows");
  return enc.transpose() * weights;
}

DecodeResult simulate_decode(const ParamLayer& layer,
                             const std::vector<Eigen::VectorXd>& queries,
                             const Eigen::MatrixXd& enc) {
  const int steps = static_cast<int>(queries.size());
  const int n = static_cast<int>(enc.rows());
  DecodeResult result;
  result.weights.a = Eigen::MatrixXd::Zero(steps, n);
  result.contexts = Eigen::MatrixXd::Zero(steps, enc.cols());
  result.states.reserve(queries.size());

  MoLState state = MoLState::initial(layer.components());
  for (int i = 0; i < steps; ++i) {
    state = advance_state(state, predict_params(queries[static_cast<std::size_t>(i)], layer));
    const Eigen::VectorXd row = alignment_row(state, n);
    result.weights.a.row(i) = row.transpose();
    result.contexts.row(i) = context(row, enc).transpose();
    result.states.push_back(state);
  }
  return result;
}

Eigen::MatrixXd predict_params_jacobian(const Eigen::VectorXd& query,
                                        const ParamLayer& layer) {
  if (query.size() != layer.w1.cols())
    throw Error(ErrorCode::DimensionMismatch, "query dimension mismatch");
  const Eigen::VectorXd u = layer.w1 * query + layer.b1;
  const Eigen::VectorXd t = u.array().tanh().matrix();
  const Eigen::VectorXd dtanh = (1.0 - t.array().square()).matrix();
  return layer.w2 * dtanh.asDiagonal() * layer.w1;
}

Eigen::MatrixXd decode_step_jacobian(const ParamLayer& layer, const MoLState& prev,
                                     const Eigen::VectorXd& query,
                                     const Eigen::MatrixXd& enc) {
  check_state(prev);
  const int k = layer.components();
  const int n = static_cast<int>(enc.rows());
  const RawParams raw = predict_params(query, layer);
  const MoLState state = advance_state(prev, raw);

  // d(alignment row)/d(mu, s, w), columns ordered as the raw blocks.
  Eigen::MatrixXd d_row(n, 3 * k);
  for (int j = 1; j <= n; ++j) {
    for (int c = 0; c < k; ++c) {
      const double mu = state.mu(c);
      const double s = state.s(c);
      const double z_hi = (j + 0.5 - mu) / s;
      const double z_lo = (j - 0.5 - mu) / s;
      const double pdf_hi = logistic_pdf(j + 0.5, mu, s);
      const double pdf_lo = logistic_pdf(j - 0.5, mu, s);
      const double mass = std::max(
          0.0, logistic_cdf(j + 0.5, mu, s) - logistic_cdf(j - 0.5, mu, s));
      d_row(j - 1, c) = state.w(c) * (pdf_lo - pdf_hi);
      d_row(j - 1, k + c) = state.w(c) * (z_lo * pdf_lo - z_hi * pdf_hi);
      d_row(j - 1, 2 * k + c) = mass;
    }
  }

  // d(mu, s, w)/d(raw): exponentials on the diagonal, softmax for weights.
  Eigen::MatrixXd d_state = Eigen::MatrixXd::Zero(3 * k, 3 * k);
  for (int c = 0; c < k; ++c) {
    d_state(c, c) = std::exp(raw.mu_hat(c));  // d mu_c / d mu_hat_c
    d_state(k + c, k + c) = state.s(c);       // d s_c / d s_hat_c
  }
  d_state.block(2 * k, 2 * k, k, k) =
      Eigen::MatrixXd(state.w.asDiagonal()) - state.w * state.w.transpose();

  const Eigen::MatrixXd d_raw = predict_params_jacobian(query, layer);
  return enc.transpose() * d_row * d_state * d_raw;
}

std::string alignment_to_csv(const AttnWeights& weights) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < weights.a.rows(); ++i) {
    for (Eigen::Index j = 0; j < weights.a.cols(); ++j) {
      if (j) out << ',';
      out << fmt_double(weights.a(i, j));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace prosody
