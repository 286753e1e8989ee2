#include "textlab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "textlab/error.hpp"
#include "textlab/rng.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

std::string architecture_name(Architecture a) {
  return a == Architecture::dnn ? "dnn" : "cnn1d";
}

Architecture architecture_from_name(std::string_view name) {
  if (name == "dnn") return Architecture::dnn;
  if (name == "cnn1d") return Architecture::cnn1d;
  throw_config("unknown architecture '" + std::string(name) +
               "' (expected dnn or cnn1d)");
}

DenseMatrix dense_batch(const SparseMatrix& m, const std::vector<size_t>& rows) {
  DenseMatrix out(rows.size(), m.n_cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (const auto& e : m.rows[rows[r]]) out.at(r, e.col) = e.weight;
  }
  return out;
}

void NetSpec::validate() const {
  if (input_dim == 0) throw_config("net: input_dim must be positive");
  if (n_classes < 2) throw_config("net: n_classes must be >= 2");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw_config("net: dropout_rate must be in [0,1)");
  if (architecture == Architecture::dnn) {
    if (hidden_units == 0) throw_config("net: hidden_units must be positive");
  } else {
    if (conv_filters == 0 || conv_kernel == 0 || pool_size == 0 ||
        post_flatten_dense == 0)
      throw_config("net: conv fields must be positive");
    if (input_dim < conv_kernel)
      throw_config("net: input_dim " + std::to_string(input_dim) +
                   " shorter than conv kernel " + std::to_string(conv_kernel));
    if (pool_out_len() == 0)
      throw_config("net: pooled sequence is empty (input too short)");
  }
}

namespace {

Tensor make_tensor(std::string name, std::vector<size_t> shape) {
  Tensor t;
  t.name = std::move(name);
  t.shape = std::move(shape);
  size_t n = 1;
  for (size_t s : t.shape) n *= s;
  t.data.assign(n, 0.0);
  return t;
}

void he_uniform_fill(Tensor& t, size_t fan_in, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (double& w : t.data) w = limit * (2.0 * rng.uniform() - 1.0);
}

// Inverted dropout mask: 0 with probability p, 1/(1-p) otherwise. Order of
// draws is row-major over (batch row, unit), so forward and backward agree
// whenever they share dropout_seed.
std::vector<double> dropout_mask(size_t n, double p, uint64_t seed) {
  std::vector<double> mask(n, 1.0);
  if (p <= 0.0) return mask;
  Rng rng(seed);
  const double scale = 1.0 / (1.0 - p);
  for (double& m : mask) m = rng.uniform() < 1.0 - p ? scale : 0.0;
  return mask;
}

void softmax_rows(DenseMatrix& logits) {
  for (size_t r = 0; r < logits.rows; ++r) {
    double* row = &logits.data[r * logits.cols];
    double mx = row[0];
    for (size_t c = 1; c < logits.cols; ++c) mx = std::max(mx, row[c]);
    double sum = 0.0;
    for (size_t c = 0; c < logits.cols; ++c) {
      row[c] = std::exp(row[c] - mx);
      sum += row[c];
    }
    const double inv = 1.0 / sum;
    for (size_t c = 0; c < logits.cols; ++c) row[c] *= inv;
  }
}

// out[b,o] = sum_i W[o,i] x[b,i] + bias[o]
DenseMatrix dense_forward(const DenseMatrix& x, const Tensor& W,
                          const Tensor& bias) {
  const size_t out_dim = W.shape[0];
  const size_t in_dim = W.shape[1];
  DenseMatrix out(x.rows, out_dim);
  for (size_t b = 0; b < x.rows; ++b) {
    const double* xb = &x.data[b * x.cols];
    double* ob = &out.data[b * out_dim];
    for (size_t o = 0; o < out_dim; ++o) {
      const double* w = &W.data[o * in_dim];
      double s = bias.data[o];
      for (size_t i = 0; i < in_dim; ++i) s += w[i] * xb[i];
      ob[o] = s;
    }
  }
  return out;
}

}  // namespace

TrainedNet net_init(const NetSpec& spec) {
  spec.validate();
  TrainedNet net;
  net.spec = spec;
  Rng rng(spec.seed);

  if (spec.architecture == Architecture::dnn) {
    net.params.push_back(
        make_tensor("dense1.weight", {spec.hidden_units, spec.input_dim}));
    net.params.push_back(make_tensor("dense1.bias", {spec.hidden_units}));
    net.params.push_back(
        make_tensor("output.weight", {spec.n_classes, spec.hidden_units}));
    net.params.push_back(make_tensor("output.bias", {spec.n_classes}));
    he_uniform_fill(net.params[0], spec.input_dim, rng);
    he_uniform_fill(net.params[2], spec.hidden_units, rng);
  } else {
    net.params.push_back(
        make_tensor("conv.weight", {spec.conv_filters, spec.conv_kernel}));
    net.params.push_back(make_tensor("conv.bias", {spec.conv_filters}));
    net.params.push_back(make_tensor(
        "dense1.weight", {spec.post_flatten_dense, spec.flatten_width()}));
    net.params.push_back(make_tensor("dense1.bias", {spec.post_flatten_dense}));
    net.params.push_back(make_tensor(
        "output.weight", {spec.n_classes, spec.post_flatten_dense}));
    net.params.push_back(make_tensor("output.bias", {spec.n_classes}));
    he_uniform_fill(net.params[0], spec.conv_kernel, rng);
    he_uniform_fill(net.params[2], spec.flatten_width(), rng);
    he_uniform_fill(net.params[4], spec.post_flatten_dense, rng);
  }
  net.adam_m.resize(net.params.size());
  net.adam_v.resize(net.params.size());
  for (size_t p = 0; p < net.params.size(); ++p) {
    net.adam_m[p].assign(net.params[p].size(), 0.0);
    net.adam_v[p].assign(net.params[p].size(), 0.0);
  }
  return net;
}

// Everything the backward pass needs from one forward evaluation.
struct ForwardCache {
  DenseMatrix input;
  // dnn
  DenseMatrix z1, a1_dropped;
  // cnn1d
  DenseMatrix conv_pre;              // B x (F*Lc), pre-activation
  DenseMatrix pooled_dropped;        // B x (F*Lp), after dropout
  std::vector<size_t> pool_argmax;   // B*F*Lp indices into conv positions
  DenseMatrix dense_z1, dense_a1;    // cnn dense stage
  std::vector<double> mask;          // dropout mask actually applied
  DenseMatrix probs;
};

namespace {

void check_batch(const TrainedNet& net, const DenseMatrix& batch) {
  if (batch.cols != net.spec.input_dim)
    throw_data("net forward: input layer expected " +
               std::to_string(net.spec.input_dim) + " columns, got " +
               std::to_string(batch.cols));
  for (double v : batch.data)
    if (!std::isfinite(v)) throw_data("net forward: non-finite input value");
}

ForwardCache forward_impl(const TrainedNet& net, const DenseMatrix& batch,
                          ForwardMode mode, uint64_t dropout_seed) {
  check_batch(net, batch);
  const NetSpec& spec = net.spec;
  const bool use_dropout =
      mode == ForwardMode::train && spec.dropout_rate > 0.0;

  ForwardCache cache;
  cache.input = batch;

  if (spec.architecture == Architecture::dnn) {
    cache.z1 = dense_forward(batch, net.params[0], net.params[1]);
    DenseMatrix a1 = cache.z1;
    for (double& v : a1.data) v = v > 0.0 ? v : 0.0;
    cache.mask = use_dropout
                     ? dropout_mask(a1.data.size(), spec.dropout_rate,
                                    dropout_seed)
                     : std::vector<double>();
    if (use_dropout)
      for (size_t i = 0; i < a1.data.size(); ++i) a1.data[i] *= cache.mask[i];
    cache.a1_dropped = std::move(a1);
    cache.probs = dense_forward(cache.a1_dropped, net.params[2], net.params[3]);
    softmax_rows(cache.probs);
    return cache;
  }

  // cnn1d: conv -> relu -> maxpool -> dropout -> flatten -> dense -> relu
  // -> dense -> softmax. Flatten layout is filter-major: (f, u) -> f*Lp + u.
  const size_t B = batch.rows;
  const size_t F = spec.conv_filters;
  const size_t K = spec.conv_kernel;
  const size_t Lc = spec.conv_out_len();
  const size_t Lp = spec.pool_out_len();
  const Tensor& Wc = net.params[0];
  const Tensor& bc = net.params[1];

  cache.conv_pre = DenseMatrix(B, F * Lc);
  for (size_t b = 0; b < B; ++b) {
    const double* xb = &batch.data[b * batch.cols];
    for (size_t f = 0; f < F; ++f) {
      const double* w = &Wc.data[f * K];
      double* out = &cache.conv_pre.data[b * F * Lc + f * Lc];
      const double bias = bc.data[f];
      for (size_t t = 0; t < Lc; ++t) {
        double s = bias;
        for (size_t k = 0; k < K; ++k) s += w[k] * xb[t + k];
        out[t] = s;
      }
    }
  }

  DenseMatrix pooled(B, F * Lp);
  cache.pool_argmax.assign(B * F * Lp, 0);
  for (size_t b = 0; b < B; ++b) {
    for (size_t f = 0; f < F; ++f) {
      const double* conv = &cache.conv_pre.data[b * F * Lc + f * Lc];
      for (size_t u = 0; u < Lp; ++u) {
        size_t start = u * spec.pool_size;
        double best = conv[start] > 0.0 ? conv[start] : 0.0;
        size_t best_at = start;
        for (size_t s = 1; s < spec.pool_size; ++s) {
          double v = conv[start + s] > 0.0 ? conv[start + s] : 0.0;
          if (v > best) {  // first maximum wins ties
            best = v;
            best_at = start + s;
          }
        }
        pooled.at(b, f * Lp + u) = best;
        cache.pool_argmax[(b * F + f) * Lp + u] = best_at;
      }
    }
  }

  cache.mask = use_dropout ? dropout_mask(pooled.data.size(),
                                          spec.dropout_rate, dropout_seed)
                           : std::vector<double>();
  if (use_dropout)
    for (size_t i = 0; i < pooled.data.size(); ++i)
      pooled.data[i] *= cache.mask[i];
  cache.pooled_dropped = std::move(pooled);

  cache.dense_z1 =
      dense_forward(cache.pooled_dropped, net.params[2], net.params[3]);
  cache.dense_a1 = cache.dense_z1;
  for (double& v : cache.dense_a1.data) v = v > 0.0 ? v : 0.0;
  cache.probs = dense_forward(cache.dense_a1, net.params[4], net.params[5]);
  softmax_rows(cache.probs);
  return cache;
}

double ce_loss(const DenseMatrix& probs, const DenseMatrix& targets) {
  if (targets.rows != probs.rows || targets.cols != probs.cols)
    throw_data("loss: target shape mismatch");
  double loss = 0.0;
  for (size_t i = 0; i < probs.data.size(); ++i) {
    if (targets.data[i] != 0.0)
      loss -= targets.data[i] * std::log(std::max(probs.data[i], 1e-12));
  }
  return loss / static_cast<double>(probs.rows);
}

// grads for a dense layer given downstream delta; returns upstream delta.
DenseMatrix dense_backward(const DenseMatrix& input, const Tensor& W,
                           const DenseMatrix& delta, Tensor& gW, Tensor& gb) {
  const size_t out_dim = W.shape[0];
  const size_t in_dim = W.shape[1];
  for (size_t b = 0; b < input.rows; ++b) {
    const double* xb = &input.data[b * in_dim];
    const double* db = &delta.data[b * out_dim];
    for (size_t o = 0; o < out_dim; ++o) {
      gb.data[o] += db[o];
      double* gw = &gW.data[o * in_dim];
      const double d = db[o];
      for (size_t i = 0; i < in_dim; ++i) gw[i] += d * xb[i];
    }
  }
  DenseMatrix up(input.rows, in_dim);
  for (size_t b = 0; b < input.rows; ++b) {
    const double* db = &delta.data[b * out_dim];
    double* ub = &up.data[b * in_dim];
    for (size_t o = 0; o < out_dim; ++o) {
      const double* w = &W.data[o * in_dim];
      const double d = db[o];
      for (size_t i = 0; i < in_dim; ++i) ub[i] += d * w[i];
    }
  }
  return up;
}

}  // namespace

DenseMatrix net_forward(const TrainedNet& net, const DenseMatrix& batch,
                        ForwardMode mode, uint64_t dropout_seed) {
  return forward_impl(net, batch, mode, dropout_seed).probs;
}

LossAndGrads net_loss_and_grads(const TrainedNet& net, const DenseMatrix& batch,
                                const DenseMatrix& targets, ForwardMode mode,
                                uint64_t dropout_seed) {
  ForwardCache cache = forward_impl(net, batch, mode, dropout_seed);
  const NetSpec& spec = net.spec;
  const size_t B = batch.rows;

  LossAndGrads out;
  out.loss = ce_loss(cache.probs, targets);
  out.grads.reserve(net.params.size());
  for (const auto& p : net.params) {
    Tensor g = p;
    std::fill(g.data.begin(), g.data.end(), 0.0);
    out.grads.push_back(std::move(g));
  }

  // softmax + cross-entropy: delta = (p - y) / B
  DenseMatrix delta = cache.probs;
  for (size_t i = 0; i < delta.data.size(); ++i)
    delta.data[i] = (delta.data[i] - targets.data[i]) / static_cast<double>(B);

  const bool used_dropout = !cache.mask.empty();

  if (spec.architecture == Architecture::dnn) {
    DenseMatrix d_a1 = dense_backward(cache.a1_dropped, net.params[2], delta,
                                      out.grads[2], out.grads[3]);
    if (used_dropout)
      for (size_t i = 0; i < d_a1.data.size(); ++i)
        d_a1.data[i] *= cache.mask[i];
    for (size_t i = 0; i < d_a1.data.size(); ++i)
      if (cache.z1.data[i] <= 0.0) d_a1.data[i] = 0.0;
    dense_backward(cache.input, net.params[0], d_a1, out.grads[0],
                   out.grads[1]);
    return out;
  }

  // cnn1d backward
  const size_t F = spec.conv_filters;
  const size_t K = spec.conv_kernel;
  const size_t Lc = spec.conv_out_len();
  const size_t Lp = spec.pool_out_len();

  DenseMatrix d_a1 = dense_backward(cache.dense_a1, net.params[4], delta,
                                    out.grads[4], out.grads[5]);
  for (size_t i = 0; i < d_a1.data.size(); ++i)
    if (cache.dense_z1.data[i] <= 0.0) d_a1.data[i] = 0.0;
  DenseMatrix d_flat = dense_backward(cache.pooled_dropped, net.params[2], d_a1,
                                      out.grads[2], out.grads[3]);
  if (used_dropout)
    for (size_t i = 0; i < d_flat.data.size(); ++i)
      d_flat.data[i] *= cache.mask[i];

  // route pooled gradients back to the winning conv positions, gate by relu
  DenseMatrix d_conv(B, F * Lc);
  for (size_t b = 0; b < B; ++b) {
    for (size_t f = 0; f < F; ++f) {
      for (size_t u = 0; u < Lp; ++u) {
        const double g = d_flat.at(b, f * Lp + u);
        if (g == 0.0) continue;
        const size_t t = cache.pool_argmax[(b * F + f) * Lp + u];
        if (cache.conv_pre.data[b * F * Lc + f * Lc + t] > 0.0)
          d_conv.data[b * F * Lc + f * Lc + t] += g;
      }
    }
  }

  Tensor& gWc = out.grads[0];
  Tensor& gbc = out.grads[1];
  for (size_t b = 0; b < B; ++b) {
    const double* xb = &cache.input.data[b * spec.input_dim];
    for (size_t f = 0; f < F; ++f) {
      const double* dc = &d_conv.data[b * F * Lc + f * Lc];
      double* gw = &gWc.data[f * K];
      for (size_t t = 0; t < Lc; ++t) {
        const double d = dc[t];
        if (d == 0.0) continue;
        gbc.data[f] += d;
        for (size_t k = 0; k < K; ++k) gw[k] += d * xb[t + k];
      }
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs == 0) throw_config("train: epochs must be >= 1");
  if (batch_size == 0) throw_config("train: batch_size must be >= 1");
  if (val_fraction <= 0.0 || val_fraction >= 1.0)
    throw_config("train: val_fraction must be in (0,1)");
  if (learning_rate <= 0.0) throw_config("train: learning_rate must be positive");
}

void adam_step(TrainedNet& net, const std::vector<Tensor>& grads,
               const TrainConfig& config) {
  if (grads.size() != net.params.size())
    throw_data("adam_step: gradient/parameter tensor count mismatch");
  net.adam_t += 1;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(net.adam_t));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(net.adam_t));
  for (size_t p = 0; p < net.params.size(); ++p) {
    auto& theta = net.params[p].data;
    auto& m = net.adam_m[p];
    auto& v = net.adam_v[p];
    const auto& g = grads[p].data;
    if (g.size() != theta.size())
      throw_data("adam_step: tensor " + net.params[p].name + " shape mismatch");
    for (size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      theta[i] -= config.learning_rate * m_hat /
                  (std::sqrt(v_hat) + config.adam_eps);
    }
  }
}

namespace {

size_t argmax_row(const DenseMatrix& m, size_t row) {
  const double* r = &m.data[row * m.cols];
  size_t best = 0;
  for (size_t c = 1; c < m.cols; ++c)
    if (r[c] > r[best]) best = c;
  return best;
}

struct EvalMetrics {
  double loss = 0.0;
  double accuracy = 0.0;
};

// positions index into the (rows, Y) pairing given to net_train.
EvalMetrics evaluate_split(const TrainedNet& net, const SparseMatrix& X,
                           const std::vector<size_t>& rows,
                           const DenseMatrix& Y,
                           const std::vector<size_t>& positions,
                           size_t batch_size) {
  EvalMetrics metrics;
  if (positions.empty()) return metrics;
  size_t correct = 0;
  double loss_sum = 0.0;
  for (size_t start = 0; start < positions.size(); start += batch_size) {
    size_t end = std::min(positions.size(), start + batch_size);
    std::vector<size_t> batch_rows;
    DenseMatrix yb(end - start, Y.cols);
    for (size_t i = start; i < end; ++i) {
      batch_rows.push_back(rows[positions[i]]);
      std::copy_n(&Y.data[positions[i] * Y.cols], Y.cols,
                  &yb.data[(i - start) * Y.cols]);
    }
    DenseMatrix xb = dense_batch(X, batch_rows);
    DenseMatrix probs = net_forward(net, xb, ForwardMode::infer);
    loss_sum += ce_loss(probs, yb) * static_cast<double>(end - start);
    for (size_t b = 0; b < probs.rows; ++b)
      if (argmax_row(probs, b) == argmax_row(yb, b)) ++correct;
  }
  metrics.loss = loss_sum / static_cast<double>(positions.size());
  metrics.accuracy =
      static_cast<double>(correct) / static_cast<double>(positions.size());
  return metrics;
}

}  // namespace

TrainResult net_train(const NetSpec& spec, const SparseMatrix& X,
                      const std::vector<size_t>& rows, const DenseMatrix& Y,
                      const TrainConfig& config) {
  spec.validate();
  config.validate();
  if (rows.size() != Y.rows) throw_data("train: rows and Y counts differ");
  if (Y.cols != spec.n_classes)
    throw_data("train: Y columns must equal n_classes");
  if (rows.size() < 2) throw_data("train: need at least 2 samples");
  for (size_t r : rows)
    if (r >= X.n_rows) throw_data("train: row index out of range");

  size_t n_val = static_cast<size_t>(
      std::llround(static_cast<double>(rows.size()) * config.val_fraction));
  n_val = std::clamp<size_t>(n_val, 1, rows.size() - 1);
  const size_t n_train = rows.size() - n_val;

  // every class must appear in the training portion
  std::vector<size_t> class_count(spec.n_classes, 0);
  for (size_t i = 0; i < n_train; ++i) ++class_count[argmax_row(Y, i)];
  for (size_t c = 0; c < spec.n_classes; ++c)
    if (class_count[c] == 0)
      throw_data("train: class " + std::to_string(c) +
                 " has no samples in the training portion");

  TrainResult result;
  result.net = net_init(spec);

  std::vector<size_t> train_pos(n_train);
  std::iota(train_pos.begin(), train_pos.end(), 0);
  std::vector<size_t> val_pos(n_val);
  std::iota(val_pos.begin(), val_pos.end(), n_train);

  std::vector<size_t> order = train_pos;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle_rng(Rng::derive(config.shuffle_seed, epoch, 0));
    shuffle_rng.shuffle(order);

    size_t batch_idx = 0;
    for (size_t start = 0; start < order.size();
         start += config.batch_size, ++batch_idx) {
      size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<size_t> batch_rows;
      DenseMatrix yb(end - start, Y.cols);
      for (size_t i = start; i < end; ++i) {
        batch_rows.push_back(rows[order[i]]);
        std::copy_n(&Y.data[order[i] * Y.cols], Y.cols,
                    &yb.data[(i - start) * Y.cols]);
      }
      DenseMatrix xb = dense_batch(X, batch_rows);
      uint64_t dropout_seed =
          Rng::derive(config.shuffle_seed, epoch, batch_idx + 1);
      LossAndGrads lg = net_loss_and_grads(result.net, xb, yb,
                                           ForwardMode::train, dropout_seed);
      adam_step(result.net, lg.grads, config);
    }

    EvalMetrics train_m = evaluate_split(result.net, X, rows, Y, train_pos,
                                         config.batch_size);
    EvalMetrics val_m =
        evaluate_split(result.net, X, rows, Y, val_pos, config.batch_size);
    result.history.train_loss.push_back(train_m.loss);
    result.history.train_acc.push_back(train_m.accuracy);
    result.history.val_loss.push_back(val_m.loss);
    result.history.val_acc.push_back(val_m.accuracy);
  }
  return result;
}

Predictions net_predict(const TrainedNet& net, const SparseMatrix& X,
                        const std::vector<size_t>& rows, size_t batch_size) {
  Predictions out;
  out.probs = DenseMatrix(rows.size(), net.spec.n_classes);
  out.classes.resize(rows.size());
  for (size_t start = 0; start < rows.size(); start += batch_size) {
    size_t end = std::min(rows.size(), start + batch_size);
    std::vector<size_t> batch_rows(rows.begin() + start, rows.begin() + end);
    DenseMatrix xb = dense_batch(X, batch_rows);
    DenseMatrix probs = net_forward(net, xb, ForwardMode::infer);
    std::copy_n(probs.data.begin(), probs.data.size(),
                &out.probs.data[start * net.spec.n_classes]);
    for (size_t b = 0; b < probs.rows; ++b)
      out.classes[start + b] = argmax_row(probs, b);
  }
  return out;
}

GradCheckCase grad_check_net(const NetSpec& spec, uint64_t data_seed,
                             size_t batch, double h) {
  TrainedNet net = net_init(spec);
  Rng rng(data_seed);
  DenseMatrix x(batch, spec.input_dim);
  for (double& v : x.data) v = rng.gaussian();
  DenseMatrix y(batch, spec.n_classes);
  for (size_t b = 0; b < batch; ++b)
    y.at(b, static_cast<size_t>(rng.uniform_int(spec.n_classes))) = 1.0;

  const ForwardMode mode =
      spec.dropout_rate > 0.0 ? ForwardMode::train : ForwardMode::infer;
  const uint64_t dropout_seed = Rng::derive(data_seed, 0xF1);

  LossAndGrads analytic = net_loss_and_grads(net, x, y, mode, dropout_seed);

  GradCheckCase result;
  result.architecture = spec.architecture;
  result.dropout_rate = spec.dropout_rate;
  for (size_t p = 0; p < net.params.size(); ++p) {
    GradCheckTensor entry;
    entry.tensor = net.params[p].name;
    for (size_t i = 0; i < net.params[p].size(); ++i) {
      const double keep = net.params[p].data[i];
      net.params[p].data[i] = keep + h;
      double lp = net_loss_and_grads(net, x, y, mode, dropout_seed).loss;
      net.params[p].data[i] = keep - h;
      double lm = net_loss_and_grads(net, x, y, mode, dropout_seed).loss;
      net.params[p].data[i] = keep;
      const double fd = (lp - lm) / (2.0 * h);
      const double an = analytic.grads[p].data[i];
      double rel = 0.0;
      if (std::max(std::abs(an), std::abs(fd)) >= 1e-10)
        rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-5});
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
    }
    result.max_rel_err = std::max(result.max_rel_err, entry.max_rel_err);
    result.tensors.push_back(std::move(entry));
  }
  return result;
}

GradCheckReport grad_check(size_t n_trials, double tolerance) {
  GradCheckReport report;
  report.tolerance = tolerance;
  for (Architecture arch : {Architecture::dnn, Architecture::cnn1d}) {
    for (double dropout : {0.0, 0.3}) {
      for (size_t trial = 0; trial < n_trials; ++trial) {
        NetSpec spec;
        spec.architecture = arch;
        spec.input_dim = 12;
        spec.hidden_units = 6;
        spec.n_classes = 3;
        spec.dropout_rate = dropout;
        spec.seed = 1000 + trial;
        GradCheckCase c = grad_check_net(spec, 7700 + trial * 13);
        report.max_rel_err = std::max(report.max_rel_err, c.max_rel_err);
        report.cases.push_back(std::move(c));
      }
    }
  }
  report.pass = report.max_rel_err < tolerance;
  return report;
}

std::string GradCheckReport::to_text() const {
  std::string out = "gradient check vs central finite differences\n";
  for (const auto& c : cases) {
    out += architecture_name(c.architecture) + " dropout " +
           format_double(c.dropout_rate) + "\n";
    for (const auto& t : c.tensors)
      out += "  " + t.tensor + " max_rel_err " + format_double(t.max_rel_err) +
             "\n";
  }
  out += "max_rel_err " + format_double(max_rel_err) + " tolerance " +
         format_double(tolerance) + (pass ? " PASS" : " FAIL") + "\n";
  return out;
}

std::string net_to_text(const TrainedNet& net) {
  const NetSpec& s = net.spec;
  std::string out = "NET v1\n";
  out += "architecture " + architecture_name(s.architecture) + "\n";
  out += "input_dim " + std::to_string(s.input_dim) + "\n";
  out += "hidden_units " + std::to_string(s.hidden_units) + "\n";
  out += "conv_filters " + std::to_string(s.conv_filters) + "\n";
  out += "conv_kernel " + std::to_string(s.conv_kernel) + "\n";
  out += "pool_size " + std::to_string(s.pool_size) + "\n";
  out += "post_flatten_dense " + std::to_string(s.post_flatten_dense) + "\n";
  out += "n_classes " + std::to_string(s.n_classes) + "\n";
  out += "dropout_rate " + format_double(s.dropout_rate) + "\n";
  out += "seed " + std::to_string(s.seed) + "\n";
  for (const auto& t : net.params) {
    out += "tensor " + t.name;
    for (size_t d : t.shape) out += " " + std::to_string(d);
    out.push_back('\n');
    for (size_t i = 0; i < t.data.size(); ++i) {
      if (i) out.push_back(' ');
      out += format_double(t.data[i]);
    }
    out.push_back('\n');
  }
  return out;
}

TrainedNet net_from_text(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || trim(lines[0]) != "NET v1")
    throw_data("net checkpoint: expected 'NET v1' header");
  NetSpec spec;
  size_t li = 1;
  auto next_kv = [&](std::string_view key) -> std::string_view {
    if (li >= lines.size())
      throw_data("net checkpoint: missing field " + std::string(key));
    auto parts = split_ws(lines[li]);
    if (parts.size() != 2 || parts[0] != key)
      throw_data("net checkpoint line " + std::to_string(li + 1) +
                 ": expected '" + std::string(key) + " <value>'");
    ++li;
    return parts[1];
  };
  spec.architecture = architecture_from_name(next_kv("architecture"));
  spec.input_dim = parse_uint(next_kv("input_dim"));
  spec.hidden_units = parse_uint(next_kv("hidden_units"));
  spec.conv_filters = parse_uint(next_kv("conv_filters"));
  spec.conv_kernel = parse_uint(next_kv("conv_kernel"));
  spec.pool_size = parse_uint(next_kv("pool_size"));
  spec.post_flatten_dense = parse_uint(next_kv("post_flatten_dense"));
  spec.n_classes = parse_uint(next_kv("n_classes"));
  spec.dropout_rate = parse_double(next_kv("dropout_rate"));
  spec.seed = parse_uint(next_kv("seed"));

  TrainedNet net = net_init(spec);
  for (auto& t : net.params) {
    if (li >= lines.size())
      throw_data("net checkpoint: missing tensor " + t.name);
    auto head = split_ws(lines[li]);
    if (head.size() != 2 + t.shape.size() || head[0] != "tensor" ||
        head[1] != t.name)
      throw_data("net checkpoint line " + std::to_string(li + 1) +
                 ": expected tensor " + t.name);
    for (size_t d = 0; d < t.shape.size(); ++d) {
      if (parse_uint(head[2 + d]) != t.shape[d])
        throw_data("net checkpoint: tensor " + t.name + " shape mismatch");
    }
    ++li;
    if (li >= lines.size())
      throw_data("net checkpoint: missing values for tensor " + t.name);
    auto values = split_ws(lines[li]);
    if (values.size() != t.data.size())
      throw_data("net checkpoint: tensor " + t.name + " expected " +
                 std::to_string(t.data.size()) + " values, got " +
                 std::to_string(values.size()));
    for (size_t i = 0; i < values.size(); ++i)
      t.data[i] = parse_double(values[i]);
    ++li;
  }
  return net;
}

void save_net(const TrainedNet& net, const std::string& path) {
  write_file(path, net_to_text(net));
}

TrainedNet load_net(const std::string& path) {
  return net_from_text(read_file(path));
}

std::string history_to_csv(const RunHistory& h) {
  std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (size_t e = 0; e < h.epochs(); ++e) {
    out += std::to_string(e + 1) + "," + format_double(h.train_loss[e]) + "," +
           format_double(h.train_acc[e]) + "," + format_double(h.val_loss[e]) +
           "," + format_double(h.val_acc[e]) + "\n";
  }
  return out;
}

RunHistory history_from_csv(std::string_view text) {
  RunHistory h;
  bool first = true;
  for (std::string_view line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    auto f = split(line, ',');
    if (f.size() != 5) throw_data("history csv: expected 5 fields per row");
    h.train_loss.push_back(parse_double(f[1]));
    h.train_acc.push_back(parse_double(f[2]));
    h.val_loss.push_back(parse_double(f[3]));
    h.val_acc.push_back(parse_double(f[4]));
  }
  return h;
}

}  // namespace textlab
