#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textlab/tfidf.hpp"

namespace textlab {

enum class Architecture { dnn, cnn1d };
std::string architecture_name(Architecture a);
Architecture architecture_from_name(std::string_view name);

// Dense row-major matrix used for batches, probabilities and targets.
struct DenseMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

// Densify selected sparse rows into a batch.
DenseMatrix dense_batch(const SparseMatrix& m, const std::vector<size_t>& rows);

struct NetSpec {
  Architecture architecture = Architecture::dnn;
  size_t input_dim = 0;
  size_t hidden_units = 64;       // dnn hidden width
  size_t conv_filters = 32;       // cnn1d fields
  size_t conv_kernel = 3;
  size_t pool_size = 2;
  size_t post_flatten_dense = 128;
  size_t n_classes = 3;
  double dropout_rate = 0.0;      // in [0,1)
  uint64_t seed = 0;

  void validate() const;  // throws Error(config)
  size_t conv_out_len() const { return input_dim - conv_kernel + 1; }
  size_t pool_out_len() const { return conv_out_len() / pool_size; }
  size_t flatten_width() const { return pool_out_len() * conv_filters; }
};

struct Tensor {
  std::string name;
  std::vector<size_t> shape;  // row-major
  std::vector<double> data;

  size_t size() const { return data.size(); }
};

struct TrainedNet {
  NetSpec spec;
  std::vector<Tensor> params;
  // Adam state, aligned with params.
  std::vector<std::vector<double>> adam_m;
  std::vector<std::vector<double>> adam_v;
  size_t adam_t = 0;
};

enum class ForwardMode { train, infer };

// He-uniform weights in [-sqrt(6/fan_in), sqrt(6/fan_in)], zero biases,
// deterministic per spec.seed.
TrainedNet net_init(const NetSpec& spec);

struct ForwardCache;  // internal; defined in nn.cpp

// Softmax class probabilities for a batch. In train mode the dropout mask is
// Bernoulli(1 - dropout_rate) drawn from dropout_seed and survivors are
// scaled by 1/(1-p); in infer mode dropout is the identity.
DenseMatrix net_forward(const TrainedNet& net, const DenseMatrix& batch,
                        ForwardMode mode, uint64_t dropout_seed = 0);

struct LossAndGrads {
  double loss = 0.0;
  std::vector<Tensor> grads;  // aligned with net.params
};

// Categorical cross-entropy (softmax fused: output delta = (p - y)/B) with
// probabilities floored at 1e-12 inside the log. The dropout mask is
// reproduced from dropout_seed so it matches the corresponding forward pass.
LossAndGrads net_loss_and_grads(const TrainedNet& net, const DenseMatrix& batch,
                                const DenseMatrix& one_hot_targets,
                                ForwardMode mode, uint64_t dropout_seed = 0);

struct TrainConfig {
  size_t epochs = 15;
  size_t batch_size = 32;
  double val_fraction = 0.2;
  double learning_rate = 0.001;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-7;
  uint64_t shuffle_seed = 0;

  void validate() const;
};

// Standard Adam with bias correction; one timestep per call.
void adam_step(TrainedNet& net, const std::vector<Tensor>& grads,
               const TrainConfig& config);

struct RunHistory {
  std::vector<double> train_loss, train_acc, val_loss, val_acc;
  size_t epochs() const { return train_loss.size(); }
};

struct TrainResult {
  TrainedNet net;
  RunHistory history;
};

// Holds out the last val_fraction of `rows` for validation, then runs seeded
// minibatch epochs, densifying sparse rows one batch at a time. Y is aligned
// with `rows` (Y row i targets X row rows[i]). Epoch metrics are a dedicated
// full pass with dropout off. Every class must appear in the training
// portion.
TrainResult net_train(const NetSpec& spec, const SparseMatrix& X,
                      const std::vector<size_t>& rows, const DenseMatrix& Y,
                      const TrainConfig& config);

struct Predictions {
  DenseMatrix probs;            // rows.size() x n_classes
  std::vector<size_t> classes;  // argmax, ties -> lowest index
};

Predictions net_predict(const TrainedNet& net, const SparseMatrix& X,
                        const std::vector<size_t>& rows,
                        size_t batch_size = 256);

struct GradCheckTensor {
  std::string tensor;
  double max_rel_err = 0.0;
};

struct GradCheckCase {
  Architecture architecture;
  double dropout_rate;
  std::vector<GradCheckTensor> tensors;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckCase> cases;
  double max_rel_err = 0.0;
  double tolerance = 1e-4;
  bool pass = false;

  std::string to_text() const;
};

// Central finite differences (step h) against the analytic gradients for one
// small net; dropout uses a fixed mask via dropout_seed.
GradCheckCase grad_check_net(const NetSpec& spec, uint64_t data_seed,
                             size_t batch = 3, double h = 1e-5);

// Both architectures x dropout {0, 0.3}, n_trials random instances each,
// on small specs (input_dim <= 20).
GradCheckReport grad_check(size_t n_trials = 2, double tolerance = 1e-4);

// Checkpoint: "NET v1" header, spec lines, then per-tensor shape + values.
std::string net_to_text(const TrainedNet& net);
TrainedNet net_from_text(std::string_view text);
void save_net(const TrainedNet& net, const std::string& path);
TrainedNet load_net(const std::string& path);

// History CSV: header then "epoch,train_loss,train_acc,val_loss,val_acc".
std::string history_to_csv(const RunHistory& h);
RunHistory history_from_csv(std::string_view text);

}  // namespace textlab
