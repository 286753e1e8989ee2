#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "textlab/tfidf.hpp"

namespace textlab {

// Dense N x N matrix, row-major. Distances and joint probabilities live here.
struct SquareMat {
  size_t n = 0;
  std::vector<double> v;

  SquareMat() = default;
  explicit SquareMat(size_t n_) : n(n_), v(n_ * n_, 0.0) {}
  double& at(size_t i, size_t j) { return v[i * n + j]; }
  double at(size_t i, size_t j) const { return v[i * n + j]; }
};

struct TsneConfig {
  double perplexity = 50.0;
  size_t n_components = 2;  // the only supported value
  size_t n_iter = 1000;
  double early_exaggeration = 12.0;
  size_t exaggeration_iters = 250;
  double learning_rate = 200.0;
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  size_t momentum_switch_iter = 250;
  uint64_t seed = 0;
  double perplexity_tol = 1e-5;
  size_t perplexity_max_bisect = 50;

  void validate(size_t n_points) const;   // throws Error(config)
  void validate_optimizer() const;        // the fit-side subset
};

struct Embedding2D {
  std::vector<std::array<double, 2>> coords;
  std::vector<double> kl_trace;  // one entry per iteration, vs plain P
  TsneConfig config;
};

// D[i][j] = 1 - dot(row_i, row_j) over L2-normalized rows; zero diagonal,
// symmetric, entries clamped to [0, 2]. Rows must be non-empty.
SquareMat cosine_distance_matrix(const SparseMatrix& rows);

struct CalibratedRow {
  std::vector<double> p;  // conditional distribution over the other points
  double beta = 1.0;      // Gaussian precision found by bisection
  bool converged = false;
  double perplexity_achieved = 0.0;
};

// Bisects beta until 2^H(p) hits the target perplexity within tol (H in
// bits), capped at max_bisect halvings after bracketing.
CalibratedRow calibrate_row(std::span<const double> distances,
                            double perplexity, double tol = 1e-5,
                            size_t max_bisect = 50);

struct JointResult {
  SquareMat P;                       // symmetric, zero diagonal, sums to 1
  std::vector<size_t> failed_rows;   // rows whose bisection did not converge
  std::vector<double> betas;
  std::vector<double> perplexities;  // 2^H achieved per row
};

// Symmetrized joint distribution (P_cond + P_cond^T) / 2N with every
// off-diagonal entry floored at 1e-12 before the final renormalization.
JointResult joint_probabilities(const SquareMat& D, double perplexity,
                                double tol = 1e-5, size_t max_bisect = 50);

// Exact KL gradient: grad_i = 4 sum_j (p_ij - q_ij) w_ij (y_i - y_j) with
// w_ij = 1/(1+||y_i-y_j||^2) and q floored at 1e-12.
std::vector<std::array<double, 2>> tsne_gradient(
    const SquareMat& P, const std::vector<std::array<double, 2>>& Y);

// KL over two matched discrete distributions (off-diagonal handling is the
// caller's job when matrices are involved); both floored at 1e-12.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// KL(P || Q(Y)) over off-diagonal entries.
double kl_embedding(const SquareMat& P,
                    const std::vector<std::array<double, 2>>& Y);

// Gradient descent with early exaggeration and the two-phase momentum
// schedule. Throws Error(numeric) naming the iteration if coordinates go
// non-finite.
Embedding2D tsne_fit(const SquareMat& P, const TsneConfig& config);

// Convenience: distances -> calibration -> fit.
Embedding2D tsne_run(const SparseMatrix& rows, const TsneConfig& config,
                     std::vector<size_t>* failed_rows = nullptr);

// Embedding file: "TSNE v1 <n>" header then "row x y" lines.
std::string embedding_to_text(const Embedding2D& e);
Embedding2D embedding_from_text(std::string_view text);
void save_embedding(const Embedding2D& e, const std::string& path);
Embedding2D load_embedding(const std::string& path);
// KL trace file: "iter kl" per line.
std::string kl_trace_to_text(const Embedding2D& e);

}  // namespace textlab
