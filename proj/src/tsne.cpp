#include "textlab/tsne.hpp"

#include <algorithm>
#include <cmath>

#include "textlab/error.hpp"
#include "textlab/parallel.hpp"
#include "textlab/rng.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

namespace {

constexpr double kProbFloor = 1e-12;

double sparse_dot(const std::vector<SparseEntry>& a,
                  const std::vector<SparseEntry>& b) {
  double s = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].col == b[j].col) {
      s += a[i].weight * b[j].weight;
      ++i;
      ++j;
    } else if (a[i].col < b[j].col) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

// Shannon entropy in bits of the normalized exp(-beta d) row, plus the row
// itself. Distances are shifted by their minimum before exponentiation.
double row_entropy_bits(std::span<const double> d, double beta,
                        std::vector<double>& p_out) {
  double d_min = d[0];
  for (double x : d) d_min = std::min(d_min, x);
  double sum = 0.0;
  p_out.resize(d.size());
  for (size_t i = 0; i < d.size(); ++i) {
    double e = std::exp(-beta * (d[i] - d_min));
    p_out[i] = e;
    sum += e;
  }
  double h = 0.0;
  const double inv = 1.0 / sum;
  for (size_t i = 0; i < d.size(); ++i) {
    p_out[i] *= inv;
    if (p_out[i] > 0.0) h -= p_out[i] * std::log2(p_out[i]);
  }
  return h;
}

}  // namespace

void TsneConfig::validate_optimizer() const {
  if (n_components != 2) throw_config("tsne: n_components is fixed at 2");
  if (n_iter < exaggeration_iters)
    throw_config("tsne: n_iter must be >= exaggeration_iters");
  if (learning_rate <= 0.0) throw_config("tsne: learning_rate must be positive");
}

void TsneConfig::validate(size_t n_points) const {
  validate_optimizer();
  if (perplexity <= 0.0) throw_config("tsne: perplexity must be positive");
  if (n_points >= 2 && perplexity >= static_cast<double>(n_points - 1))
    throw_config("tsne: perplexity must be < N-1 (N=" +
                 std::to_string(n_points) + ")");
}

SquareMat cosine_distance_matrix(const SparseMatrix& rows) {
  auto empty = rows.empty_rows();
  if (!empty.empty()) {
    std::string ids;
    for (size_t i = 0; i < empty.size() && i < 16; ++i)
      ids += (i ? ", " : "") + std::to_string(empty[i]);
    if (empty.size() > 16) ids += ", ...";
    throw_data("cosine_distance_matrix: empty rows present: " + ids);
  }
  const size_t n = rows.n_rows;
  SquareMat D(n);
  parallel_for(0, n, [&](size_t i) {
    for (size_t j = i + 1; j < n; ++j) {
      double d = 1.0 - sparse_dot(rows.rows[i], rows.rows[j]);
      d = std::clamp(d, 0.0, 2.0);
      D.at(i, j) = d;
    }
  });
  // mirror (separate pass so writers never overlap)
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) D.at(j, i) = D.at(i, j);
  return D;
}

CalibratedRow calibrate_row(std::span<const double> distances,
                            double perplexity, double tol, size_t max_bisect) {
  if (distances.size() < 2)
    throw_data("calibrate_row: need at least two neighbors");
  for (double d : distances)
    if (!std::isfinite(d)) throw_data("calibrate_row: non-finite distance");

  CalibratedRow out;
  double beta = 1.0;
  double h = row_entropy_bits(distances, beta, out.p);
  double target = perplexity;

  auto met = [&](double entropy_bits) {
    return std::abs(std::exp2(entropy_bits) - target) <= tol;
  };

  // Bracket: entropy decreases monotonically in beta.
  double lo = beta, hi = beta;
  if (!met(h)) {
    if (std::exp2(h) > target) {
      // too much entropy -> raise beta
      for (int i = 0; i < 64 && std::exp2(h) > target; ++i) {
        lo = hi;
        hi *= 2.0;
        h = row_entropy_bits(distances, hi, out.p);
      }
      beta = hi;
    } else {
      for (int i = 0; i < 64 && std::exp2(h) < target; ++i) {
        hi = lo;
        lo /= 2.0;
        h = row_entropy_bits(distances, lo, out.p);
      }
      beta = lo;
    }
  }
  if (!met(h)) {
    for (size_t it = 0; it < max_bisect; ++it) {
      beta = 0.5 * (lo + hi);
      h = row_entropy_bits(distances, beta, out.p);
      if (met(h)) break;
      if (std::exp2(h) > target)
        lo = beta;  // still too spread out
      else
        hi = beta;
    }
  }
  out.beta = beta;
  out.perplexity_achieved = std::exp2(h);
  out.converged = met(h);
  return out;
}

JointResult joint_probabilities(const SquareMat& D, double perplexity,
                                double tol, size_t max_bisect) {
  const size_t n = D.n;
  if (n < 2) throw_data("joint_probabilities: need at least 2 points");

  SquareMat cond(n);
  JointResult result;
  result.betas.resize(n);
  result.perplexities.resize(n);
  std::vector<char> ok(n, 1);

  parallel_for(0, n, [&](size_t i) {
    if (n == 2) {
      // Single neighbor: the conditional is forced to 1 and the perplexity
      // target is unreachable unless it is 1.
      cond.at(i, 1 - i) = 1.0;
      result.betas[i] = 1.0;
      result.perplexities[i] = 1.0;
      ok[i] = std::abs(1.0 - perplexity) <= tol ? 1 : 0;
      return;
    }
    std::vector<double> d;
    d.reserve(n - 1);
    for (size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(D.at(i, j));
    CalibratedRow cal = calibrate_row(d, perplexity, tol, max_bisect);
    result.betas[i] = cal.beta;
    result.perplexities[i] = cal.perplexity_achieved;
    ok[i] = cal.converged ? 1 : 0;
    size_t idx = 0;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      cond.at(i, j) = cal.p[idx++];
    }
  });
  for (size_t i = 0; i < n; ++i)
    if (!ok[i]) result.failed_rows.push_back(i);

  result.P = SquareMat(n);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double p = (cond.at(i, j) + cond.at(j, i)) * scale;
      p = std::max(p, kProbFloor);
      result.P.at(i, j) = p;
      total += p;
    }
  }
  const double inv = 1.0 / total;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (i != j) result.P.at(i, j) *= inv;
  return result;
}

namespace {

// One fused pass shared by tsne_gradient / kl_embedding / tsne_fit: computes
// Z, then per-row gradient terms and the plain-P KL sum. Deterministic under
// any thread count: each row is summed sequentially, rows combined in order.
struct PassResult {
  std::vector<std::array<double, 2>> grad;
  double kl = 0.0;  // sum over off-diagonal p*ln(p/q); caller adds nothing
};

PassResult fused_pass(const SquareMat& P,
                      const std::vector<std::array<double, 2>>& Y,
                      double p_scale) {
  const size_t n = P.n;
  std::vector<double> z_row(n, 0.0);
  parallel_for(0, n, [&](size_t i) {
    double zi = 0.0;
    const double yi0 = Y[i][0], yi1 = Y[i][1];
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double dx = yi0 - Y[j][0];
      double dy = yi1 - Y[j][1];
      zi += 1.0 / (1.0 + dx * dx + dy * dy);
    }
    z_row[i] = zi;
  });
  double z = 0.0;
  for (double zi : z_row) z += zi;
  const double inv_z = 1.0 / z;

  PassResult out;
  out.grad.assign(n, {0.0, 0.0});
  std::vector<double> kl_row(n, 0.0);
  parallel_for(0, n, [&](size_t i) {
    double g0 = 0.0, g1 = 0.0, kl = 0.0;
    const double yi0 = Y[i][0], yi1 = Y[i][1];
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double dx = yi0 - Y[j][0];
      double dy = yi1 - Y[j][1];
      double w = 1.0 / (1.0 + dx * dx + dy * dy);
      double q = std::max(w * inv_z, kProbFloor);
      double p = P.at(i, j);
      double coeff = 4.0 * (p * p_scale - q) * w;
      g0 += coeff * dx;
      g1 += coeff * dy;
      if (p > 0.0) kl += p * std::log(p / q);
    }
    out.grad[i] = {g0, g1};
    kl_row[i] = kl;
  });
  for (double k : kl_row) out.kl += k;
  // flooring q can push a perfectly matched pair a hair negative
  if (out.kl < 0.0 && out.kl > -1e-12) out.kl = 0.0;
  return out;
}

}  // namespace

std::vector<std::array<double, 2>> tsne_gradient(
    const SquareMat& P, const std::vector<std::array<double, 2>>& Y) {
  for (const auto& y : Y)
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw_numeric("tsne_gradient: non-finite coordinates");
  return fused_pass(P, Y, 1.0).grad;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw_data("kl_divergence: size mismatch");
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    double pi = std::max(p[i], kProbFloor);
    double qi = std::max(q[i], kProbFloor);
    if (p[i] > 0.0) kl += p[i] * std::log(pi / qi);
  }
  return kl < 0.0 && kl > -1e-15 ? 0.0 : kl;
}

double kl_embedding(const SquareMat& P,
                    const std::vector<std::array<double, 2>>& Y) {
  return fused_pass(P, Y, 1.0).kl;
}

Embedding2D tsne_fit(const SquareMat& P, const TsneConfig& config) {
  const size_t n = P.n;
  config.validate_optimizer();

  Embedding2D emb;
  emb.config = config;
  emb.coords.resize(n);
  Rng rng(config.seed);
  for (auto& y : emb.coords) {
    y[0] = 1e-4 * rng.gaussian();
    y[1] = 1e-4 * rng.gaussian();
  }

  std::vector<std::array<double, 2>> velocity(n, {0.0, 0.0});
  emb.kl_trace.reserve(config.n_iter);

  for (size_t iter = 0; iter < config.n_iter; ++iter) {
    const double p_scale =
        iter < config.exaggeration_iters ? config.early_exaggeration : 1.0;
    const double momentum = iter < config.momentum_switch_iter
                                ? config.momentum_early
                                : config.momentum_late;
    PassResult pass = fused_pass(P, emb.coords, p_scale);
    emb.kl_trace.push_back(pass.kl);

    for (size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        velocity[i][d] =
            momentum * velocity[i][d] - config.learning_rate * pass.grad[i][d];
        emb.coords[i][d] += velocity[i][d];
      }
    }
    for (size_t i = 0; i < n; ++i) {
      if (!std::isfinite(emb.coords[i][0]) || !std::isfinite(emb.coords[i][1]))
        throw_numeric("tsne: non-finite coordinates at iteration " +
                      std::to_string(iter) +
                      " (learning rate likely too high)");
    }
  }
  return emb;
}

Embedding2D tsne_run(const SparseMatrix& rows, const TsneConfig& config,
                     std::vector<size_t>* failed_rows) {
  config.validate(rows.n_rows);
  SquareMat D = cosine_distance_matrix(rows);
  JointResult joint =
      joint_probabilities(D, config.perplexity, config.perplexity_tol,
                          config.perplexity_max_bisect);
  if (failed_rows) *failed_rows = joint.failed_rows;
  return tsne_fit(joint.P, config);
}

std::string embedding_to_text(const Embedding2D& e) {
  std::string out = "TSNE v1 " + std::to_string(e.coords.size()) + "\n";
  for (size_t i = 0; i < e.coords.size(); ++i) {
    out += std::to_string(i);
    out.push_back(' ');
    out += format_double(e.coords[i][0]);
    out.push_back(' ');
    out += format_double(e.coords[i][1]);
    out.push_back('\n');
  }
  return out;
}

Embedding2D embedding_from_text(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty()) throw_data("embedding file: empty");
  auto header = split_ws(lines[0]);
  if (header.size() != 3 || header[0] != "TSNE" || header[1] != "v1")
    throw_data("embedding file: expected 'TSNE v1 <n>' header");
  size_t n = parse_uint(header[2]);
  Embedding2D e;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto f = split_ws(lines[li]);
    if (f.size() != 3)
      throw_data("embedding file line " + std::to_string(li + 1) +
                 ": expected 'row x y'");
    if (parse_uint(f[0]) != e.coords.size())
      throw_data("embedding file line " + std::to_string(li + 1) +
                 ": rows must be consecutive from 0");
    e.coords.push_back({parse_double(f[1]), parse_double(f[2])});
  }
  if (e.coords.size() != n)
    throw_data("embedding file: header announced " + std::to_string(n) +
               " rows, found " + std::to_string(e.coords.size()));
  return e;
}

void save_embedding(const Embedding2D& e, const std::string& path) {
  write_file(path, embedding_to_text(e));
}

Embedding2D load_embedding(const std::string& path) {
  return embedding_from_text(read_file(path));
}

std::string kl_trace_to_text(const Embedding2D& e) {
  std::string out;
  for (size_t i = 0; i < e.kl_trace.size(); ++i) {
    out += std::to_string(i);
    out.push_back(' ');
    out += format_double(e.kl_trace[i]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace textlab
