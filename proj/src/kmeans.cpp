#include "textlab/kmeans.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <iostream>
#include <set>

#include "textlab/error.hpp"
#include "textlab/parallel.hpp"
#include "textlab/rng.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

namespace {

double sparse_sq_norm(const std::vector<SparseEntry>& row) {
  double s = 0.0;
  for (const auto& e : row) s += e.weight * e.weight;
  return s;
}

double dense_sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double dot(const std::vector<SparseEntry>& row, const std::vector<double>& c) {
  double s = 0.0;
  for (const auto& e : row) s += e.weight * c[e.col];
  return s;
}

// ||x - c||^2 via the expansion; clamped at zero against rounding.
double sq_dist(const std::vector<SparseEntry>& row, double row_sq,
               const std::vector<double>& c, double c_sq) {
  double d = row_sq - 2.0 * dot(row, c) + c_sq;
  return d > 0.0 ? d : 0.0;
}

size_t count_distinct_rows(const SparseMatrix& points) {
  std::set<std::vector<std::pair<size_t, double>>> distinct;
  for (const auto& row : points.rows) {
    std::vector<std::pair<size_t, double>> key;
    key.reserve(row.size());
    for (const auto& e : row) key.emplace_back(e.col, e.weight);
    distinct.insert(std::move(key));
  }
  return distinct.size();
}

std::vector<double> densify(const std::vector<SparseEntry>& row, size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& e : row) out[e.col] = e.weight;
  return out;
}

}  // namespace

std::vector<std::vector<double>> kmeanspp_init(const SparseMatrix& points,
                                               size_t k, uint64_t seed) {
  const size_t n = points.n_rows;
  if (k == 0) throw_config("kmeans: k must be positive");
  if (n == 0) throw_data("kmeans: no points");
  if (count_distinct_rows(points) < k)
    throw_data("kmeans: fewer distinct points than k=" + std::to_string(k));

  Rng rng(seed);
  std::vector<double> row_sq(n);
  for (size_t i = 0; i < n; ++i) row_sq[i] = sparse_sq_norm(points.rows[i]);

  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);

  size_t first = static_cast<size_t>(rng.uniform_int(n));
  centroids.push_back(densify(points.rows[first], points.n_cols));

  std::vector<double> best_d2(n);
  double c_sq = dense_sq_norm(centroids[0]);
  for (size_t i = 0; i < n; ++i)
    best_d2[i] = sq_dist(points.rows[i], row_sq[i], centroids[0], c_sq);

  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : best_d2) total += d;
    size_t chosen = n;  // sentinel
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double cum = 0.0;
      for (size_t i = 0; i < n; ++i) {
        cum += best_d2[i];
        if (cum > target) {
          chosen = i;
          break;
        }
      }
      if (chosen == n) {  // rounding pushed the target past the last mass
        for (size_t i = n; i-- > 0;) {
          if (best_d2[i] > 0.0) {
            chosen = i;
            break;
          }
        }
      }
    }
    if (chosen == n)
      throw_data("kmeans++: degenerate distance mass before reaching k");
    centroids.push_back(densify(points.rows[chosen], points.n_cols));
    double new_sq = dense_sq_norm(centroids.back());
    for (size_t i = 0; i < n; ++i) {
      double d = sq_dist(points.rows[i], row_sq[i], centroids.back(), new_sq);
      if (d < best_d2[i]) best_d2[i] = d;
    }
  }
  return centroids;
}

LloydStep lloyd_step(const SparseMatrix& points,
                     const std::vector<std::vector<double>>& centroids) {
  const size_t n = points.n_rows;
  const size_t k = centroids.size();
  if (k == 0) throw_config("lloyd_step: no centroids");

  std::vector<double> c_sq(k);
  for (size_t c = 0; c < k; ++c) c_sq[c] = dense_sq_norm(centroids[c]);

  LloydStep step;
  step.assignments.resize(n);
  std::vector<double> point_d2(n);
  parallel_for(0, n, [&](size_t i) {
    double row_sq = sparse_sq_norm(points.rows[i]);
    size_t best = 0;
    double best_d = sq_dist(points.rows[i], row_sq, centroids[0], c_sq[0]);
    for (size_t c = 1; c < k; ++c) {
      double d = sq_dist(points.rows[i], row_sq, centroids[c], c_sq[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    step.assignments[i] = best;
    point_d2[i] = best_d;
  });

  step.inertia = 0.0;
  for (double d : point_d2) step.inertia += d;

  step.new_centroids.assign(k, std::vector<double>(points.n_cols, 0.0));
  std::vector<size_t> counts(k, 0);
  for (size_t i = 0; i < n; ++i) {
    size_t c = step.assignments[i];
    ++counts[c];
    for (const auto& e : points.rows[i]) step.new_centroids[c][e.col] += e.weight;
  }
  for (size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    double inv = 1.0 / static_cast<double>(counts[c]);
    for (double& x : step.new_centroids[c]) x *= inv;
  }

  // Empty clusters grab the points farthest from their assigned centroids,
  // one point per empty cluster, so k never shrinks.
  std::vector<char> taken(n, 0);
  for (size_t c = 0; c < k; ++c) {
    if (counts[c] != 0) continue;
    size_t far = n;
    double far_d = -1.0;
    for (size_t i = 0; i < n; ++i) {
      if (!taken[i] && point_d2[i] > far_d) {
        far_d = point_d2[i];
        far = i;
      }
    }
    if (far == n) throw_data("lloyd_step: cannot re-seed empty cluster");
    taken[far] = 1;
    step.new_centroids[c] = densify(points.rows[far], points.n_cols);
  }
  return step;
}

ClusterModel kmeans_fit(const SparseMatrix& points, const KmeansConfig& config) {
  if (config.n_init == 0) throw_config("kmeans: n_init must be >= 1");
  if (config.k == 0) throw_config("kmeans: k must be positive");

  struct RunResult {
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    size_t n_iter = 0;
  };
  std::vector<RunResult> runs(config.n_init);

  auto run_restart = [&](size_t r) {
    RunResult& run = runs[r];
    auto centroids = kmeanspp_init(points, config.k, config.seed + r);
    for (size_t iter = 0; iter < config.max_iter; ++iter) {
      LloydStep step = lloyd_step(points, centroids);
      double shift_sq = 0.0;
      for (size_t c = 0; c < config.k; ++c) {
        for (size_t d = 0; d < points.n_cols; ++d) {
          double delta = step.new_centroids[c][d] - centroids[c][d];
          shift_sq += delta * delta;
        }
      }
      centroids = std::move(step.new_centroids);
      run.n_iter = iter + 1;
      if (std::sqrt(shift_sq) < config.tol) break;
    }
    // Final assignment pass so assignments and inertia match the returned
    // centroids exactly.
    LloydStep final_step = lloyd_step(points, centroids);
    run.inertia = final_step.inertia;
    run.centroids = std::move(centroids);
  };
  std::vector<std::function<void()>> jobs;
  jobs.reserve(config.n_init);
  for (size_t r = 0; r < config.n_init; ++r)
    jobs.push_back([&run_restart, r] { run_restart(r); });
  parallel_jobs(jobs);

  size_t best = 0;
  for (size_t r = 1; r < runs.size(); ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;

  ClusterModel model;
  model.centroids = std::move(runs[best].centroids);
  LloydStep final_step = lloyd_step(points, model.centroids);
  model.assignments = std::move(final_step.assignments);
  model.inertia = final_step.inertia;
  model.n_iter_run = runs[best].n_iter;
  model.config = config;
  return model;
}

std::vector<std::vector<std::string>> top_terms(const ClusterModel& model,
                                                const Vocabulary& vocab,
                                                size_t m) {
  if (m > vocab.size()) {
    std::cerr << "warning: top_terms m=" << m << " clamped to vocabulary size "
              << vocab.size() << "\n";
    m = vocab.size();
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(model.k());
  for (const auto& centroid : model.centroids) {
    std::vector<size_t> order(vocab.size());
    for (size_t t = 0; t < vocab.size(); ++t) order[t] = t;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (centroid[a] != centroid[b]) return centroid[a] > centroid[b];
      return vocab.terms[a] < vocab.terms[b];
    });
    std::vector<std::string> terms;
    terms.reserve(m);
    for (size_t i = 0; i < m; ++i) terms.push_back(vocab.terms[order[i]]);
    out.push_back(std::move(terms));
  }
  return out;
}

std::string cluster_model_to_text(const ClusterModel& m) {
  std::string out = "KMEANS v1 " + std::to_string(m.k()) + " " +
                    std::to_string(m.dim()) + "\n";
  for (const auto& c : m.centroids) {
    for (size_t d = 0; d < c.size(); ++d) {
      if (d) out.push_back(' ');
      out += format_double(c[d]);
    }
    out.push_back('\n');
  }
  for (size_t i = 0; i < m.assignments.size(); ++i) {
    out += std::to_string(i);
    out.push_back(' ');
    out += std::to_string(m.assignments[i]);
    out.push_back('\n');
  }
  return out;
}

ClusterModel cluster_model_from_text(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty()) throw_data("cluster model file: empty");
  auto header = split_ws(lines[0]);
  if (header.size() != 4 || header[0] != "KMEANS" || header[1] != "v1")
    throw_data("cluster model file: expected 'KMEANS v1 <k> <dim>' header");
  size_t k = parse_uint(header[2]);
  size_t dim = parse_uint(header[3]);

  ClusterModel m;
  size_t li = 1;
  for (size_t c = 0; c < k; ++c, ++li) {
    if (li >= lines.size())
      throw_data("cluster model file: missing centroid row " +
                 std::to_string(c));
    auto fields = split_ws(lines[li]);
    if (fields.size() != dim)
      throw_data("cluster model file line " + std::to_string(li + 1) +
                 ": expected " + std::to_string(dim) + " values");
    std::vector<double> centroid(dim);
    for (size_t d = 0; d < dim; ++d) centroid[d] = parse_double(fields[d]);
    m.centroids.push_back(std::move(centroid));
  }
  for (; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto fields = split_ws(lines[li]);
    if (fields.size() != 2)
      throw_data("cluster model file line " + std::to_string(li + 1) +
                 ": expected '<row> <cluster>'");
    size_t row = parse_uint(fields[0]);
    size_t cluster = parse_uint(fields[1]);
    if (row != m.assignments.size())
      throw_data("cluster model file line " + std::to_string(li + 1) +
                 ": assignment rows must be consecutive from 0");
    if (cluster >= k)
      throw_data("cluster model file line " + std::to_string(li + 1) +
                 ": cluster id out of range");
    m.assignments.push_back(cluster);
  }
  m.config.k = k;
  return m;
}

void save_cluster_model(const ClusterModel& m, const std::string& path) {
  write_file(path, cluster_model_to_text(m));
}

ClusterModel load_cluster_model(const std::string& path) {
  return cluster_model_from_text(read_file(path));
}

}  // namespace textlab
