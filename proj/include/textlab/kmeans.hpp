#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textlab/tfidf.hpp"

namespace textlab {

struct KmeansConfig {
  size_t k = 8;
  size_t n_init = 10;
  size_t max_iter = 300;
  double tol = 1e-4;  // Frobenius norm of centroid shift
  uint64_t seed = 0;
};

struct ClusterModel {
  std::vector<std::vector<double>> centroids;  // k dense vectors
  std::vector<size_t> assignments;             // per row, nearest centroid
  double inertia = 0.0;                        // sum of squared distances
  size_t n_iter_run = 0;                       // iterations of the winning run
  KmeansConfig config;

  size_t k() const { return centroids.size(); }
  size_t dim() const { return centroids.empty() ? 0 : centroids[0].size(); }
};

// k-means++ seeding: first centroid uniform, each next drawn with probability
// proportional to squared distance to the nearest chosen one. Deterministic
// per seed. Errors when there are fewer distinct points than k.
std::vector<std::vector<double>> kmeanspp_init(const SparseMatrix& points,
                                               size_t k, uint64_t seed);

struct LloydStep {
  std::vector<size_t> assignments;
  std::vector<std::vector<double>> new_centroids;
  double inertia;  // measured against the input centroids
};

// One assignment + update pass. Ties go to the lowest centroid id; an empty
// cluster is re-seeded with the point farthest from its assigned centroid.
LloydStep lloyd_step(const SparseMatrix& points,
                     const std::vector<std::vector<double>>& centroids);

// n_init independent runs (seeds derived seed+i), each iterated to
// convergence (centroid shift < tol) or max_iter; best inertia wins.
ClusterModel kmeans_fit(const SparseMatrix& points, const KmeansConfig& config);

// Per cluster, the m terms with the largest centroid components, descending;
// ties lexicographic. m is clamped to |vocab| with a warning on stderr.
std::vector<std::vector<std::string>> top_terms(const ClusterModel& model,
                                                const Vocabulary& vocab,
                                                size_t m);

// Model file: "KMEANS v1 <k> <dim>" header, centroid rows, then
// "<row> <cluster>" assignment lines.
std::string cluster_model_to_text(const ClusterModel& m);
ClusterModel cluster_model_from_text(std::string_view text);
void save_cluster_model(const ClusterModel& m, const std::string& path);
ClusterModel load_cluster_model(const std::string& path);

}  // namespace textlab
