#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace textlab {

// Rows are true classes, columns predicted.
struct ConfusionMatrix {
  size_t n_classes = 0;
  std::vector<size_t> counts;  // row-major C x C

  size_t& at(size_t t, size_t p) { return counts[t * n_classes + p]; }
  size_t at(size_t t, size_t p) const { return counts[t * n_classes + p]; }
  size_t total() const;
  size_t row_sum(size_t t) const;
  size_t col_sum(size_t p) const;
};

ConfusionMatrix confusion_matrix(const std::vector<size_t>& y_true,
                                 const std::vector<size_t>& y_pred,
                                 size_t n_classes);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;
  bool zero_predicted = false;  // precision defined as 0, flagged
};

struct EvalReport {
  size_t n = 0;
  double accuracy = 0.0;  // trace / n
  std::vector<ClassMetrics> per_class;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
  ConfusionMatrix confusion;

  std::string to_text() const;  // aligned text report plus the matrix
};

// precision_j = diag_j/colsum_j (0 and flagged when the column is empty),
// recall_i = diag_i/rowsum_i, f1 the harmonic mean (0 when p + r = 0).
EvalReport classification_report(const ConfusionMatrix& confusion,
                                 const std::vector<std::string>& labels = {});

}  // namespace textlab
