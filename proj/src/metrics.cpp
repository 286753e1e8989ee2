#include "textlab/metrics.hpp"

#include <cstdio>

#include "textlab/error.hpp"

namespace textlab {

size_t ConfusionMatrix::total() const {
  size_t s = 0;
  for (size_t c : counts) s += c;
  return s;
}

size_t ConfusionMatrix::row_sum(size_t t) const {
  size_t s = 0;
  for (size_t p = 0; p < n_classes; ++p) s += at(t, p);
  return s;
}

size_t ConfusionMatrix::col_sum(size_t p) const {
  size_t s = 0;
  for (size_t t = 0; t < n_classes; ++t) s += at(t, p);
  return s;
}

ConfusionMatrix confusion_matrix(const std::vector<size_t>& y_true,
                                 const std::vector<size_t>& y_pred,
                                 size_t n_classes) {
  if (y_true.size() != y_pred.size())
    throw_data("confusion_matrix: label vectors differ in length");
  ConfusionMatrix m;
  m.n_classes = n_classes;
  m.counts.assign(n_classes * n_classes, 0);
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] >= n_classes)
      throw_data("confusion_matrix: true label out of range at index " +
                 std::to_string(i));
    if (y_pred[i] >= n_classes)
      throw_data("confusion_matrix: predicted label out of range at index " +
                 std::to_string(i));
    ++m.at(y_true[i], y_pred[i]);
  }
  return m;
}

EvalReport classification_report(const ConfusionMatrix& confusion,
                                 const std::vector<std::string>& labels) {
  const size_t C = confusion.n_classes;
  if (C == 0) throw_data("classification_report: empty confusion matrix");
  if (!labels.empty() && labels.size() != C)
    throw_data("classification_report: label count mismatch");

  EvalReport report;
  report.confusion = confusion;
  report.n = confusion.total();
  size_t trace = 0;
  for (size_t c = 0; c < C; ++c) trace += confusion.at(c, c);
  report.accuracy = report.n == 0
                        ? 0.0
                        : static_cast<double>(trace) / static_cast<double>(report.n);

  double weighted_sum = 0.0;
  for (size_t c = 0; c < C; ++c) {
    ClassMetrics cm;
    cm.label = labels.empty() ? std::to_string(c) : labels[c];
    const size_t col = confusion.col_sum(c);
    const size_t row = confusion.row_sum(c);
    const size_t diag = confusion.at(c, c);
    cm.support = row;
    if (col == 0) {
      cm.precision = 0.0;
      cm.zero_predicted = true;
    } else {
      cm.precision = static_cast<double>(diag) / static_cast<double>(col);
    }
    cm.recall = row == 0 ? 0.0
                         : static_cast<double>(diag) / static_cast<double>(row);
    cm.f1 = (cm.precision + cm.recall) == 0.0
                ? 0.0
                : 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
    report.macro_f1 += cm.f1;
    weighted_sum += cm.f1 * static_cast<double>(cm.support);
    report.per_class.push_back(std::move(cm));
  }
  report.macro_f1 /= static_cast<double>(C);
  report.weighted_f1 =
      report.n == 0 ? 0.0 : weighted_sum / static_cast<double>(report.n);
  return report;
}

std::string EvalReport::to_text() const {
  char buf[160];
  std::string out;
  size_t label_w = 12;
  for (const auto& c : per_class) label_w = std::max(label_w, c.label.size());

  std::snprintf(buf, sizeof(buf), "%-*s %9s %9s %9s %9s\n",
                static_cast<int>(label_w), "", "precision", "recall", "f1",
                "support");
  out += buf;
  for (const auto& c : per_class) {
    std::snprintf(buf, sizeof(buf), "%-*s %9.4f %9.4f %9.4f %9zu%s\n",
                  static_cast<int>(label_w), c.label.c_str(), c.precision,
                  c.recall, c.f1, c.support,
                  c.zero_predicted ? "  (no predictions)" : "");
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "\naccuracy %.4f  macro_f1 %.4f  weighted_f1 %.4f  n %zu\n",
                accuracy, macro_f1, weighted_f1, n);
  out += buf;

  out += "\nconfusion matrix (rows true, cols predicted)\n";
  for (size_t t = 0; t < confusion.n_classes; ++t) {
    for (size_t p = 0; p < confusion.n_classes; ++p) {
      std::snprintf(buf, sizeof(buf), "%8zu", confusion.at(t, p));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace textlab
