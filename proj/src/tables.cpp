#include "textlab/tables.hpp"

#include <cmath>
#include <cstdio>

#include "textlab/error.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

std::string task_name(Task t) {
  return t == Task::classification ? "classification" : "sentiment";
}

Task task_from_name(std::string_view name) {
  if (name == "classification") return Task::classification;
  if (name == "sentiment") return Task::sentiment;
  throw_config("unknown task '" + std::string(name) +
               "' (expected classification or sentiment)");
}

namespace {

bool same_dropout(double a, double b) { return std::abs(a - b) < 1e-9; }

std::string display_model(Architecture a) {
  return a == Architecture::dnn ? "DNN" : "1D-CNN";
}

std::string display_dropout(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", d);
  return buf;
}

[[noreturn]] void missing_row(Architecture a, double dropout, Task t) {
  throw_data("experiment grid: missing combination (" + architecture_name(a) +
             ", dropout " + display_dropout(dropout) + ", " + task_name(t) +
             ")");
}

}  // namespace

const GridRow* ExperimentGrid::find(Architecture a, double dropout,
                                    Task t) const {
  for (const auto& r : rows) {
    if (r.architecture == a && same_dropout(r.dropout_rate, dropout) &&
        r.task == t)
      return &r;
  }
  return nullptr;
}

void ExperimentGrid::add(GridRow row) {
  if (find(row.architecture, row.dropout_rate, row.task))
    throw_data("experiment grid: duplicate combination (" +
               architecture_name(row.architecture) + ", dropout " +
               display_dropout(row.dropout_rate) + ", " + task_name(row.task) +
               ")");
  rows.push_back(row);
}

std::string format_accuracy_percent(double acc) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", acc * 100.0);
  return buf;
}

std::string format_loss(double loss) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", loss);
  return buf;
}

std::string emit_table2(const ExperimentGrid& grid, Architecture architecture,
                        double dropout) {
  char buf[256];
  std::string out;
  out += "Dense Neural Network Performance\n";
  std::snprintf(buf, sizeof(buf), "%-16s %-10s %-10s %-10s %-10s %-10s %-10s\n",
                "", "Training", "", "Validation", "", "Test", "");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-16s %-10s %-10s %-10s %-10s %-10s %-10s\n",
                "Task", "Accuracy", "Loss", "Accuracy", "Loss", "Accuracy",
                "Loss");
  out += buf;
  for (Task t : {Task::classification, Task::sentiment}) {
    const GridRow* r = grid.find(architecture, dropout, t);
    if (!r) missing_row(architecture, dropout, t);
    std::string task_label = t == Task::classification ? "Classification"
                                                       : "Sentiment";
    std::snprintf(buf, sizeof(buf), "%-16s %-10s %-10s %-10s %-10s %-10s %-10s\n",
                  task_label.c_str(),
                  format_accuracy_percent(r->train_acc).c_str(),
                  format_loss(r->train_loss).c_str(),
                  format_accuracy_percent(r->val_acc).c_str(),
                  format_loss(r->val_loss).c_str(),
                  format_accuracy_percent(r->test_acc).c_str(),
                  format_loss(r->test_loss).c_str());
    out += buf;
  }
  out += "Note: Accuracy shown in percent.\n";
  return out;
}

std::string emit_table3(const ExperimentGrid& grid,
                        const std::vector<Architecture>& architectures,
                        const std::vector<double>& dropouts) {
  char buf[256];
  std::string out;
  out += "Model Regularization and Architecture Experiments for Sentiment "
         "Prediction\n";
  std::snprintf(buf, sizeof(buf),
                "%-8s %-8s %-10s %-10s %-10s %-10s %-10s %-10s\n", "", "",
                "Training", "", "Validation", "", "Test", "");
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "%-8s %-8s %-10s %-10s %-10s %-10s %-10s %-10s\n", "Model",
                "Dropout", "Accuracy", "Loss", "Accuracy", "Loss", "Accuracy",
                "Loss");
  out += buf;
  for (Architecture a : architectures) {
    for (double d : dropouts) {
      const GridRow* r = grid.find(a, d, Task::sentiment);
      if (!r) missing_row(a, d, Task::sentiment);
      std::snprintf(buf, sizeof(buf),
                    "%-8s %-8s %-10s %-10s %-10s %-10s %-10s %-10s\n",
                    display_model(a).c_str(), display_dropout(d).c_str(),
                    format_accuracy_percent(r->train_acc).c_str(),
                    format_loss(r->train_loss).c_str(),
                    format_accuracy_percent(r->val_acc).c_str(),
                    format_loss(r->val_loss).c_str(),
                    format_accuracy_percent(r->test_acc).c_str(),
                    format_loss(r->test_loss).c_str());
      out += buf;
    }
  }
  out += "Note: Dropout rate shown, accuracy shown in percent.\n";
  return out;
}

std::string grid_to_csv(const ExperimentGrid& grid) {
  std::string out =
      "architecture,dropout,task,train_acc,train_loss,val_acc,val_loss,"
      "test_acc,test_loss\n";
  for (const auto& r : grid.rows) {
    out += architecture_name(r.architecture) + "," +
           format_double(r.dropout_rate) + "," + task_name(r.task) + "," +
           format_double(r.train_acc) + "," + format_double(r.train_loss) +
           "," + format_double(r.val_acc) + "," + format_double(r.val_loss) +
           "," + format_double(r.test_acc) + "," + format_double(r.test_loss) +
           "\n";
  }
  return out;
}

ExperimentGrid grid_from_csv(std::string_view text) {
  ExperimentGrid grid;
  bool header = true;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split(line, ',');
    if (f.size() != 9)
      throw_data("grid csv line " + std::to_string(line_no) +
                 ": expected 9 fields");
    GridRow r;
    r.architecture = architecture_from_name(f[0]);
    r.dropout_rate = parse_double(f[1]);
    r.task = task_from_name(f[2]);
    r.train_acc = parse_double(f[3]);
    r.train_loss = parse_double(f[4]);
    r.val_acc = parse_double(f[5]);
    r.val_loss = parse_double(f[6]);
    r.test_acc = parse_double(f[7]);
    r.test_loss = parse_double(f[8]);
    grid.add(r);
  }
  return grid;
}

}  // namespace textlab
