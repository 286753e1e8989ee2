#pragma once

#include <optional>
#include <string>
#include <vector>

#include "textlab/nn.hpp"

namespace textlab {

enum class Task { classification, sentiment };
std::string task_name(Task t);
Task task_from_name(std::string_view name);

struct GridRow {
  Architecture architecture = Architecture::dnn;
  double dropout_rate = 0.0;
  Task task = Task::sentiment;
  double train_acc = 0.0, train_loss = 0.0;
  double val_acc = 0.0, val_loss = 0.0;
  double test_acc = 0.0, test_loss = 0.0;
};

struct ExperimentGrid {
  std::vector<GridRow> rows;

  const GridRow* find(Architecture a, double dropout, Task t) const;
  void add(GridRow row);  // throws Error(data) on duplicate combination
};

// Accuracy in percent to 2 decimals, loss to 4 decimals.
std::string format_accuracy_percent(double acc);
std::string format_loss(double loss);

// Task x train/val/test table for one (architecture, dropout) model pair.
// Refuses, naming the tuple, when a requested row is missing.
std::string emit_table2(const ExperimentGrid& grid,
                        Architecture architecture = Architecture::dnn,
                        double dropout = 0.3);

// Model x dropout sentiment experiment table over the requested combinations.
std::string emit_table3(
    const ExperimentGrid& grid,
    const std::vector<Architecture>& architectures = {Architecture::dnn,
                                                      Architecture::cnn1d},
    const std::vector<double>& dropouts = {0.0, 0.3, 0.6});

// Full-precision CSV of the grid; round-trips exactly.
std::string grid_to_csv(const ExperimentGrid& grid);
ExperimentGrid grid_from_csv(std::string_view text);

}  // namespace textlab
