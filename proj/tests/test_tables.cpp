#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "textlab/error.hpp"
#include "textlab/tables.hpp"

using namespace textlab;

namespace {

GridRow row(Architecture a, double d, Task t, double seedval) {
  GridRow r;
  r.architecture = a;
  r.dropout_rate = d;
  r.task = t;
  r.train_acc = 0.9 + seedval / 1000;
  r.train_loss = 0.05 + seedval / 500;
  r.val_acc = 0.87;
  r.val_loss = 0.46;
  r.test_acc = 0.8712;
  r.test_loss = 0.4768;
  return r;
}

ExperimentGrid full_grid() {
  ExperimentGrid g;
  int i = 0;
  for (Architecture a : {Architecture::dnn, Architecture::cnn1d})
    for (double d : {0.0, 0.3, 0.6})
      g.add(row(a, d, Task::sentiment, ++i));
  g.add(row(Architecture::dnn, 0.3, Task::classification, ++i));
  return g;
}

}  // namespace

TEST_CASE("accuracy renders in percent, loss to 4 decimals") {
  CHECK(format_accuracy_percent(0.8712) == "87.12");
  CHECK(format_loss(0.4768) == "0.4768");
  CHECK(format_accuracy_percent(1.0) == "100.00");
  CHECK(format_loss(0.028) == "0.0280");
}

TEST_CASE("table 2 contains both tasks with report formatting") {
  ExperimentGrid g = full_grid();
  std::string t2 = emit_table2(g);
  CHECK(t2.find("Classification") != std::string::npos);
  CHECK(t2.find("Sentiment") != std::string::npos);
  CHECK(t2.find("87.12") != std::string::npos);
  CHECK(t2.find("0.4768") != std::string::npos);
  CHECK(t2.find("Accuracy shown in percent") != std::string::npos);
}

TEST_CASE("table 3 lists every architecture x dropout row") {
  ExperimentGrid g = full_grid();
  std::string t3 = emit_table3(g);
  CHECK(t3.find("DNN") != std::string::npos);
  CHECK(t3.find("1D-CNN") != std::string::npos);
  CHECK(t3.find("0.3") != std::string::npos);
  CHECK(t3.find("0.6") != std::string::npos);
  // six sentiment rows
  size_t count = 0;
  for (size_t pos = t3.find("87.12"); pos != std::string::npos;
       pos = t3.find("87.12", pos + 1))
    ++count;
  CHECK(count == 6);
}

TEST_CASE("missing combinations are refused with the tuple named") {
  ExperimentGrid g = full_grid();
  g.rows.erase(g.rows.begin() + 2);  // drop (dnn, 0.6, sentiment)
  CHECK_THROWS_WITH_AS(emit_table3(g), doctest::Contains("dnn"), Error);
  CHECK_THROWS_WITH_AS(emit_table3(g), doctest::Contains("0.6"), Error);

  ExperimentGrid g2 = full_grid();
  g2.rows.pop_back();  // drop the classification row
  CHECK_THROWS_WITH_AS(emit_table2(g2), doctest::Contains("classification"),
                       Error);
}

TEST_CASE("duplicate combinations are rejected") {
  ExperimentGrid g;
  g.add(row(Architecture::dnn, 0.3, Task::sentiment, 1));
  CHECK_THROWS_WITH_AS(g.add(row(Architecture::dnn, 0.3, Task::sentiment, 2)),
                       doctest::Contains("duplicate"), Error);
}

TEST_CASE("grid CSV round-trips the grid") {
  ExperimentGrid g = full_grid();
  std::string csv = grid_to_csv(g);
  ExperimentGrid back = grid_from_csv(csv);
  REQUIRE(back.rows.size() == g.rows.size());
  for (size_t i = 0; i < g.rows.size(); ++i) {
    CHECK(back.rows[i].architecture == g.rows[i].architecture);
    CHECK(back.rows[i].dropout_rate == g.rows[i].dropout_rate);
    CHECK(back.rows[i].task == g.rows[i].task);
    CHECK(back.rows[i].train_acc == g.rows[i].train_acc);
    CHECK(back.rows[i].test_loss == g.rows[i].test_loss);
  }
  CHECK(grid_to_csv(back) == csv);
}
