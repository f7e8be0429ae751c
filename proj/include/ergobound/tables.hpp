#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ergobound::tables {

// Embedded copy of data/reference_values.csv.
std::string_view reference_csv();

struct ReferenceValue {
  int table;
  std::string model;
  double param1;
  std::optional<double> param2;
  std::string column;
  std::string quantity;  // "rho" or "one_minus_rho"
  double value;
  std::string printed;   // as printed, for digit counting
  bool computed;
};

std::vector<ReferenceValue> reference_values();

// Half a unit in the last printed decimal place, e.g. "0.000000000004" -> 5e-13.
double printed_half_unit(const std::string& printed);

struct Cell {
  int table = 0;
  std::string model;
  double param1 = 0.0;
  std::optional<double> param2;
  std::string column;
  std::string quantity;
  double computed = 0.0;
  std::optional<double> printed;
  std::string printed_text;
  std::optional<double> closed_form;  // optimal column only
  double abs_delta = 0.0;
  double rel_delta = 0.0;
  double tolerance = 0.0;  // absolute
  bool pass = false;
  std::string note;
  // Best value of the same quantity over the local parameter grid, when run.
  std::optional<double> grid_best;
  std::optional<double> grid_param1;
  std::optional<double> grid_param2;
};

struct TableOptions {
  int grid_points = 21;      // per axis for Tables 2-4; 0 disables the search
  double grid_span = 0.2;    // relative half-width of the grid
  int oracle_states = 4000;  // matrix oracle truncation for the optimal column
  int oracle_steps = 4000;
  int threads = 0;           // 0: ERGOBOUND_THREADS or hardware concurrency
};

struct TableResult {
  int id = 0;
  std::vector<Cell> cells;
  std::vector<ReferenceValue> quoted;  // published values not recomputed here
  std::vector<std::string> warnings;
};

TableResult reproduce_table(int id, const TableOptions& opt = {});

// Worker count: ERGOBOUND_THREADS when set to an integer >= 1, else hardware concurrency.
int thread_budget();

// Runs tasks[i]() for every i on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task);

}  // namespace ergobound::tables
