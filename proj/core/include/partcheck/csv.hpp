#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "partcheck/identification.hpp"

namespace partcheck {

// Trajectory CSV: header `cell,step,<gene-id>[,<gene-id>...]`, one row per
// (cell, step), rows time-ordered within a cell.
struct TrajectoryFile {
  std::vector<std::string> columns;  // gene ids after the cell,step pair

  struct Row {
    std::string cell;
    long step = 0;
    std::vector<double> values;
  };
  std::vector<Row> rows;

  int column_index(const std::string& id) const;
};

TrajectoryFile parse_trajectory_csv(std::istream& in);
TrajectoryFile read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(std::ostream& out, const TrajectoryFile& t);

// Per-cell series of the requested columns, step-ordered; cells appear in
// first-appearance order.
struct CellSeries {
  std::string cell;
  std::vector<std::vector<double>> by_column;
};
std::vector<CellSeries> split_by_cell(const TrajectoryFile& t,
                                      std::span<const std::string> columns);

// Per-step min/max over all cells for one column (population workflows).
std::vector<MinMaxPair> population_bands(const TrajectoryFile& t, const std::string& column);

}  // namespace partcheck
