#include "partcheck/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "partcheck/errors.hpp"

namespace partcheck {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  double v = 0.0;
  auto [p, ec] = std::from_chars(b, e, v);
  while (p < e && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  if (ec != std::errc{} || p != e) {
    throw CsvError("cannot parse number '" + s + "'", line_no);
  }
  return v;
}

long parse_long(const std::string& s, std::size_t line_no) {
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  long v = 0;
  auto [p, ec] = std::from_chars(b, e, v);
  while (p < e && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  if (ec != std::errc{} || p != e) {
    throw CsvError("cannot parse step '" + s + "'", line_no);
  }
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

int TrajectoryFile::column_index(const std::string& id) const {
  auto it = std::find(columns.begin(), columns.end(), id);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

TrajectoryFile parse_trajectory_csv(std::istream& in) {
  TrajectoryFile t;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw CsvError("empty file", 1);
  ++line_no;
  auto header = split_line(strip_cr(line));
  if (header.size() < 3 || header[0] != "cell" || header[1] != "step") {
    throw CsvError("header must be 'cell,step,<gene-id>[,...]'", line_no);
  }
  t.columns.assign(header.begin() + 2, header.end());

  std::map<std::string, long> last_step;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = strip_cr(line);
    if (stripped.empty()) continue;
    auto fields = split_line(stripped);
    if (fields.size() != header.size()) {
      throw CsvError("expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()),
                     line_no);
    }
    TrajectoryFile::Row row;
    row.cell = fields[0];
    row.step = parse_long(fields[1], line_no);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      row.values.push_back(parse_double(fields[i], line_no));
    }
    auto it = last_step.find(row.cell);
    if (it != last_step.end() && row.step <= it->second) {
      throw CsvError("steps for cell '" + row.cell + "' must be strictly increasing", line_no);
    }
    last_step[row.cell] = row.step;
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw CsvError("no data rows", line_no);
  return t;
}

TrajectoryFile read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path.string() + "'", 0);
  return parse_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryFile& t) {
  out << "cell,step";
  for (const auto& c : t.columns) out << ',' << c;
  out << '\n';
  std::ostringstream num;
  num.precision(17);
  for (const auto& row : t.rows) {
    out << row.cell << ',' << row.step;
    for (double v : row.values) {
      num.str("");
      num << v;
      out << ',' << num.str();
    }
    out << '\n';
  }
}

std::vector<CellSeries> split_by_cell(const TrajectoryFile& t,
                                      std::span<const std::string> columns) {
  std::vector<int> idx;
  for (const auto& c : columns) {
    int i = t.column_index(c);
    if (i < 0) throw ArgumentError("trajectory file has no column '" + c + "'");
    idx.push_back(i);
  }
  std::vector<CellSeries> out;
  std::map<std::string, std::size_t> pos;
  for (const auto& row : t.rows) {
    auto it = pos.find(row.cell);
    if (it == pos.end()) {
      it = pos.emplace(row.cell, out.size()).first;
      out.push_back({row.cell, std::vector<std::vector<double>>(idx.size())});
    }
    CellSeries& cs = out[it->second];
    for (std::size_t k = 0; k < idx.size(); ++k) {
      cs.by_column[k].push_back(row.values[idx[k]]);
    }
  }
  return out;
}

std::vector<MinMaxPair> population_bands(const TrajectoryFile& t, const std::string& column) {
  int ci = t.column_index(column);
  if (ci < 0) throw ArgumentError("trajectory file has no column '" + column + "'");
  std::map<long, MinMaxPair> bands;
  for (const auto& row : t.rows) {
    double v = row.values[ci];
    auto [it, fresh] = bands.try_emplace(row.step, MinMaxPair{v, v});
    if (!fresh) {
      it->second.min = std::min(it->second.min, v);
      it->second.max = std::max(it->second.max, v);
    }
  }
  std::vector<MinMaxPair> out;
  out.reserve(bands.size());
  for (const auto& [step, band] : bands) out.push_back(band);
  return out;
}

}  // namespace partcheck
