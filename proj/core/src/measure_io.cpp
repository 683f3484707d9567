#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wasslab/error.hpp"
#include "wasslab/measure.hpp"

namespace wasslab {
namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\r')) ++used;
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
}

}  // namespace

void write_measure_csv(std::ostream& out, const DiscreteMeasure& measure) {
  const std::size_t d = measure.dim();
  for (std::size_t k = 1; k <= d; ++k) out << "x_" << k << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < measure.size(); ++i) {
    for (double x : measure.point(i)) out << format17(x) << ',';
    out << format17(measure.weight(i)) << '\n';
  }
}

void write_measure_csv(const std::string& path, const DiscreteMeasure& measure) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_measure_csv(out, measure);
  if (!out) throw IoError("write failed for '" + path + "'");
}

DiscreteMeasure read_measure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty measure CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "weight") {
    throw IoError("measure CSV header must be x_1,...,x_d,weight");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != "x_" + std::to_string(k + 1)) {
      throw IoError("measure CSV header column " + std::to_string(k + 1) + " must be x_" +
                    std::to_string(k + 1));
    }
  }
  std::vector<double> coords;
  std::vector<double> weights;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != d + 1) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) +
                    " columns");
    }
    for (std::size_t k = 0; k < d; ++k) coords.push_back(parse_number(cells[k], line_no));
    weights.push_back(parse_number(cells[d], line_no));
  }
  if (weights.empty()) throw IoError("measure CSV has no atoms");
  const auto n = static_cast<Eigen::Index>(weights.size());
  PointCloud points = Eigen::Map<PointCloud>(coords.data(), n, static_cast<Eigen::Index>(d));
  try {
    return DiscreteMeasure(std::move(points), Eigen::Map<Eigen::VectorXd>(weights.data(), n));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid measure: ") + e.what());
  }
}

DiscreteMeasure read_measure_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_measure_csv(in);
}

}  // namespace wasslab
