#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wasslab::cli {

/// One verification row. For Monte Carlo rows `value` is the residual
/// against the exact target and `tolerance` the allowed |value|.
struct Row {
  std::string quantity;
  double value = 0.0;
  double std_error = 0.0;
  double tolerance = 0.0;
  bool holds = true;
  std::uint64_t seed = 0;
};

struct Report {
  std::string name;
  std::vector<Row> rows;

  void add(Row row) { rows.push_back(std::move(row)); }
  std::size_t passed() const;
  std::size_t failed() const;
  bool all_hold() const { return failed() == 0; }
};

/// quantity,value,std_error,tolerance,holds,seed
void write_report_csv(std::ostream& out, const Report& report);
/// {"suite": ..., "passed": ..., "failed": ..., "seed": ...}
void write_summary_json(std::ostream& out, const Report& report, std::uint64_t seed);

std::string format_real(double v);

}  // namespace wasslab::cli
