#include "wasslab_cli/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace wasslab::cli {

std::size_t Report::passed() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const Row& r) { return r.holds; }));
}

std::size_t Report::failed() const { return rows.size() - passed(); }

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report_csv(std::ostream& out, const Report& report) {
  out << "quantity,value,std_error,tolerance,holds,seed\n";
  for (const auto& r : report.rows) {
    // Quantities may carry commas (e.g. "sum(x,x2)"); quote them.
    const bool quote = r.quantity.find(',') != std::string::npos;
    out << (quote ? "\"" : "") << r.quantity << (quote ? "\"" : "") << ',' << format_real(r.value)
        << ',' << format_real(r.std_error) << ',' << format_real(r.tolerance) << ','
        << (r.holds ? "true" : "false") << ',' << r.seed << '\n';
  }
}

void write_summary_json(std::ostream& out, const Report& report, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["suite"] = report.name;
  j["passed"] = report.passed();
  j["failed"] = report.failed();
  j["seed"] = seed;
  out << j.dump(2) << '\n';
}

}  // namespace wasslab::cli
