#pragma once

#include <string>
#include <vector>

#include "ist/grid.hpp"

namespace ist {

struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One acceptance check: value compared against threshold with the given
// comparison ("<=", ">=", "in" for closed intervals).
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  double threshold_hi = 0.0;  // used by "in"
  std::string cmp = "<=";
  bool passed = false;
};

struct SlopeFit {
  std::string name;
  double slope = 0.0;
  double half_width = 0.0;  // standard-error half-width
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<SlopeFit> slopes;
  std::vector<Check> checks;
  double wall_clock_ms = 0.0;

  void metric(const std::string& name, double value);
  Check& check_le(const std::string& name, double value, double threshold);
  Check& check_in(const std::string& name, double value, double lo, double hi);
  bool all_passed() const;
};

// Least-squares slope in log-log coordinates with its standard-error
// half-width. Requires >= 3 points with positive coordinates.
SlopeFit fit_slope(const std::string& name, const std::vector<std::pair<double, double>>& points);

// report.txt: deterministic key = value lines (config, metrics, slopes,
// checks); the wall clock goes to timing.log so identical runs stay
// byte-identical.
void emit_report(const ExperimentReport& report, const std::string& dir);
ExperimentReport parse_report(const std::string& dir);

// CSV with a header row; floats at 17 significant digits.
struct CsvWriter {
  explicit CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  static std::string format(double v);

 private:
  struct Impl;
  Impl* impl;
};

}  // namespace ist
