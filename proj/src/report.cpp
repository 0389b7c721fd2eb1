#include "ist/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ist {

void ExperimentReport::metric(const std::string& name, double value) {
  for (const auto& m : metrics)
    if (m.first == name) throw ReportError("duplicate metric: " + name);
  metrics.emplace_back(name, value);
}

Check& ExperimentReport::check_le(const std::string& name, double value, double threshold) {
  Check c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.cmp = "<=";
  c.passed = value <= threshold;
  checks.push_back(c);
  return checks.back();
}

Check& ExperimentReport::check_in(const std::string& name, double value, double lo, double hi) {
  Check c;
  c.name = name;
  c.value = value;
  c.threshold = lo;
  c.threshold_hi = hi;
  c.cmp = "in";
  c.passed = value >= lo && value <= hi;
  checks.push_back(c);
  return checks.back();
}

bool ExperimentReport::all_passed() const {
  for (const Check& c : checks)
    if (!c.passed) return false;
  return true;
}

SlopeFit fit_slope(const std::string& name,
                   const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ReportError("fit_slope: need at least 3 points");
  const int m = int(points.size());
  double sx = 0, sy = 0;
  std::vector<double> lx(m), ly(m);
  for (int i = 0; i < m; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw ReportError("fit_slope: coordinates must be positive");
    lx[i] = std::log(points[i].first);
    ly[i] = std::log(points[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.name = name;
  fit.slope = sxy / sxx;
  const double b0 = my - fit.slope * mx;
  double rss = 0;
  for (int i = 0; i < m; ++i) {
    const double r = ly[i] - (b0 + fit.slope * lx[i]);
    rss += r * r;
  }
  fit.half_width = std::sqrt(std::max(0.0, rss / (m - 2)) / sxx);
  return fit;
}

std::string CsvWriter::format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string fmt(double v) { return CsvWriter::format(v); }

}  // namespace

void emit_report(const ExperimentReport& report, const std::string& dir) {
  if (report.metrics.empty()) throw ReportError("emit_report: empty metric list");
  std::filesystem::create_directories(dir);
  std::ofstream os(dir + "/report.txt", std::ios::binary);
  if (!os) throw ReportError("emit_report: cannot write to " + dir);
  os << "experiment = " << report.experiment << "\n";
  for (const auto& [k, v] : report.config_echo) os << "config." << k << " = " << v << "\n";
  for (const auto& [k, v] : report.metrics) os << "metric." << k << " = " << fmt(v) << "\n";
  for (const SlopeFit& s : report.slopes) {
    os << "slope." << s.name << " = " << fmt(s.slope) << "\n";
    os << "slope." << s.name << ".half_width = " << fmt(s.half_width) << "\n";
  }
  for (const Check& c : report.checks) {
    os << "check." << c.name << ".value = " << fmt(c.value) << "\n";
    if (c.cmp == "in") {
      os << "check." << c.name << ".window = [" << fmt(c.threshold) << "," << fmt(c.threshold_hi)
         << "]\n";
    } else {
      os << "check." << c.name << ".threshold = " << fmt(c.threshold) << "\n";
    }
    os << "check." << c.name << ".pass = " << (c.passed ? "true" : "false") << "\n";
  }
  os << "all_pass = " << (report.all_passed() ? "true" : "false") << "\n";
  if (!os) throw ReportError("emit_report: write failed in " + dir);
  os.close();
  std::ofstream ts(dir + "/timing.log", std::ios::binary);
  ts << "wall_clock_ms = " << fmt(report.wall_clock_ms) << "\n";
}

ExperimentReport parse_report(const std::string& dir) {
  std::ifstream is(dir + "/report.txt", std::ios::binary);
  if (!is) throw ReportError("parse_report: missing report.txt in " + dir);
  ExperimentReport rep;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 3);
    if (key == "experiment") {
      rep.experiment = val;
    } else if (key.rfind("config.", 0) == 0) {
      rep.config_echo.emplace_back(key.substr(7), val);
    } else if (key.rfind("metric.", 0) == 0) {
      rep.metrics.emplace_back(key.substr(7), std::stod(val));
    } else if (key.rfind("slope.", 0) == 0) {
      const std::string rest = key.substr(6);
      if (rest.size() > 11 && rest.rfind(".half_width") == rest.size() - 11) {
        rep.slopes.back().half_width = std::stod(val);
      } else {
        SlopeFit s;
        s.name = rest;
        s.slope = std::stod(val);
        rep.slopes.push_back(s);
      }
    } else if (key.rfind("check.", 0) == 0) {
      const std::string rest = key.substr(6);
      if (rest.size() > 6 && rest.rfind(".value") == rest.size() - 6) {
        Check c;
        c.name = rest.substr(0, rest.size() - 6);
        c.value = std::stod(val);
        rep.checks.push_back(c);
      } else if (rest.size() > 10 && rest.rfind(".threshold") == rest.size() - 10) {
        rep.checks.back().threshold = std::stod(val);
        rep.checks.back().cmp = "<=";
      } else if (rest.size() > 7 && rest.rfind(".window") == rest.size() - 7) {
        const auto comma = val.find(',');
        rep.checks.back().threshold = std::stod(val.substr(1, comma - 1));
        rep.checks.back().threshold_hi = std::stod(val.substr(comma + 1, val.size() - comma - 2));
        rep.checks.back().cmp = "in";
      } else if (rest.size() > 5 && rest.rfind(".pass") == rest.size() - 5) {
        rep.checks.back().passed = (val == "true");
      }
    }
  }
  std::ifstream ts(dir + "/timing.log", std::ios::binary);
  if (ts && std::getline(ts, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) rep.wall_clock_ms = std::stod(line.substr(eq + 3));
  }
  return rep;
}

struct CsvWriter::Impl {
  std::ofstream os;
  std::size_t columns = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl(new Impl) {
  impl->os.open(path, std::ios::binary);
  if (!impl->os) throw ReportError("CsvWriter: cannot open " + path);
  impl->columns = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    impl->os << header[i] << (i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl; }

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != impl->columns) throw ReportError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    impl->os << format(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  if (values.size() != impl->columns) throw ReportError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    impl->os << values[i] << (i + 1 < values.size() ? "," : "\n");
}

}  // namespace ist
