#pragma once

#include <array>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchrot/profile.hpp"

namespace patchrot {

/// Run reports: one CSV row per trajectory point plus a machine-readable
/// summary. All floating-point fields are printed with 17 significant
/// digits, so writing and re-parsing a report reproduces every value
/// bit-exactly and identical runs produce byte-identical files.

inline constexpr const char* kReportHeader =
    "t,rep,i,c0,c1,c2,c3,geo_err,ortho_defect,norm_drift,switched";

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class RepKind { Patch, Quat };

struct ReportRow {
  double t = 0.0;
  RepKind rep = RepKind::Patch;
  int patch_index = -1;       // -1 on quaternion rows (empty CSV field)
  std::array<double, 4> c{};  // chart coords in c0..c2, or quaternion in c0..c3
  bool has_c3 = false;        // true on quaternion rows
  double geo_err = 0.0;
  double ortho_defect = 0.0;
  std::optional<double> norm_drift;  // quaternion rows only
  bool switched = false;
};

struct RunSummary {
  double final_geo_err = 0.0;
  std::size_t total_switches = 0;
};

struct RunReport {
  std::vector<ReportRow> rows;  // step count + 1 (the initial state is row 0)
  RunSummary summary;
};

inline void write_report_csv(const RunReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << format_g17(r.t) << ',' << (r.rep == RepKind::Patch ? "patch" : "quat") << ',';
    if (r.patch_index >= 0) out << r.patch_index;
    out << ',' << format_g17(r.c[0]) << ',' << format_g17(r.c[1]) << ','
        << format_g17(r.c[2]) << ',';
    if (r.has_c3) out << format_g17(r.c[3]);
    out << ',' << format_g17(r.geo_err) << ',' << format_g17(r.ortho_defect) << ',';
    if (r.norm_drift) out << format_g17(*r.norm_drift);
    out << ',' << (r.switched ? '1' : '0') << '\n';
  }
  out << "# summary,final_geo_err," << format_g17(report.summary.final_geo_err) << '\n';
  out << "# summary,total_switches," << report.summary.total_switches << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  return split(line, ',');
}

inline double parse_report_double(const std::string& token, std::size_t line_no) {
  return parse_double(token, "report line " + std::to_string(line_no));
}

}  // namespace detail

/// Inverse of write_report_csv, used to check bit-exact round-trips and by
/// consumers of saved reports.
inline RunReport parse_report_csv(std::istream& in) {
  RunReport report;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kReportHeader) {
        throw std::invalid_argument("report line 1: unexpected header '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    if (line[0] == '#') {
      const auto f = detail::split_csv_line(line);
      if (f.size() == 3 && f[1] == "final_geo_err") {
        report.summary.final_geo_err = detail::parse_report_double(f[2], line_no);
      } else if (f.size() == 3 && f[1] == "total_switches") {
        report.summary.total_switches =
            static_cast<std::size_t>(detail::parse_report_double(f[2], line_no));
      }
      continue;
    }
    const auto f = detail::split_csv_line(line);
    if (f.size() != 11) {
      throw std::invalid_argument("report line " + std::to_string(line_no) +
                                  ": expected 11 fields, got " + std::to_string(f.size()));
    }
    ReportRow r;
    r.t = detail::parse_report_double(f[0], line_no);
    if (f[1] == "patch") {
      r.rep = RepKind::Patch;
    } else if (f[1] == "quat") {
      r.rep = RepKind::Quat;
    } else {
      throw std::invalid_argument("report line " + std::to_string(line_no) +
                                  ": rep must be 'patch' or 'quat'");
    }
    r.patch_index = f[2].empty()
                        ? -1
                        : static_cast<int>(detail::parse_report_double(f[2], line_no));
    r.c[0] = detail::parse_report_double(f[3], line_no);
    r.c[1] = detail::parse_report_double(f[4], line_no);
    r.c[2] = detail::parse_report_double(f[5], line_no);
    r.has_c3 = !f[6].empty();
    if (r.has_c3) r.c[3] = detail::parse_report_double(f[6], line_no);
    r.geo_err = detail::parse_report_double(f[7], line_no);
    r.ortho_defect = detail::parse_report_double(f[8], line_no);
    if (!f[9].empty()) r.norm_drift = detail::parse_report_double(f[9], line_no);
    r.switched = f[10] == "1";
    report.rows.push_back(r);
  }
  if (!saw_header) throw std::invalid_argument("report: empty input");
  return report;
}

}  // namespace patchrot
