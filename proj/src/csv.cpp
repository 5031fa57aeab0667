#include "drmean/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "drmean/error.hpp"

namespace drm {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_double(const std::string& cell, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ", column " +
                                             std::to_string(col + 1) + ": '" + cell +
                                             "' is not a finite number");
  }
  return v;
}

}  // namespace

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

CsvDataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split(line);
    break;
  }
  if (header.size() < 3) {
    throw Error(ErrorCode::MalformedCsv, "header needs at least one covariate plus t and y");
  }
  const std::size_t width = header.size();
  if (header[width - 2] != "t" || header[width - 1] != "y") {
    throw Error(ErrorCode::MalformedCsv, "the last two header columns must be 't' and 'y'");
  }

  CsvDataset out;
  out.covariate_names.assign(header.begin(), header.end() - 2);
  const std::size_t p = width - 2;
  std::vector<std::vector<double>> columns(p);
  std::size_t ignored = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != width) {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(cells.size()) + " fields, expected " +
                                               std::to_string(width));
    }
    for (std::size_t j = 0; j < p; ++j) columns[j].push_back(parse_double(cells[j], line_no, j));
    const std::string& tcell = cells[p];
    if (tcell != "0" && tcell != "1") {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(line_no) + ": t must be 0 or 1, got '" +
                                               tcell + "'");
    }
    const std::uint8_t t = tcell == "1" ? 1 : 0;
    out.data.t.push_back(t);
    const std::string& ycell = cells[p + 1];
    if (t == 1) {
      if (ycell.empty()) {
        throw Error(ErrorCode::MalformedCsv,
                    "line " + std::to_string(line_no) + ": respondent (t = 1) has no y");
      }
      out.data.y.push_back(parse_double(ycell, line_no, p + 1));
    } else {
      if (!ycell.empty()) ++ignored;
      out.data.y.push_back(std::nan(""));
    }
  }
  if (out.data.t.empty()) throw Error(ErrorCode::MalformedCsv, "no data rows");
  if (ignored > 0) {
    out.warnings.push_back("ignored y on " + std::to_string(ignored) + " nonrespondent rows (t = 0)");
  }
  out.data.x = DesignMatrix::from_columns(columns, true);
  return out;
}

CsvDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedCsv, "cannot open " + path.string());
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  const std::size_t first = d.x.has_intercept() ? 1 : 0;
  for (std::size_t j = first; j < d.x.cols(); ++j) out << 'x' << (j - first + 1) << ',';
  out << "t,y\n";
  char buf[40];
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = first; j < d.x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", d.x(i, j));
      out << buf << ',';
    }
    out << static_cast<int>(d.t[i]) << ',';
    if (d.t[i]) {
      std::snprintf(buf, sizeof buf, "%.17g", d.y[i]);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace drm
