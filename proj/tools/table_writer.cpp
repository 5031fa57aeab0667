#include "table_writer.hpp"

#include <cmath>
#include <stdexcept>

#include "drmean/csv.hpp"

namespace drm::cli {
namespace {

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

TableWriter::TableWriter(std::ostream& out, Format format, std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
  if (format_ == Format::Csv) {
    for (std::size_t j = 0; j < columns_.size(); ++j) out_ << (j ? "," : "") << columns_[j];
    out_ << '\n';
  }
}

void TableWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("row width does not match header");
  if (format_ == Format::JsonLines) out_ << '{';
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) out_ << ',';
    if (format_ == Format::JsonLines) out_ << json_escape(columns_[j]) << ':';
    const Cell& c = cells[j];
    if (std::holds_alternative<std::monostate>(c)) {
      if (format_ == Format::JsonLines) out_ << "null";
    } else if (const auto* s = std::get_if<std::string>(&c)) {
      out_ << (format_ == Format::JsonLines ? json_escape(*s) : csv_field(*s));
    } else if (const auto* d = std::get_if<double>(&c)) {
      if (std::isfinite(*d)) {
        out_ << format_number(*d);
      } else if (format_ == Format::JsonLines) {
        out_ << "null";
      } else {
        out_ << (std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf"));
      }
    } else {
      out_ << std::get<std::int64_t>(c);
    }
  }
  out_ << (format_ == Format::JsonLines ? "}\n" : "\n");
}

}  // namespace drm::cli
