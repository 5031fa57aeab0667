#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace drm::cli {

enum class Format { Csv, JsonLines };

using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

inline Cell cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

// Emits rows as CSV (header first) or one JSON object per line. Numbers are
// printed with 15 significant digits; empty cells become "" / null.
class TableWriter {
 public:
  TableWriter(std::ostream& out, Format format, std::vector<std::string> columns);
  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
};

}  // namespace drm::cli
