#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "drmean/dataset.hpp"

namespace drm {

struct CsvDataset {
  Dataset data;  // intercept added in column 0
  std::vector<std::string> covariate_names;
  std::vector<std::string> warnings;
};

// Header row "x1,...,xp,t,y" (covariate names are free, but t and y must be
// the last two columns). y is empty exactly where t = 0; a value there is
// ignored with a warning, an empty y where t = 1 is an error.
CsvDataset read_dataset_csv(std::istream& in);
CsvDataset read_dataset_csv(const std::filesystem::path& path);

// Writes the observed view (column 0 of x is assumed to be the intercept and
// skipped). Values use 17 significant digits so reading back is exact.
void write_dataset_csv(std::ostream& out, const Dataset& d);

// Shortest representation at 15 significant digits, as used in every table
// the tools emit.
std::string format_number(double value);

}  // namespace drm
