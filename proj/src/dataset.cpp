#include "drmean/dataset.hpp"

#include <cmath>
#include <string>

#include "drmean/error.hpp"

namespace drm {

std::size_t Dataset::respondents() const noexcept {
  std::size_t r = 0;
  for (auto v : t) r += v;
  return r;
}

void Dataset::validate() const {
  if (t.size() != x.rows() || y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dataset has " + std::to_string(x.rows()) + " design rows, " +
                    std::to_string(t.size()) + " indicators and " + std::to_string(y.size()) +
                    " outcomes");
  }
  x.validate();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] > 1) throw Error(ErrorCode::InvalidArgument, "response indicator must be 0/1");
    if (t[i] == 1 && !std::isfinite(y[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "respondent at row " + std::to_string(i) + " has no finite outcome");
    }
  }
}

}  // namespace drm
