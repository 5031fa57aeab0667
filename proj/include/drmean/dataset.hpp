#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "drmean/matrix.hpp"

namespace drm {

// Observed data: covariates for everyone, outcome only for respondents
// (t = 1). Unobserved outcomes are stored as NaN and never read.
struct Dataset {
  DesignMatrix x;
  std::vector<std::uint8_t> t;
  std::vector<double> y;

  std::size_t size() const noexcept { return t.size(); }
  std::size_t respondents() const noexcept;

  // Shape, 0/1 indicators, finite covariates, finite y where t = 1.
  void validate() const;
};

}  // namespace drm
