#pragma once

// Reference kappa computed straight from the rating sequences with
// agreement weights, independent of the library's disagreement-weight form.

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <utility>
#include <vector>

namespace oracle {

/// weighted = false: Cohen's kappa. weighted = true: linear agreement
/// weights w_ij = 1 - |i - j| / (k - 1).
inline double kappa(const std::vector<std::pair<std::size_t, std::size_t>>& ratings,
                    std::size_t k, bool weighted) {
  const double n = static_cast<double>(ratings.size());
  auto weight = [&](std::size_t i, std::size_t j) {
    if (!weighted) return i == j ? 1.0 : 0.0;
    const double d = std::abs(static_cast<double>(i) - static_cast<double>(j));
    return 1.0 - d / static_cast<double>(k - 1);
  };
  std::vector<double> pa(k, 0.0), pb(k, 0.0);
  double po = 0.0;
  for (const auto& [a, b] : ratings) {
    pa[a] += 1.0 / n;
    pb[b] += 1.0 / n;
    po += weight(a, b) / n;
  }
  double pe = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) pe += weight(i, j) * pa[i] * pb[j];
  if (std::abs(1.0 - pe) < 1e-15) return 1.0;
  return (po - pe) / (1.0 - pe);
}

}  // namespace oracle
