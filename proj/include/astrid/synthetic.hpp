#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "astrid/dataset.hpp"
#include "astrid/rng.hpp"

namespace astrid {

namespace detail {
constexpr std::uint64_t kSynthStream = 0x73796e74;
}

// Benchmark generator: two balanced classes over four numeric attributes.
//
//   a1, a2  carry the class only through the parity of their signs
//           (equal signs in class 0, opposite in class 1), so each one's
//           marginal is identical in both classes and the pair is useless
//           unless kept together;
//   a3      is a shifted Gaussian, informative on its own;
//   a4      is pure noise.
//
// The generating distribution therefore factorises exactly over the
// grouping {{1,2},{3},{4}}. Sign magnitudes are kept away from zero and a
// small symmetric jitter is added so the pair signal is strong but not
// separable perfectly.
inline Dataset generate_synthetic(std::size_t n_per_class, std::uint64_t seed) {
  if (n_per_class == 0) throw std::invalid_argument("n_per_class must be positive");

  constexpr double kSignOffset = 0.6;
  constexpr double kSignScale = 0.8;
  constexpr double kJitter = 0.4;
  constexpr double kShift = 0.675;

  std::vector<Column> columns(4);
  const char* names[4] = {"a1", "a2", "a3", "a4"};
  for (std::size_t j = 0; j < 4; ++j) {
    columns[j].name = names[j];
    columns[j].kind = ColumnKind::kNumeric;
    columns[j].numeric.reserve(2 * n_per_class);
  }
  std::vector<std::int32_t> labels;
  labels.reserve(2 * n_per_class);

  for (std::int32_t c = 0; c < 2; ++c) {
    Rng rng(derive_seed(seed, detail::kSynthStream, c));
    for (std::size_t i = 0; i < n_per_class; ++i) {
      const double s1 = rng.below(2) ? 1.0 : -1.0;
      const double s2 = c == 0 ? s1 : -s1;
      const double a1 = s1 * (kSignOffset + kSignScale * std::abs(rng.normal())) + kJitter * rng.normal();
      const double a2 = s2 * (kSignOffset + kSignScale * std::abs(rng.normal())) + kJitter * rng.normal();
      const double a3 = (c == 0 ? -kShift : kShift) + rng.normal();
      const double a4 = rng.normal();
      columns[0].numeric.push_back(a1);
      columns[1].numeric.push_back(a2);
      columns[2].numeric.push_back(a3);
      columns[3].numeric.push_back(a4);
      labels.push_back(c);
    }
  }
  return Dataset(std::move(columns), std::move(labels), {"0", "1"});
}

// The grouping the generator's distribution factorises over.
inline Partition synthetic_ground_truth() {
  return Partition::validate({{1, 2}, {3}, {4}}, 4);
}

}  // namespace astrid
