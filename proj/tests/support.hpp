#pragma once

// Shared helpers for the test suite: data generators, independent statistical
// oracles (chi-square, Kolmogorov-Smirnov, set partition enumeration), and
// expected values computed by routes independent of the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <astrid/astrid.hpp>

namespace testsupport {

// --------------------------------------------------------------------------
// Statistical oracles

// 0.99 quantiles of the chi-square distribution by degrees of freedom.
// A goodness-of-fit statistic below the quantile accepts uniformity at the
// 1% level.
inline double chi2_crit_99(int df) {
  static const std::map<int, double> table = {
      {1, 6.634897}, {2, 9.210340}, {3, 11.344867}, {5, 15.086272},
      {7, 18.475307}, {15, 30.577914}, {23, 41.638398},
  };
  const auto it = table.find(df);
  if (it == table.end()) throw std::invalid_argument("no critical value for df");
  return it->second;
}

inline double chi2_stat(const std::vector<std::size_t>& counts, double expected) {
  double stat = 0.0;
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Two-sample Kolmogorov-Smirnov: true when the samples pass at the 1% level
// (statistic below the asymptotic critical value), i.e. no evidence the
// distributions differ.
inline bool ks_same_distribution_99(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double crit = 1.62762 * std::sqrt((n1 + n2) / (n1 * n2));  // c(0.01)
  return d < crit;
}

// All partitions of {1..m} into non-empty groups (Bell(m) of them).
inline std::vector<std::vector<std::vector<int>>> enumerate_partitions(int m) {
  std::vector<std::vector<std::vector<int>>> all;
  std::vector<std::vector<int>> current;
  auto place = [&](auto&& self, int a) -> void {
    if (a > m) {
      all.push_back(current);
      return;
    }
    for (std::size_t g = 0; g < current.size(); ++g) {
      current[g].push_back(a);
      self(self, a + 1);
      current[g].pop_back();
    }
    current.push_back({a});
    self(self, a + 1);
    current.pop_back();
  };
  place(place, 1);
  return all;
}

// --------------------------------------------------------------------------
// Data generators

// A dataset with numeric and categorical attributes and labels that depend
// weakly on the first column, so classifiers have something to fit but
// nothing is degenerate.
inline astrid::Dataset random_dataset(std::uint64_t seed, std::size_t n, int numeric_cols,
                                      int categorical_cols, int n_classes = 2) {
  astrid::Rng rng(seed);
  std::vector<astrid::Column> columns;
  for (int j = 0; j < numeric_cols; ++j) {
    astrid::Column col;
    col.name = "n" + std::to_string(j + 1);
    col.kind = astrid::ColumnKind::kNumeric;
    for (std::size_t i = 0; i < n; ++i) col.numeric.push_back(rng.normal());
    columns.push_back(std::move(col));
  }
  for (int j = 0; j < categorical_cols; ++j) {
    astrid::Column col;
    col.name = "c" + std::to_string(j + 1);
    col.kind = astrid::ColumnKind::kCategorical;
    const int vocab = 2 + static_cast<int>(rng.below(3));
    for (int v = 0; v < vocab; ++v) col.categories.push_back("v" + std::to_string(v));
    for (std::size_t i = 0; i < n; ++i)
      col.codes.push_back(static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(vocab))));
    columns.push_back(std::move(col));
  }
  std::vector<std::int32_t> labels;
  std::vector<std::string> class_names;
  for (int c = 0; c < n_classes; ++c) class_names.push_back("k" + std::to_string(c));
  for (std::size_t i = 0; i < n; ++i) {
    double bias = columns.front().kind == astrid::ColumnKind::kNumeric
                      ? columns.front().numeric[i]
                      : static_cast<double>(columns.front().codes[i]);
    const double u = rng.uniform01() + 0.3 * bias;
    std::int32_t y = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(n_classes)));
    if (u > 0.5 && n_classes == 2) y = 1;
    labels.push_back(y);
  }
  // Guarantee every class appears at least twice.
  for (std::int32_t c = 0; c < n_classes; ++c) {
    labels[static_cast<std::size_t>(2 * c)] = c;
    labels[static_cast<std::size_t>(2 * c + 1)] = c;
  }
  return astrid::Dataset(std::move(columns), std::move(labels), std::move(class_names));
}

// A uniformly random set partition of {1..m} (each grouping of each size can
// occur; not uniform over sizes, which the tests do not need).
inline astrid::Partition random_partition(astrid::Rng& rng, int m) {
  std::vector<std::vector<int>> groups;
  for (int a = 1; a <= m; ++a) {
    const std::uint64_t pick = rng.below(groups.size() + 1);
    if (pick == groups.size()) groups.push_back({a});
    else groups[pick].push_back(a);
  }
  return astrid::Partition::validate(std::move(groups), m);
}

// Random search instance with known structure for exactness checks: every
// breakable (size >= 2) ground-truth group has the same size, so cutting the
// sorted ordering greedily is optimal for every target size k.
struct MonotoneInstance {
  astrid::Partition truth;
  std::vector<double> weights;
};

inline MonotoneInstance random_monotone_instance(astrid::Rng& rng, int m) {
  const int max_size = std::min(m, 4);
  const int s = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size - 1)));
  const int max_groups = m / s;
  const int b = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_groups)));

  std::vector<int> attrs(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) attrs[static_cast<std::size_t>(a - 1)] = a;
  rng.shuffle(attrs);

  std::vector<std::vector<int>> groups;
  std::size_t at = 0;
  for (int g = 0; g < b; ++g) {
    groups.emplace_back(attrs.begin() + static_cast<std::ptrdiff_t>(at),
                        attrs.begin() + static_cast<std::ptrdiff_t>(at + s));
    at += static_cast<std::size_t>(s);
  }
  for (; at < attrs.size(); ++at) groups.push_back({attrs[at]});

  MonotoneInstance instance;
  instance.truth = astrid::Partition::validate(std::move(groups), m);
  for (int g = 0; g < instance.truth.size(); ++g)
    instance.weights.push_back(0.5 + rng.uniform01());
  return instance;
}

// Exhaustive optimum over all partitions with exactly k groups.
inline double best_reward_with_k_groups(const astrid::MonotonicOracle& oracle,
                                        const std::vector<std::vector<std::vector<int>>>& partitions,
                                        int m, int k) {
  double best = -1.0;
  for (const auto& groups : partitions) {
    if (static_cast<int>(groups.size()) != k) continue;
    const double r = oracle.reward_of(astrid::Partition::validate(groups, m));
    if (r > best) best = r;
  }
  return best;
}

// Per-(class, column) value multisets, sorted: the invariant of the
// within-class shuffle, computed without any library permutation machinery.
inline std::vector<std::vector<std::vector<double>>> class_column_multisets(
    const astrid::Dataset& d) {
  std::vector<std::vector<std::vector<double>>> cells(
      d.n_classes(), std::vector<std::vector<double>>(d.n_cols()));
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const auto c = static_cast<std::size_t>(d.label(i));
    for (std::size_t j = 0; j < d.n_cols(); ++j) {
      const astrid::Column& col = d.column(j);
      cells[c][j].push_back(col.kind == astrid::ColumnKind::kNumeric
                                ? col.numeric[i]
                                : static_cast<double>(col.codes[i]));
    }
  }
  for (auto& per_class : cells)
    for (auto& values : per_class) std::sort(values.begin(), values.end());
  return cells;
}

// --------------------------------------------------------------------------
// Rigged trainers for exercising the permutation test mechanics

// Predicts the same class for every row: accuracy is a constant, so every
// permutation replicate ties the baseline.
class ConstantTrainer : public astrid::Trainer {
 public:
  std::unique_ptr<astrid::Model> train(const astrid::Dataset&, std::uint64_t) const override {
    struct M : astrid::Model {
      std::int32_t predict(const astrid::Dataset&, std::size_t) const override { return 0; }
    };
    return std::make_unique<M>();
  }
};

// Remembers the dataset it was built around. Trained on exactly that data it
// predicts every test row correctly; trained on anything else it predicts
// every row wrong. Makes the permutation null maximally separated from the
// baseline.
class OriginalSpotterTrainer : public astrid::Trainer {
 public:
  explicit OriginalSpotterTrainer(astrid::Dataset original) : original_(std::move(original)) {}

  std::unique_ptr<astrid::Model> train(const astrid::Dataset& train,
                                       std::uint64_t) const override {
    struct M : astrid::Model {
      bool matched;
      explicit M(bool m) : matched(m) {}
      std::int32_t predict(const astrid::Dataset& data, std::size_t row) const override {
        const auto truth = data.label(row);
        if (matched) return truth;
        return truth == 0 ? 1 : 0;
      }
    };
    return std::make_unique<M>(train == original_);
  }

 private:
  astrid::Dataset original_;
};

}  // namespace testsupport
