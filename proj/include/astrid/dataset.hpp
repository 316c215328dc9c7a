#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "astrid/rng.hpp"

namespace astrid {

enum class ColumnKind { kNumeric, kCategorical };

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double x) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

// One attribute column. Numeric columns hold doubles; categorical columns
// hold integer codes into a sorted list of category tokens.
struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<double> numeric;
  std::vector<std::int32_t> codes;
  std::vector<std::string> categories;

  std::size_t size() const {
    return kind == ColumnKind::kNumeric ? numeric.size() : codes.size();
  }

  std::string token(std::size_t row) const {
    if (kind == ColumnKind::kNumeric) return format_double(numeric[row]);
    return categories[static_cast<std::size_t>(codes[row])];
  }

  bool operator==(const Column&) const = default;
};

// A labelled dataset in column-major form. Labels are codes into the sorted
// list of class names; the label column's original name is kept so round
// trips through CSV preserve it.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::vector<Column> columns, std::vector<std::int32_t> labels,
          std::vector<std::string> class_names, std::string class_column = "class")
      : columns_(std::move(columns)),
        labels_(std::move(labels)),
        class_names_(std::move(class_names)),
        class_column_(std::move(class_column)) {
    for (const Column& c : columns_) {
      if (c.size() != labels_.size())
        throw std::invalid_argument("column \"" + c.name + "\" length does not match label count");
      if (c.kind == ColumnKind::kCategorical) {
        for (std::int32_t code : c.codes)
          if (code < 0 || static_cast<std::size_t>(code) >= c.categories.size())
            throw std::invalid_argument("column \"" + c.name + "\" has an out-of-range category code");
      }
    }
    for (std::int32_t y : labels_)
      if (y < 0 || static_cast<std::size_t>(y) >= class_names_.size())
        throw std::invalid_argument("label code out of range");
  }

  std::size_t n_rows() const { return labels_.size(); }
  std::size_t n_cols() const { return columns_.size(); }
  std::size_t n_classes() const { return class_names_.size(); }

  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t j) const { return columns_[j]; }
  const std::vector<std::int32_t>& labels() const { return labels_; }
  std::int32_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::string& class_column() const { return class_column_; }
  const std::string& label_token(std::size_t i) const {
    return class_names_[static_cast<std::size_t>(labels_[i])];
  }

  // Row indices of each class, ascending, indexed by label code.
  std::vector<std::vector<std::uint32_t>> rows_by_class() const {
    std::vector<std::vector<std::uint32_t>> rows(class_names_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i)
      rows[static_cast<std::size_t>(labels_[i])].push_back(static_cast<std::uint32_t>(i));
    return rows;
  }

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Column> columns_;
  std::vector<std::int32_t> labels_;
  std::vector<std::string> class_names_;
  std::string class_column_ = "class";
};

inline Dataset subset_rows(const Dataset& d, const std::vector<std::uint32_t>& rows) {
  std::vector<Column> columns;
  columns.reserve(d.n_cols());
  for (const Column& c : d.columns()) {
    Column out;
    out.name = c.name;
    out.kind = c.kind;
    out.categories = c.categories;
    if (c.kind == ColumnKind::kNumeric) {
      out.numeric.reserve(rows.size());
      for (std::uint32_t i : rows) out.numeric.push_back(c.numeric[i]);
    } else {
      out.codes.reserve(rows.size());
      for (std::uint32_t i : rows) out.codes.push_back(c.codes[i]);
    }
    columns.push_back(std::move(out));
  }
  std::vector<std::int32_t> labels;
  labels.reserve(rows.size());
  for (std::uint32_t i : rows) labels.push_back(d.label(i));
  return Dataset(std::move(columns), std::move(labels),
                 d.class_names(), d.class_column());
}

// A grouping of the attribute indices 1..m into disjoint, covering groups.
// Canonical form: indices sorted within each group, groups sorted by their
// first index. Construction goes through validate() so two partitions compare
// equal iff they group the attributes the same way.
class Partition {
 public:
  Partition() = default;

  static Partition validate(std::vector<std::vector<int>> groups, int m) {
    if (m < 1) throw std::invalid_argument("attribute count must be at least 1");
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty())
        throw std::invalid_argument("group " + std::to_string(g + 1) + " is empty");
      for (int a : groups[g]) {
        if (a < 1 || a > m)
          throw std::invalid_argument("attribute index " + std::to_string(a) +
                                      " out of range [1, " + std::to_string(m) + "]");
        if (seen[static_cast<std::size_t>(a - 1)])
          throw std::invalid_argument("attribute index " + std::to_string(a) +
                                      " appears in more than one group");
        seen[static_cast<std::size_t>(a - 1)] = 1;
      }
      std::sort(groups[g].begin(), groups[g].end());
    }
    for (int a = 1; a <= m; ++a)
      if (!seen[static_cast<std::size_t>(a - 1)])
        throw std::invalid_argument("attribute index " + std::to_string(a) +
                                    " is not covered by any group");
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    Partition p;
    p.groups_ = std::move(groups);
    p.m_ = m;
    return p;
  }

  // The trivial grouping {1..m}: every attribute coupled.
  static Partition whole(int m) {
    std::vector<int> all(static_cast<std::size_t>(m));
    for (int a = 1; a <= m; ++a) all[static_cast<std::size_t>(a - 1)] = a;
    return validate({std::move(all)}, m);
  }

  // The finest grouping: every attribute on its own.
  static Partition singletons(int m) {
    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(m));
    for (int a = 1; a <= m; ++a) groups.push_back({a});
    return validate(std::move(groups), m);
  }

  const std::vector<std::vector<int>>& groups() const { return groups_; }
  int n_attributes() const { return m_; }
  int size() const { return static_cast<int>(groups_.size()); }

  // Group slot of a 1-based attribute index.
  std::size_t group_of(int attribute) const {
    for (std::size_t g = 0; g < groups_.size(); ++g)
      for (int a : groups_[g])
        if (a == attribute) return g;
    throw std::invalid_argument("attribute index " + std::to_string(attribute) + " not in partition");
  }

  // "1,2|3|4" for {{1,2},{3},{4}}.
  std::string to_string() const {
    std::string s;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (g) s += '|';
      for (std::size_t i = 0; i < groups_[g].size(); ++i) {
        if (i) s += ',';
        s += std::to_string(groups_[g][i]);
      }
    }
    return s;
  }

  bool operator==(const Partition&) const = default;

 private:
  std::vector<std::vector<int>> groups_;
  int m_ = 0;
};

inline Partition validate_partition(std::vector<std::vector<int>> groups, int m) {
  return Partition::validate(std::move(groups), m);
}

struct SplitTriple {
  Dataset train;
  Dataset test_reward;  // held out for reward estimates during the search
  Dataset test_select;  // held out for the final significance tests
};

namespace detail {

constexpr std::uint64_t kSplitStream = 0x73706c69;

// Largest-remainder apportionment of n items over the given ratios.
inline std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const double ideal = ratios[p] * static_cast<double>(n);
    counts[p] = static_cast<std::size_t>(std::floor(ideal));
    remainder[p] = ideal - std::floor(ideal);
    assigned += counts[p];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return a < b;
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) counts[order[i % 3]] += 1;
  return counts;
}

}  // namespace detail

// Stratified three-way split. Every class contributes to every part in
// proportion to the ratios (largest-remainder rounding per class), rows are
// assigned by a per-class shuffle, and the result is deterministic in seed.
inline SplitTriple split_dataset(const Dataset& d, const std::array<double, 3>& ratios,
                                 std::uint64_t seed) {
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("split ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");

  std::array<std::vector<std::uint32_t>, 3> parts;
  const auto by_class = d.rows_by_class();
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    std::vector<std::uint32_t> rows = by_class[c];
    const auto counts = detail::apportion(rows.size(), ratios);
    for (std::size_t p = 0; p < 3; ++p) {
      if (counts[p] == 0)
        throw std::invalid_argument("class \"" + d.class_names()[c] +
                                    "\" has too few rows to appear in every split part");
    }
    Rng rng(derive_seed(seed, detail::kSplitStream, c));
    rng.shuffle(rows);
    std::size_t at = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), rows.begin() + static_cast<std::ptrdiff_t>(at),
                      rows.begin() + static_cast<std::ptrdiff_t>(at + counts[p]));
      at += counts[p];
    }
  }
  for (auto& part : parts) std::sort(part.begin(), part.end());
  return SplitTriple{subset_rows(d, parts[0]), subset_rows(d, parts[1]), subset_rows(d, parts[2])};
}

}  // namespace astrid
