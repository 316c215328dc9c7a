#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "astrid/dataset.hpp"
#include "astrid/rng.hpp"

namespace astrid {

// A sampled set of row permutations, one per group of a partition, that obey
// the two constraints of the within-class group-coupled shuffle:
//
//   1. every permutation maps each row to a row of the same class, and
//   2. attributes in the same group share one permutation, so the joint
//      values inside a group travel together.
//
// Columns in different groups get independent permutations, which destroys
// any dependence *between* groups (conditional on the class) while leaving
// the within-group, within-class joint distribution untouched.
class PermutationPlan {
 public:
  PermutationPlan(std::vector<std::vector<std::uint32_t>> perms,
                  std::vector<std::uint32_t> column_group)
      : perms_(std::move(perms)), column_group_(std::move(column_group)) {}

  std::size_t n_rows() const { return perms_.empty() ? 0 : perms_.front().size(); }
  std::size_t n_columns() const { return column_group_.size(); }
  std::size_t n_groups() const { return perms_.size(); }

  // Source row for (row, column): output(i, j) = input(map(j, i), j).
  std::uint32_t map(std::size_t column, std::size_t row) const {
    return perms_[column_group_[column]][row];
  }

  const std::vector<std::uint32_t>& group_permutation(std::size_t g) const { return perms_[g]; }

  bool respects_classes(const std::vector<std::int32_t>& labels) const {
    for (const auto& perm : perms_)
      for (std::size_t i = 0; i < perm.size(); ++i)
        if (labels[perm[i]] != labels[i]) return false;
    return true;
  }

  bool respects_grouping(const Partition& partition) const {
    if (static_cast<std::size_t>(partition.n_attributes()) != column_group_.size()) return false;
    for (const auto& group : partition.groups())
      for (int a : group)
        if (column_group_[static_cast<std::size_t>(a - 1)] !=
            column_group_[static_cast<std::size_t>(group.front() - 1)])
          return false;
    return true;
  }

 private:
  std::vector<std::vector<std::uint32_t>> perms_;
  std::vector<std::uint32_t> column_group_;
};

// Draws a plan uniformly from the set of all permutation tuples satisfying
// the two constraints: independently for every (group, class) cell, a uniform
// shuffle of that class's rows is spliced into the group's permutation. Each
// cell consumes its own derived substream, so the draw is reproducible no
// matter how the caller schedules or parallelises the surrounding loop.
inline PermutationPlan sample_plan(const std::vector<std::int32_t>& labels,
                                   const Partition& partition, std::uint64_t seed) {
  const std::size_t n = labels.size();
  const std::size_t m = static_cast<std::size_t>(partition.n_attributes());

  std::int32_t max_label = -1;
  for (std::int32_t y : labels)
    if (y > max_label) max_label = y;
  std::vector<std::vector<std::uint32_t>> class_rows(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < n; ++i)
    class_rows[static_cast<std::size_t>(labels[i])].push_back(static_cast<std::uint32_t>(i));

  std::vector<std::vector<std::uint32_t>> perms;
  perms.reserve(partition.groups().size());
  for (std::size_t g = 0; g < partition.groups().size(); ++g) {
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (std::size_t c = 0; c < class_rows.size(); ++c) {
      std::vector<std::uint32_t> targets = class_rows[c];
      Rng rng(derive_seed(seed, g, c));
      rng.shuffle(targets);
      for (std::size_t t = 0; t < targets.size(); ++t) perm[class_rows[c][t]] = targets[t];
    }
    perms.push_back(std::move(perm));
  }

  std::vector<std::uint32_t> column_group(m);
  for (std::size_t g = 0; g < partition.groups().size(); ++g)
    for (int a : partition.groups()[g])
      column_group[static_cast<std::size_t>(a - 1)] = static_cast<std::uint32_t>(g);

  return PermutationPlan(std::move(perms), std::move(column_group));
}

inline Dataset apply_plan(const Dataset& d, const PermutationPlan& plan) {
  if (plan.n_columns() != d.n_cols())
    throw std::invalid_argument("plan covers " + std::to_string(plan.n_columns()) +
                                " columns, dataset has " + std::to_string(d.n_cols()));
  if (plan.n_rows() != d.n_rows())
    throw std::invalid_argument("plan covers " + std::to_string(plan.n_rows()) +
                                " rows, dataset has " + std::to_string(d.n_rows()));

  std::vector<Column> columns;
  columns.reserve(d.n_cols());
  for (std::size_t j = 0; j < d.n_cols(); ++j) {
    const Column& in = d.column(j);
    Column out;
    out.name = in.name;
    out.kind = in.kind;
    out.categories = in.categories;
    if (in.kind == ColumnKind::kNumeric) {
      out.numeric.resize(d.n_rows());
      for (std::size_t i = 0; i < d.n_rows(); ++i) out.numeric[i] = in.numeric[plan.map(j, i)];
    } else {
      out.codes.resize(d.n_rows());
      for (std::size_t i = 0; i < d.n_rows(); ++i) out.codes[i] = in.codes[plan.map(j, i)];
    }
    columns.push_back(std::move(out));
  }
  // Within-class permutations fix the label column pointwise.
  return Dataset(std::move(columns), d.labels(), d.class_names(), d.class_column());
}

inline Dataset goldeneye_permute(const Dataset& d, const Partition& partition,
                                 std::uint64_t seed) {
  if (static_cast<std::size_t>(partition.n_attributes()) != d.n_cols())
    throw std::invalid_argument("partition is over " + std::to_string(partition.n_attributes()) +
                                " attributes, dataset has " + std::to_string(d.n_cols()) +
                                " columns");
  return apply_plan(d, sample_plan(d.labels(), partition, seed));
}

}  // namespace astrid
