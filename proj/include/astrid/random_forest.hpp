#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "astrid/classifier.hpp"
#include "astrid/rng.hpp"

namespace astrid {

// Random forest of CART-style trees: Gini impurity, bootstrap resampling,
// a fresh feature subsample at every node, grown to purity (no depth cap,
// leaves may hold a single row). Numeric splits send x <= threshold left,
// where the threshold is an observed value, so no derived midpoints enter
// the model. All tie-breaks are by index (feature, then threshold or
// category, then label code), which makes training a pure function of
// (data, seed).
class RandomForestModel : public Model {
 public:
  struct Node {
    bool leaf = true;
    bool categorical = false;
    std::int32_t label = 0;
    std::int32_t feature = 0;
    double threshold = 0.0;
    std::int32_t category = 0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
  };

  std::int32_t predict(const Dataset& data, std::size_t row) const override {
    std::vector<std::size_t> votes(n_classes_, 0);
    for (const auto& tree : trees_) {
      std::uint32_t at = 0;
      for (;;) {
        const Node& node = tree[at];
        if (node.leaf) {
          ++votes[static_cast<std::size_t>(node.label)];
          break;
        }
        const Column& col = data.column(static_cast<std::size_t>(node.feature));
        const bool go_left = node.categorical
                                 ? col.codes[row] == node.category
                                 : col.numeric[row] <= node.threshold;
        at = go_left ? node.left : node.right;
      }
    }
    return detail::argmax_label(votes);
  }

  std::vector<std::vector<Node>> trees_;
  std::size_t n_classes_ = 0;
};

class RandomForestTrainer : public Trainer {
 public:
  explicit RandomForestTrainer(int trees = 100, int features_per_node = 0)
      : trees_(trees), features_per_node_(features_per_node) {}

  std::unique_ptr<Model> train(const Dataset& train, std::uint64_t seed) const override {
    require_trainable(train);
    const std::size_t m = train.n_cols();
    const std::size_t mtry =
        features_per_node_ > 0
            ? std::min<std::size_t>(static_cast<std::size_t>(features_per_node_), m)
            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));

    auto model = std::make_unique<RandomForestModel>();
    model->n_classes_ = train.n_classes();
    model->trees_.resize(static_cast<std::size_t>(trees_));
    for (std::size_t t = 0; t < model->trees_.size(); ++t) {
      TreeBuilder builder(train, mtry, derive_seed(seed, kTreeStream, t));
      model->trees_[t] = builder.build();
    }
    return model;
  }

 private:
  static constexpr std::uint64_t kTreeStream = 0x74726565;

  class TreeBuilder {
   public:
    TreeBuilder(const Dataset& train, std::size_t mtry, std::uint64_t seed)
        : data_(train), mtry_(mtry), rng_(seed), features_(train.n_cols()) {
      for (std::size_t j = 0; j < features_.size(); ++j) features_[j] = j;
    }

    std::vector<RandomForestModel::Node> build() {
      const std::size_t n = data_.n_rows();
      std::vector<std::uint32_t> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        rows[i] = static_cast<std::uint32_t>(rng_.below(n));
      nodes_.clear();
      grow(std::move(rows));
      return std::move(nodes_);
    }

   private:
    struct Candidate {
      double impurity = 0.0;
      std::size_t feature = 0;
      bool categorical = false;
      double threshold = 0.0;
      std::int32_t category = 0;
      bool valid = false;

      bool better_than(const Candidate& other) const {
        if (!other.valid) return true;
        if (impurity != other.impurity) return impurity < other.impurity;
        if (feature != other.feature) return feature < other.feature;
        if (!categorical) return threshold < other.threshold;
        return category < other.category;
      }
    };

    std::uint32_t grow(std::vector<std::uint32_t> rows) {
      const std::size_t node_index = nodes_.size();
      nodes_.emplace_back();

      std::vector<std::size_t> counts(data_.n_classes(), 0);
      for (std::uint32_t i : rows) ++counts[static_cast<std::size_t>(data_.label(i))];
      const std::int32_t majority = detail::argmax_label(counts);
      const bool pure = counts[static_cast<std::size_t>(majority)] == rows.size();

      Candidate best;
      if (!pure && rows.size() >= 2) {
        for (std::size_t pick = 0; pick < mtry_; ++pick) {
          const std::size_t swap_with = pick + static_cast<std::size_t>(rng_.below(features_.size() - pick));
          std::swap(features_[pick], features_[swap_with]);
          const Candidate c = best_split(rows, features_[pick], counts);
          if (c.valid && c.better_than(best)) best = c;
        }
      }

      if (!best.valid) {
        nodes_[node_index].leaf = true;
        nodes_[node_index].label = majority;
        return static_cast<std::uint32_t>(node_index);
      }

      std::vector<std::uint32_t> left_rows, right_rows;
      left_rows.reserve(rows.size());
      right_rows.reserve(rows.size());
      const Column& col = data_.column(best.feature);
      for (std::uint32_t i : rows) {
        const bool go_left = best.categorical ? col.codes[i] == best.category
                                              : col.numeric[i] <= best.threshold;
        (go_left ? left_rows : right_rows).push_back(i);
      }
      rows.clear();
      rows.shrink_to_fit();

      const std::uint32_t left = grow(std::move(left_rows));
      const std::uint32_t right = grow(std::move(right_rows));
      nodes_[node_index].leaf = false;
      nodes_[node_index].categorical = best.categorical;
      nodes_[node_index].feature = static_cast<std::int32_t>(best.feature);
      nodes_[node_index].threshold = best.threshold;
      nodes_[node_index].category = best.category;
      nodes_[node_index].left = left;
      nodes_[node_index].right = right;
      return static_cast<std::uint32_t>(node_index);
    }

    // Weighted Gini impurity of a proposed (left, right) count split.
    static double weighted_gini(const std::vector<std::size_t>& left,
                                const std::vector<std::size_t>& right,
                                std::size_t n_left, std::size_t n_right) {
      double g_left = 1.0, g_right = 1.0;
      for (std::size_t c = 0; c < left.size(); ++c) {
        if (n_left) {
          const double p = static_cast<double>(left[c]) / static_cast<double>(n_left);
          g_left -= p * p;
        }
        if (n_right) {
          const double p = static_cast<double>(right[c]) / static_cast<double>(n_right);
          g_right -= p * p;
        }
      }
      const double n = static_cast<double>(n_left + n_right);
      return (static_cast<double>(n_left) * g_left + static_cast<double>(n_right) * g_right) / n;
    }

    Candidate best_split(const std::vector<std::uint32_t>& rows, std::size_t feature,
                         const std::vector<std::size_t>& total_counts) {
      const Column& col = data_.column(feature);
      Candidate best;
      best.feature = feature;
      const std::size_t n_classes = data_.n_classes();

      if (col.kind == ColumnKind::kNumeric) {
        scratch_.clear();
        scratch_.reserve(rows.size());
        for (std::uint32_t i : rows) scratch_.push_back(i);
        std::sort(scratch_.begin(), scratch_.end(), [&](std::uint32_t a, std::uint32_t b) {
          if (col.numeric[a] != col.numeric[b]) return col.numeric[a] < col.numeric[b];
          return a < b;
        });
        std::vector<std::size_t> left(n_classes, 0);
        std::vector<std::size_t> right = total_counts;
        for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
          const std::size_t c = static_cast<std::size_t>(data_.label(scratch_[i]));
          ++left[c];
          --right[c];
          if (col.numeric[scratch_[i]] == col.numeric[scratch_[i + 1]]) continue;
          const double imp = weighted_gini(left, right, i + 1, scratch_.size() - i - 1);
          Candidate cand;
          cand.impurity = imp;
          cand.feature = feature;
          cand.categorical = false;
          cand.threshold = col.numeric[scratch_[i]];
          cand.valid = true;
          if (cand.better_than(best)) best = cand;
        }
      } else {
        const std::size_t vocab = col.categories.size();
        std::vector<std::size_t> per_cat(vocab * n_classes, 0);
        std::vector<std::size_t> cat_total(vocab, 0);
        for (std::uint32_t i : rows) {
          const std::size_t v = static_cast<std::size_t>(col.codes[i]);
          ++per_cat[v * n_classes + static_cast<std::size_t>(data_.label(i))];
          ++cat_total[v];
        }
        std::vector<std::size_t> left(n_classes), right(n_classes);
        for (std::size_t v = 0; v < vocab; ++v) {
          if (cat_total[v] == 0 || cat_total[v] == rows.size()) continue;
          for (std::size_t c = 0; c < n_classes; ++c) {
            left[c] = per_cat[v * n_classes + c];
            right[c] = total_counts[c] - left[c];
          }
          const double imp = weighted_gini(left, right, cat_total[v], rows.size() - cat_total[v]);
          Candidate cand;
          cand.impurity = imp;
          cand.feature = feature;
          cand.categorical = true;
          cand.category = static_cast<std::int32_t>(v);
          cand.valid = true;
          if (cand.better_than(best)) best = cand;
        }
      }
      return best;
    }

    const Dataset& data_;
    std::size_t mtry_;
    Rng rng_;
    std::vector<std::size_t> features_;
    std::vector<std::uint32_t> scratch_;
    std::vector<RandomForestModel::Node> nodes_;
  };

  int trees_;
  int features_per_node_;
};

}  // namespace astrid
