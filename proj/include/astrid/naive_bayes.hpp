#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "astrid/classifier.hpp"

namespace astrid {

// Naive Bayes: Gaussian per numeric attribute, add-one-smoothed frequencies
// per categorical attribute, class priors from the training shares. No
// randomness. Sufficient statistics depend on each (class, column) value
// multiset only, and the per-cell values are sorted before accumulation, so
// two training sets whose cells hold the same multisets produce bit-for-bit
// identical models regardless of row order.
class NaiveBayesModel : public Model {
 public:
  struct Gaussian {
    double mean = 0.0;
    double inv_two_var = 0.0;
    double log_norm = 0.0;  // -0.5 * log(2 * pi * var)
  };

  std::int32_t predict(const Dataset& data, std::size_t row) const override {
    std::vector<double> scores = log_prior_;
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
      const Column& col = data.column(j);
      if (col.kind == ColumnKind::kNumeric) {
        const double x = col.numeric[row];
        for (std::size_t c = 0; c < scores.size(); ++c) {
          const Gaussian& g = gaussian_[c][j];
          const double d = x - g.mean;
          scores[c] += g.log_norm - d * d * g.inv_two_var;
        }
      } else {
        const std::int32_t code = col.codes[row];
        for (std::size_t c = 0; c < scores.size(); ++c) {
          const auto& table = categorical_[c][j];
          scores[c] += (code >= 0 && static_cast<std::size_t>(code) < table.size())
                           ? table[static_cast<std::size_t>(code)]
                           : unseen_[c][j];
        }
      }
    }
    return detail::argmax_score(scores);
  }

  std::vector<double> log_prior_;
  std::vector<std::vector<Gaussian>> gaussian_;              // [class][column]
  std::vector<std::vector<std::vector<double>>> categorical_; // [class][column][code]
  std::vector<std::vector<double>> unseen_;                   // [class][column]
};

class NaiveBayesTrainer : public Trainer {
 public:
  std::unique_ptr<Model> train(const Dataset& train, std::uint64_t) const override {
    require_trainable(train);
    constexpr double kVarianceFloor = 1e-9;
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

    const auto by_class = train.rows_by_class();
    const std::size_t n_classes = by_class.size();
    const std::size_t n_cols = train.n_cols();

    auto model = std::make_unique<NaiveBayesModel>();
    model->log_prior_.resize(n_classes);
    model->gaussian_.assign(n_classes, std::vector<NaiveBayesModel::Gaussian>(n_cols));
    model->categorical_.assign(n_classes, std::vector<std::vector<double>>(n_cols));
    model->unseen_.assign(n_classes, std::vector<double>(n_cols, 0.0));

    for (std::size_t c = 0; c < n_classes; ++c) {
      const auto& rows = by_class[c];
      const double n_c = static_cast<double>(rows.size());
      model->log_prior_[c] =
          std::log(n_c) - std::log(static_cast<double>(train.n_rows()));
      if (rows.empty()) continue;

      for (std::size_t j = 0; j < n_cols; ++j) {
        const Column& col = train.column(j);
        if (col.kind == ColumnKind::kNumeric) {
          std::vector<double> values;
          values.reserve(rows.size());
          for (std::uint32_t i : rows) values.push_back(col.numeric[i]);
          std::sort(values.begin(), values.end());
          double sum = 0.0;
          for (double v : values) sum += v;
          const double mean = sum / n_c;
          double ss = 0.0;
          for (double v : values) ss += (v - mean) * (v - mean);
          const double var = std::max(ss / n_c, kVarianceFloor);
          model->gaussian_[c][j] = {mean, 0.5 / var, -0.5 * std::log(kTwoPi * var)};
        } else {
          const std::size_t vocab = col.categories.size();
          std::vector<double> counts(vocab, 0.0);
          for (std::uint32_t i : rows) counts[static_cast<std::size_t>(col.codes[i])] += 1.0;
          const double denom = std::log(n_c + static_cast<double>(vocab));
          std::vector<double> table(vocab);
          for (std::size_t v = 0; v < vocab; ++v) table[v] = std::log(counts[v] + 1.0) - denom;
          model->categorical_[c][j] = std::move(table);
          model->unseen_[c][j] = -denom;  // log(0 + 1) - log(n_c + vocab)
        }
      }
    }
    return model;
  }
};

}  // namespace astrid
