#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "astrid/classifier.hpp"

namespace astrid {

// k-nearest-neighbours with squared Euclidean distance over numeric
// attributes scaled by the training standard deviation, plus Hamming
// distance (0/1 per attribute) over categorical ones. Neighbour ties at
// equal distance resolve to the smaller training row index, vote ties to
// the smaller label code.
class KnnModel : public Model {
 public:
  KnnModel(Dataset train, std::size_t k, std::vector<double> scale)
      : train_(std::move(train)), k_(k), scale_(std::move(scale)) {}

  std::int32_t predict(const Dataset& data, std::size_t row) const override {
    struct Entry {
      double distance;
      std::uint32_t row;
    };
    const std::size_t n = train_.n_rows();
    std::vector<Entry> entries;
    entries.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      double d = 0.0;
      for (std::size_t j = 0; j < train_.n_cols(); ++j) {
        const Column& col = train_.column(j);
        const Column& qcol = data.column(j);
        if (col.kind == ColumnKind::kNumeric) {
          const double diff = (qcol.numeric[row] - col.numeric[t]) / scale_[j];
          d += diff * diff;
        } else {
          d += qcol.codes[row] == col.codes[t] ? 0.0 : 1.0;
        }
      }
      entries.push_back({d, static_cast<std::uint32_t>(t)});
    }
    const std::size_t k = std::min(k_, n);
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(k),
                      entries.end(), [](const Entry& a, const Entry& b) {
                        if (a.distance != b.distance) return a.distance < b.distance;
                        return a.row < b.row;
                      });
    std::vector<std::size_t> votes(train_.n_classes(), 0);
    for (std::size_t i = 0; i < k; ++i)
      ++votes[static_cast<std::size_t>(train_.label(entries[i].row))];
    return detail::argmax_label(votes);
  }

 private:
  Dataset train_;
  std::size_t k_;
  std::vector<double> scale_;
};

class KnnTrainer : public Trainer {
 public:
  explicit KnnTrainer(int neighbours = 5) : neighbours_(neighbours) {}

  std::unique_ptr<Model> train(const Dataset& train, std::uint64_t) const override {
    require_trainable(train);
    const std::size_t n = train.n_rows();
    std::vector<double> scale(train.n_cols(), 1.0);
    for (std::size_t j = 0; j < train.n_cols(); ++j) {
      const Column& col = train.column(j);
      if (col.kind != ColumnKind::kNumeric) continue;
      double sum = 0.0;
      for (double v : col.numeric) sum += v;
      const double mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (double v : col.numeric) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(n));
      scale[j] = sd > 1e-12 ? sd : 1.0;
    }
    return std::make_unique<KnnModel>(train, static_cast<std::size_t>(neighbours_),
                                      std::move(scale));
  }

 private:
  int neighbours_;
};

}  // namespace astrid
