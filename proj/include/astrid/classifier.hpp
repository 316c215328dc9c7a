#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "astrid/dataset.hpp"

namespace astrid {

enum class ClassifierKind { kNaiveBayes, kRandomForest, kKnn, kExternal };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kRandomForest;
  int trees = 100;           // random forest
  int features_per_node = 0; // random forest; 0 means ceil(sqrt(m))
  int neighbours = 5;        // k-nearest-neighbours
  std::string external_command;
  std::uint64_t train_seed = 0;

  // "nb", "rf", "knn", "external:<command>". Optional learner parameters ride
  // along as "rf:trees=50" / "knn:k=3".
  static ClassifierSpec parse(const std::string& text);
  void validate() const;
};

// A trained classifier. predict() must be deterministic; any randomness
// belongs in training.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::int32_t predict(const Dataset& data, std::size_t row) const = 0;
  virtual std::vector<std::int32_t> predict_all(const Dataset& test) const {
    std::vector<std::int32_t> out(test.n_rows());
    for (std::size_t i = 0; i < test.n_rows(); ++i) out[i] = predict(test, i);
    return out;
  }
};

// A training procedure. train() must be a pure function of (data, seed):
// the same inputs give a model with identical predictions.
class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual std::unique_ptr<Model> train(const Dataset& train, std::uint64_t seed) const = 0;

 protected:
  static void require_trainable(const Dataset& train) {
    if (train.n_rows() == 0) throw std::invalid_argument("training data is empty");
    const std::int32_t first = train.label(0);
    for (std::size_t i = 1; i < train.n_rows(); ++i)
      if (train.label(i) != first) return;
    throw std::invalid_argument("degenerate training data: all rows have the same class");
  }
};

// Share of test rows the model labels correctly.
inline double accuracy(const Model& model, const Dataset& test) {
  if (test.n_rows() == 0) throw std::invalid_argument("test data is empty");
  const std::vector<std::int32_t> predicted = model.predict_all(test);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.n_rows(); ++i)
    if (predicted[i] == test.label(i)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(test.n_rows());
}

namespace detail {

// Smallest label code with the maximum count.
inline std::int32_t argmax_label(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<std::int32_t>(best);
}

inline std::int32_t argmax_score(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return static_cast<std::int32_t>(best);
}

}  // namespace detail

}  // namespace astrid
