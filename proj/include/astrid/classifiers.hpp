#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "astrid/classifier.hpp"
#include "astrid/external_classifier.hpp"
#include "astrid/knn.hpp"
#include "astrid/naive_bayes.hpp"
#include "astrid/random_forest.hpp"

namespace astrid {

inline ClassifierSpec ClassifierSpec::parse(const std::string& text) {
  ClassifierSpec spec;
  std::string head = text;
  std::string rest;
  const std::size_t colon = text.find(':');
  if (colon != std::string::npos) {
    head = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }

  if (head == "nb") {
    spec.kind = ClassifierKind::kNaiveBayes;
  } else if (head == "rf") {
    spec.kind = ClassifierKind::kRandomForest;
  } else if (head == "knn") {
    spec.kind = ClassifierKind::kKnn;
  } else if (head == "external") {
    spec.kind = ClassifierKind::kExternal;
    spec.external_command = rest;
    spec.validate();
    return spec;
  } else {
    throw std::invalid_argument("unknown classifier \"" + head +
                                "\" (expected nb, rf, knn or external:<command>)");
  }

  // Parameter list: "key=value" pairs separated by commas.
  std::size_t at = 0;
  while (at < rest.size()) {
    std::size_t end = rest.find(',', at);
    if (end == std::string::npos) end = rest.size();
    const std::string item = rest.substr(at, end - at);
    at = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed classifier parameter \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("classifier parameter \"" + item + "\" is not an integer");
    }
    if (key == "trees" && spec.kind == ClassifierKind::kRandomForest) {
      spec.trees = value;
    } else if (key == "features" && spec.kind == ClassifierKind::kRandomForest) {
      spec.features_per_node = value;
    } else if (key == "k" && spec.kind == ClassifierKind::kKnn) {
      spec.neighbours = value;
    } else {
      throw std::invalid_argument("classifier parameter \"" + key + "\" does not apply to \"" +
                                  head + "\"");
    }
  }
  spec.validate();
  return spec;
}

inline void ClassifierSpec::validate() const {
  switch (kind) {
    case ClassifierKind::kRandomForest:
      if (trees < 1) throw std::invalid_argument("random forest needs at least 1 tree");
      if (features_per_node < 0)
        throw std::invalid_argument("features per node must not be negative");
      break;
    case ClassifierKind::kKnn:
      if (neighbours < 1) throw std::invalid_argument("k-nearest-neighbours needs k >= 1");
      break;
    case ClassifierKind::kExternal:
      if (external_command.empty())
        throw std::invalid_argument("external classifier command is empty");
      break;
    case ClassifierKind::kNaiveBayes:
      break;
  }
}

inline std::unique_ptr<Trainer> make_trainer(const ClassifierSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ClassifierKind::kNaiveBayes:
      return std::make_unique<NaiveBayesTrainer>();
    case ClassifierKind::kRandomForest:
      return std::make_unique<RandomForestTrainer>(spec.trees, spec.features_per_node);
    case ClassifierKind::kKnn:
      return std::make_unique<KnnTrainer>(spec.neighbours);
    case ClassifierKind::kExternal:
      return std::make_unique<ExternalTrainer>(spec.external_command);
  }
  throw std::logic_error("unreachable classifier kind");
}

inline std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kNaiveBayes: return "nb";
    case ClassifierKind::kRandomForest: return "rf";
    case ClassifierKind::kKnn: return "knn";
    case ClassifierKind::kExternal: return "external";
  }
  return "?";
}

inline std::string to_string(const ClassifierSpec& spec) {
  switch (spec.kind) {
    case ClassifierKind::kNaiveBayes: return "nb";
    case ClassifierKind::kRandomForest:
      return "rf:trees=" + std::to_string(spec.trees) +
             (spec.features_per_node > 0 ? ",features=" + std::to_string(spec.features_per_node)
                                         : std::string());
    case ClassifierKind::kKnn: return "knn:k=" + std::to_string(spec.neighbours);
    case ClassifierKind::kExternal: return "external:" + spec.external_command;
  }
  return "?";
}

// Trains according to a spec, folding the spec's own seed into the stream.
inline std::unique_ptr<Model> train(const ClassifierSpec& spec, const Dataset& data) {
  return make_trainer(spec)->train(data, spec.train_seed);
}

}  // namespace astrid
