#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "astrid/classifier.hpp"
#include "astrid/csv.hpp"

namespace astrid {

// Adapter for a classifier outside this process. The model invokes
//
//   <command> <train.csv> <test.csv>
//
// where train.csv carries the class column and test.csv only attributes, and
// expects one predicted label per test row on standard output. A nonzero
// exit status, a wrong number of output lines, or a label outside the
// training classes is an error.
class ExternalModel : public Model {
 public:
  ExternalModel(std::string command, Dataset train)
      : command_(std::move(command)), train_(std::move(train)) {}

  std::int32_t predict(const Dataset& data, std::size_t row) const override {
    const Dataset single = subset_rows(data, {static_cast<std::uint32_t>(row)});
    return predict_all(single).front();
  }

  std::vector<std::int32_t> predict_all(const Dataset& test) const override {
    namespace fs = std::filesystem;
    static std::atomic<std::uint64_t> counter{0};
    const std::string stem = "astrid-xc-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter.fetch_add(1));
    const fs::path dir = fs::temp_directory_path();
    const fs::path train_path = dir / (stem + "-train.csv");
    const fs::path test_path = dir / (stem + "-test.csv");
    struct Cleanup {
      fs::path a, b;
      ~Cleanup() {
        std::error_code ec;
        fs::remove(a, ec);
        fs::remove(b, ec);
      }
    } cleanup{train_path, test_path};

    write_csv(train_, train_path.string(), true);
    write_csv(test, test_path.string(), false);

    const std::string cmdline =
        command_ + " '" + train_path.string() + "' '" + test_path.string() + "'";
    FILE* pipe = ::popen(cmdline.c_str(), "r");
    if (!pipe) throw std::runtime_error("external classifier: cannot run \"" + command_ + "\"");
    std::string output;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    const int status = ::pclose(pipe);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw std::runtime_error("external classifier \"" + command_ + "\" exited with status " +
                               std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));

    std::vector<std::string> lines;
    std::string line;
    for (char ch : output) {
      if (ch == '\n') {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
        line.clear();
      } else {
        line += ch;
      }
    }
    if (!line.empty()) {
      if (line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
    if (lines.size() != test.n_rows())
      throw std::runtime_error("external classifier returned " + std::to_string(lines.size()) +
                               " predictions for " + std::to_string(test.n_rows()) + " test rows");

    const auto& names = train_.class_names();
    std::vector<std::int32_t> out;
    out.reserve(lines.size());
    for (const std::string& token : lines) {
      const auto it = std::lower_bound(names.begin(), names.end(), token);
      if (it == names.end() || *it != token)
        throw std::runtime_error("external classifier predicted unknown label \"" + token + "\"");
      out.push_back(static_cast<std::int32_t>(it - names.begin()));
    }
    return out;
  }

 private:
  std::string command_;
  Dataset train_;
};

class ExternalTrainer : public Trainer {
 public:
  explicit ExternalTrainer(std::string command) : command_(std::move(command)) {
    if (command_.empty()) throw std::invalid_argument("external classifier command is empty");
  }

  std::unique_ptr<Model> train(const Dataset& train, std::uint64_t) const override {
    require_trainable(train);
    return std::make_unique<ExternalModel>(command_, train);
  }

 private:
  std::string command_;
};

}  // namespace astrid
