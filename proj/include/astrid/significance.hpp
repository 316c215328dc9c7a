#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "astrid/classifier.hpp"
#include "astrid/parallel.hpp"
#include "astrid/permutation.hpp"

namespace astrid {

namespace stream {
// Substream tags. Every randomised stage derives its seeds through a
// distinct tag so no two stages ever share a generator state.
constexpr std::uint64_t kPermute = 0x01;
constexpr std::uint64_t kTrain = 0x02;
constexpr std::uint64_t kBaseline = 0x03;
constexpr std::uint64_t kSearch = 0x04;
constexpr std::uint64_t kPValue = 0x05;
constexpr std::uint64_t kAnonymize = 0x06;
constexpr std::uint64_t kSplit = 0x07;
constexpr std::uint64_t kRelease = 0x08;
}  // namespace stream

struct SummaryStats {
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Mean, population standard deviation, range. When every value is identical
// the summary is written directly from that value, so a degenerate sample
// reports exactly sd = 0 with no rounding residue.
inline SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) return SummaryStats{*lo, 0.0, *lo, *hi};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return SummaryStats{mean, std::sqrt(ss / static_cast<double>(values.size())), *lo, *hi};
}

// Add-one empirical p-value: with `exceedances` of the `replicates` null
// statistics at or above the observed one, p = (1 + exceedances) /
// (1 + replicates). Never zero; the floor is 1 / (1 + replicates).
inline double empirical_p(std::size_t exceedances, std::size_t replicates) {
  if (replicates == 0) throw std::invalid_argument("empirical p-value needs at least 1 replicate");
  if (exceedances > replicates)
    throw std::invalid_argument("more exceedances than replicates");
  return (1.0 + static_cast<double>(exceedances)) / (1.0 + static_cast<double>(replicates));
}

// Average accuracy under data permuted consistently with a grouping: the
// quantity the grouping search maximises.
struct RewardEstimate {
  Partition partition;
  int replicates = 0;
  SummaryStats accuracy;
};

// Outcome of one permutation test of a grouping.
struct TestReport {
  Partition partition;
  double baseline_accuracy = 0.0;
  std::vector<double> permuted_accuracies;
  double alpha = 0.0;
  double p_value = 1.0;
  bool rejected = false;

  int replicates() const { return static_cast<int>(permuted_accuracies.size()); }
  SummaryStats permuted_summary() const { return summarize(permuted_accuracies); }

  bool operator==(const TestReport&) const = default;
};

namespace detail {

// One permutation replicate: permute the training data under the grouping,
// retrain, measure accuracy on the fixed test set. The test set is never
// permuted; only the training view moves.
inline double permuted_accuracy(const Dataset& train, const Dataset& test,
                                const Partition& partition, const Trainer& trainer,
                                std::uint64_t seed, std::size_t replicate) {
  const Dataset permuted =
      goldeneye_permute(train, partition, derive_seed(seed, stream::kPermute, replicate));
  const auto model = trainer.train(permuted, derive_seed(seed, stream::kTrain, replicate));
  return accuracy(*model, test);
}

}  // namespace detail

// Monte Carlo estimate of the expected accuracy under the grouping's
// permutation distribution.
inline RewardEstimate reward(const Dataset& train, const Dataset& test,
                             const Partition& partition, const Trainer& trainer,
                             int replicates, std::uint64_t seed, unsigned jobs = 1) {
  if (replicates < 1) throw std::invalid_argument("reward needs at least 1 replicate");
  std::vector<double> accs(static_cast<std::size_t>(replicates));
  parallel_for(accs.size(), jobs, [&](std::size_t i) {
    accs[i] = detail::permuted_accuracy(train, test, partition, trainer, seed, i);
  });
  return RewardEstimate{partition, replicates, summarize(accs)};
}

// Permutation test. The baseline statistic is the accuracy of a model
// trained on the data as given; each replicate retrains on a permuted view.
// Replicates at or above the baseline count as exceedances, so ties push the
// p-value up, never down.
inline TestReport empirical_p_value(const Dataset& train, const Dataset& test,
                                    const Partition& partition, const Trainer& trainer,
                                    int replicates, double alpha, std::uint64_t seed,
                                    unsigned jobs = 1) {
  if (replicates < 1) throw std::invalid_argument("permutation test needs at least 1 replicate");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");

  TestReport report;
  report.partition = partition;
  report.alpha = alpha;
  const auto baseline_model = trainer.train(train, derive_seed(seed, stream::kBaseline));
  report.baseline_accuracy = accuracy(*baseline_model, test);

  report.permuted_accuracies.resize(static_cast<std::size_t>(replicates));
  parallel_for(report.permuted_accuracies.size(), jobs, [&](std::size_t i) {
    report.permuted_accuracies[i] =
        detail::permuted_accuracy(train, test, partition, trainer, seed, i);
  });

  std::size_t exceedances = 0;
  for (double a : report.permuted_accuracies)
    if (a >= report.baseline_accuracy) ++exceedances;
  report.p_value = empirical_p(exceedances, static_cast<std::size_t>(replicates));
  report.rejected = report.p_value < alpha;
  return report;
}

}  // namespace astrid
