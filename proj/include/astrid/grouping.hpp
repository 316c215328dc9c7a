#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "astrid/significance.hpp"

namespace astrid {

// Reward function over groupings, with a call counter so the search's query
// complexity is observable. The crn_key lets the search evaluate all
// candidates of one comparison round under common random numbers: candidates
// sharing a key reuse the same permutation substreams, so their rewards
// differ by the grouping, not by the luck of the draw.
class RewardOracle {
 public:
  virtual ~RewardOracle() = default;

  double evaluate(const Partition& partition, std::uint64_t crn_key = 0) {
    ++calls_;
    return do_evaluate(partition, crn_key);
  }

  std::size_t calls() const { return calls_; }

 protected:
  virtual double do_evaluate(const Partition& partition, std::uint64_t crn_key) = 0;

 private:
  std::size_t calls_ = 0;
};

// The production oracle: mean accuracy over permutation replicates, trained
// on the training part, measured on the reward part of the split.
class EmpiricalRewardOracle : public RewardOracle {
 public:
  EmpiricalRewardOracle(const Dataset& train, const Dataset& test, const Trainer& trainer,
                        int replicates, std::uint64_t seed, unsigned jobs = 1)
      : train_(train), test_(test), trainer_(trainer), replicates_(replicates), seed_(seed),
        jobs_(jobs) {}

 protected:
  double do_evaluate(const Partition& partition, std::uint64_t crn_key) override {
    return reward(train_, test_, partition, trainer_, replicates_,
                  derive_seed(seed_, crn_key), jobs_)
        .accuracy.mean;
  }

 private:
  const Dataset& train_;
  const Dataset& test_;
  const Trainer& trainer_;
  int replicates_;
  std::uint64_t seed_;
  unsigned jobs_;
};

// Deterministic oracle for exercising the search: the reward of a grouping is
// the total weight of ground-truth groups it keeps intact (every member in
// one block). Singleton ground-truth groups are intact in any grouping, so
// only groups of two or more attributes can lose their weight.
class MonotonicOracle : public RewardOracle {
 public:
  MonotonicOracle(Partition ground_truth, std::vector<double> weights)
      : ground_truth_(std::move(ground_truth)), weights_(std::move(weights)) {
    if (weights_.size() != static_cast<std::size_t>(ground_truth_.size()))
      throw std::invalid_argument("need one weight per ground-truth group");
    for (double w : weights_)
      if (!(w > 0.0)) throw std::invalid_argument("group weights must be positive");
  }

  const Partition& ground_truth() const { return ground_truth_; }

  double reward_of(const Partition& partition) const {
    std::vector<std::size_t> block_of(
        static_cast<std::size_t>(partition.n_attributes()) + 1, 0);
    const auto& blocks = partition.groups();
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int a : blocks[b]) block_of[static_cast<std::size_t>(a)] = b;

    double total = 0.0;
    const auto& truth = ground_truth_.groups();
    for (std::size_t g = 0; g < truth.size(); ++g) {
      const std::size_t home = block_of[static_cast<std::size_t>(truth[g].front())];
      bool intact = true;
      for (int a : truth[g])
        if (block_of[static_cast<std::size_t>(a)] != home) { intact = false; break; }
      if (intact) total += weights_[g];
    }
    return total;
  }

 protected:
  double do_evaluate(const Partition& partition, std::uint64_t) override {
    if (partition.n_attributes() != ground_truth_.n_attributes())
      throw std::invalid_argument("partition and ground truth cover different attribute counts");
    return reward_of(partition);
  }

 private:
  Partition ground_truth_;
  std::vector<double> weights_;
};

// Result of the greedy grouping search: an attribute ordering in which
// related attributes sit next to each other, the reward of cutting the
// ordering at each boundary, and the best found grouping for every size k.
struct SearchResult {
  std::vector<int> ordering;           // 1-based attribute indices
  std::vector<double> boundary_values; // boundary i separates positions i-1 and i
  std::vector<Partition> by_size;      // by_size[k-1] has k groups
};

// Sorting phase. Starts from one block holding everything and peels off, m
// times, the attribute whose detachment costs the least reward (ties to the
// smallest index). Attributes peeled earlier depend less on the rest, so the
// tail of the returned ordering holds the strongly coupled attributes and
// members of one true group leave consecutively: the ordering keeps them
// adjacent. Costs exactly m(m+1)/2 oracle calls.
inline std::vector<int> sort_attributes(RewardOracle& oracle, int m) {
  if (m < 1) throw std::invalid_argument("attribute count must be at least 1");
  std::vector<int> core(static_cast<std::size_t>(m));
  for (int a = 1; a <= m; ++a) core[static_cast<std::size_t>(a - 1)] = a;
  std::vector<int> ordering;
  ordering.reserve(core.size());

  for (int round = 1; round <= m; ++round) {
    int best = 0;
    double best_reward = 0.0;
    for (int j : core) {
      std::vector<std::vector<int>> groups;
      groups.reserve(ordering.size() + 2);
      std::vector<int> rest;
      for (int a : core)
        if (a != j) rest.push_back(a);
      if (!rest.empty()) groups.push_back(std::move(rest));
      for (int a : ordering) groups.push_back({a});
      groups.push_back({j});
      const double r = oracle.evaluate(Partition::validate(std::move(groups), m),
                                       static_cast<std::uint64_t>(round));
      if (best == 0 || r > best_reward) {
        best = j;
        best_reward = r;
      }
    }
    ordering.push_back(best);
    core.erase(std::find(core.begin(), core.end(), best));
  }
  return ordering;
}

// Segmentation phase, first half: the reward of each two-block grouping
// {first i attributes} | {rest}, for i = 1..m-1. Costs m-1 oracle calls.
inline std::vector<double> boundary_rewards(RewardOracle& oracle, const std::vector<int>& ordering) {
  const int m = static_cast<int>(ordering.size());
  std::vector<double> values;
  values.reserve(ordering.size() - 1);
  for (int i = 1; i < m; ++i) {
    std::vector<int> prefix(ordering.begin(), ordering.begin() + i);
    std::vector<int> suffix(ordering.begin() + i, ordering.end());
    values.push_back(
        oracle.evaluate(Partition::validate({std::move(prefix), std::move(suffix)}, m), 0));
  }
  return values;
}

// Segmentation phase, second half: cut the ordering at the k-1 boundaries
// with the highest two-block rewards (ties to the earlier boundary) and read
// the contiguous segments as groups. Costs no oracle calls.
inline Partition segment(const std::vector<int>& ordering,
                         const std::vector<double>& boundary_values, int k) {
  const int m = static_cast<int>(ordering.size());
  if (boundary_values.size() + 1 != ordering.size())
    throw std::invalid_argument("need one boundary value between each adjacent pair");
  if (k < 1 || k > m)
    throw std::invalid_argument("group count " + std::to_string(k) + " out of range [1, " +
                                std::to_string(m) + "]");

  std::vector<int> boundaries(static_cast<std::size_t>(m - 1));
  for (int i = 0; i < m - 1; ++i) boundaries[static_cast<std::size_t>(i)] = i + 1;
  std::sort(boundaries.begin(), boundaries.end(), [&](int a, int b) {
    const double va = boundary_values[static_cast<std::size_t>(a - 1)];
    const double vb = boundary_values[static_cast<std::size_t>(b - 1)];
    if (va != vb) return va > vb;
    return a < b;
  });
  boundaries.resize(static_cast<std::size_t>(k - 1));
  std::sort(boundaries.begin(), boundaries.end());

  std::vector<std::vector<int>> groups;
  groups.reserve(static_cast<std::size_t>(k));
  std::size_t start = 0;
  for (int b : boundaries) {
    groups.emplace_back(ordering.begin() + static_cast<std::ptrdiff_t>(start),
                        ordering.begin() + b);
    start = static_cast<std::size_t>(b);
  }
  groups.emplace_back(ordering.begin() + static_cast<std::ptrdiff_t>(start), ordering.end());
  return Partition::validate(std::move(groups), m);
}

// Full greedy search: ordering, boundary rewards, and the grouping for every
// size k in m(m+1)/2 + (m-1) oracle calls.
inline SearchResult search_groupings(RewardOracle& oracle, int m) {
  SearchResult result;
  result.ordering = sort_attributes(oracle, m);
  result.boundary_values = boundary_rewards(oracle, result.ordering);
  result.by_size.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k)
    result.by_size.push_back(segment(result.ordering, result.boundary_values, k));
  return result;
}

struct AstridParams {
  int reward_replicates = 100; // permutations behind each oracle call
  int test_replicates = 250;   // permutations behind each final p-value
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct LadderEntry {
  int k = 0;
  Partition partition;
  // Permutation test of this grouping on the selection part of the split.
  // Absent for k = 1: the one-block grouping permutes nothing that the
  // hypothesis constrains, so it is consistent with any data.
  std::optional<TestReport> report;

  bool operator==(const LadderEntry&) const = default;
};

struct GroupingLadder {
  std::vector<int> ordering;
  std::vector<double> boundary_values;
  double baseline_accuracy = 0.0; // unpermuted model on the selection part
  double alpha = 0.0;
  std::vector<LadderEntry> entries; // entries[k-1] is the size-k grouping
  std::size_t oracle_calls = 0;

  bool operator==(const GroupingLadder&) const = default;
};

// The full pipeline: search groupings of every size on (train, test_reward),
// then put each size k >= 2 to a permutation test on (train, test_select).
inline GroupingLadder analyze(const SplitTriple& split, const Trainer& trainer,
                              const AstridParams& params) {
  const int m = static_cast<int>(split.train.n_cols());
  EmpiricalRewardOracle oracle(split.train, split.test_reward, trainer,
                               params.reward_replicates,
                               derive_seed(params.seed, stream::kSearch), params.jobs);
  const SearchResult search = search_groupings(oracle, m);

  GroupingLadder ladder;
  ladder.ordering = search.ordering;
  ladder.boundary_values = search.boundary_values;
  ladder.alpha = params.alpha;
  const auto baseline_model =
      trainer.train(split.train, derive_seed(params.seed, stream::kBaseline));
  ladder.baseline_accuracy = accuracy(*baseline_model, split.test_select);

  ladder.entries.reserve(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    LadderEntry entry;
    entry.k = k;
    entry.partition = search.by_size[static_cast<std::size_t>(k - 1)];
    if (k >= 2)
      entry.report = empirical_p_value(
          split.train, split.test_select, entry.partition, trainer, params.test_replicates,
          params.alpha, derive_seed(params.seed, stream::kPValue, static_cast<std::uint64_t>(k)),
          params.jobs);
    ladder.entries.push_back(std::move(entry));
  }
  ladder.oracle_calls = oracle.calls();
  return ladder;
}

// The finest grouping whose permutation test does not reject: the data are
// consistent with independence between its groups, and with as many groups
// as the evidence allows. k = 1 never rejects.
inline const LadderEntry& select_grouping(const GroupingLadder& ladder) {
  for (std::size_t i = ladder.entries.size(); i-- > 1;) {
    const LadderEntry& entry = ladder.entries[i];
    if (entry.report && entry.report->p_value >= ladder.alpha) return entry;
  }
  return ladder.entries.front();
}

// Tests the fully factorised hypothesis: no interactions between any
// attributes. Rejection means at least two attributes interact.
inline TestReport og_test2(const SplitTriple& split, const Trainer& trainer, int replicates,
                           double alpha, std::uint64_t seed, unsigned jobs = 1) {
  const int m = static_cast<int>(split.train.n_cols());
  return empirical_p_value(split.train, split.test_select, Partition::singletons(m), trainer,
                           replicates, alpha, derive_seed(seed, stream::kPValue, 0ull), jobs);
}

}  // namespace astrid
