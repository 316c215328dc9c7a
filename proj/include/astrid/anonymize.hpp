#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "astrid/parallel.hpp"
#include "astrid/permutation.hpp"
#include "astrid/significance.hpp"

namespace astrid {

// A released, shuffled copy of the data: one draw from the grouping's
// permutation distribution. Group structure and class-conditional joint
// distributions within groups survive; links between groups, and thereby
// complete original records, generally do not.
inline Dataset anonymize(const Dataset& d, const Partition& partition, std::uint64_t seed) {
  return goldeneye_permute(d, partition, derive_seed(seed, stream::kRelease));
}

struct AnonymityReport {
  Partition partition;
  int replicates = 0;
  std::size_t unique_rows = 0;      // distinct (attributes, label) rows in the original
  double mean_intact = 0.0;         // of those, how many survive a shuffle on average
  double p_anon = 0.0;              // mean_intact / unique_rows

  bool operator==(const AnonymityReport&) const = default;
};

namespace detail {

// Byte signature of one row: attribute values (bit patterns) plus the label.
inline std::string row_signature(const Dataset& d, std::size_t i) {
  std::string sig;
  sig.reserve(8 * (d.n_cols() + 1));
  auto push = [&sig](std::uint64_t bits) {
    char buf[8];
    std::memcpy(buf, &bits, 8);
    sig.append(buf, 8);
  };
  for (std::size_t j = 0; j < d.n_cols(); ++j) {
    const Column& col = d.column(j);
    if (col.kind == ColumnKind::kNumeric) {
      std::uint64_t bits;
      std::memcpy(&bits, &col.numeric[i], 8);
      push(bits);
    } else {
      push(static_cast<std::uint64_t>(static_cast<std::uint32_t>(col.codes[i])));
    }
  }
  push(static_cast<std::uint64_t>(static_cast<std::uint32_t>(d.label(i))));
  return sig;
}

inline std::unordered_set<std::string> signature_set(const Dataset& d) {
  std::unordered_set<std::string> set;
  set.reserve(d.n_rows() * 2);
  for (std::size_t i = 0; i < d.n_rows(); ++i) set.insert(row_signature(d, i));
  return set;
}

}  // namespace detail

// How much of the original survives shuffling: the expected share of the
// original's distinct rows that still appear, as complete rows, in a shuffled
// release. Estimated over independent shuffles. 1.0 means every unique row
// can be found intact in the release; near 0 means almost none can.
inline AnonymityReport measure_p_anon(const Dataset& d, const Partition& partition,
                                      int replicates, std::uint64_t seed, unsigned jobs = 1) {
  if (replicates < 1) throw std::invalid_argument("p_anon needs at least 1 replicate");
  const std::unordered_set<std::string> originals = detail::signature_set(d);

  std::vector<double> intact(static_cast<std::size_t>(replicates));
  parallel_for(intact.size(), jobs, [&](std::size_t r) {
    const Dataset shuffled =
        goldeneye_permute(d, partition, derive_seed(seed, stream::kAnonymize, r));
    const std::unordered_set<std::string> released = detail::signature_set(shuffled);
    std::size_t hits = 0;
    for (const std::string& sig : originals)
      if (released.count(sig)) ++hits;
    intact[r] = static_cast<double>(hits);
  });

  AnonymityReport report;
  report.partition = partition;
  report.replicates = replicates;
  report.unique_rows = originals.size();
  double sum = 0.0;
  for (double v : intact) sum += v;
  report.mean_intact = sum / static_cast<double>(replicates);
  report.p_anon = report.mean_intact / static_cast<double>(originals.size());
  return report;
}

}  // namespace astrid
