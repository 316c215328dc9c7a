#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "astrid/anonymize.hpp"
#include "astrid/grouping.hpp"

namespace astrid {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string fixed3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Group letters over the ordering, one cell per attribute, with parentheses
// marking where groups of the ladder row begin and end: "(A", "A)", "(B)".
inline std::vector<std::string> group_letter_cells(const std::vector<int>& ordering,
                                                   const Partition& partition) {
  std::vector<std::string> cells;
  cells.reserve(ordering.size());
  std::size_t position = 0;
  char letter = 'A';
  while (position < ordering.size()) {
    const std::size_t block = partition.group_of(ordering[position]);
    std::size_t length = 0;
    while (position + length < ordering.size() &&
           partition.group_of(ordering[position + length]) == block)
      ++length;
    for (std::size_t i = 0; i < length; ++i) {
      std::string cell(1, letter);
      if (i == 0) cell = "(" + cell;
      if (i + 1 == length) cell += ")";
      cells.push_back(cell);
    }
    position += length;
    ++letter;
  }
  return cells;
}

inline ordered_json groups_to_json(const Partition& partition) {
  ordered_json groups = ordered_json::array();
  for (const auto& g : partition.groups()) groups.push_back(g);
  return groups;
}

inline Partition groups_from_json(const ordered_json& j, int m) {
  std::vector<std::vector<int>> groups;
  for (const auto& g : j) groups.push_back(g.get<std::vector<int>>());
  return Partition::validate(std::move(groups), m);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Grouping ladder

inline std::string render_ladder_table(const GroupingLadder& ladder,
                                       const std::vector<std::string>& attribute_names,
                                       int selected_k) {
  const std::size_t m = ladder.ordering.size();

  std::vector<std::vector<std::string>> rows;
  for (const LadderEntry& entry : ladder.entries) {
    std::vector<std::string> row;
    row.push_back(entry.k == selected_k ? "*" : " ");
    row.push_back(std::to_string(entry.k));
    if (entry.report) {
      const SummaryStats stats = entry.report->permuted_summary();
      row.push_back(detail::fixed3(stats.mean));
      row.push_back(detail::fixed3(stats.min));
      row.push_back(detail::fixed3(stats.max));
      row.push_back(detail::fixed3(stats.sd));
      row.push_back(detail::fixed3(entry.report->p_value));
    } else {
      row.push_back(detail::fixed3(ladder.baseline_accuracy));
      for (int i = 0; i < 4; ++i) row.push_back("-");
    }
    for (const std::string& cell : detail::group_letter_cells(ladder.ordering, entry.partition))
      row.push_back(cell);
    rows.push_back(std::move(row));
  }

  std::vector<std::string> header{" ", "k", "acc", "min", "max", "sd", "p"};
  for (int a : ladder.ordering)
    header.push_back(attribute_names[static_cast<std::size_t>(a - 1)]);

  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    widths[c] = header[c].size();
    for (const auto& row : rows) widths[c] = std::max(widths[c], row[c].size());
  }

  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += detail::pad_left(row[c], widths[c]);
    }
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);

  out += '\n';
  out += "baseline accuracy " + detail::fixed3(ladder.baseline_accuracy) + ", alpha " +
         detail::fixed3(ladder.alpha) + ", " + std::to_string(ladder.oracle_calls) +
         " reward evaluations\n";
  const LadderEntry& selected = ladder.entries[static_cast<std::size_t>(selected_k - 1)];
  out += "selected grouping (k = " + std::to_string(selected_k) + " of " + std::to_string(m) +
         "): " + selected.partition.to_string() + "\n";
  return out;
}

inline ordered_json ladder_to_json(const GroupingLadder& ladder,
                                   const std::vector<std::string>& attribute_names,
                                   int selected_k) {
  ordered_json j;
  j["schema"] = "astrid-ladder/1";
  j["attributes"] = attribute_names;
  j["ordering"] = ladder.ordering;
  j["boundary_rewards"] = ladder.boundary_values;
  j["baseline_accuracy"] = ladder.baseline_accuracy;
  j["alpha"] = ladder.alpha;
  j["oracle_calls"] = ladder.oracle_calls;
  ordered_json rows = ordered_json::array();
  for (const LadderEntry& entry : ladder.entries) {
    ordered_json row;
    row["k"] = entry.k;
    row["groups"] = detail::groups_to_json(entry.partition);
    if (entry.report) {
      row["baseline_accuracy"] = entry.report->baseline_accuracy;
      row["permuted_accuracies"] = entry.report->permuted_accuracies;
      row["p_value"] = entry.report->p_value;
      row["rejected"] = entry.report->rejected;
    }
    rows.push_back(std::move(row));
  }
  j["ladder"] = std::move(rows);
  ordered_json selected;
  selected["k"] = selected_k;
  selected["groups"] = detail::groups_to_json(
      ladder.entries[static_cast<std::size_t>(selected_k - 1)].partition);
  j["selected"] = std::move(selected);
  return j;
}

struct ParsedLadder {
  GroupingLadder ladder;
  int selected_k = 0;
  std::vector<std::string> attribute_names;
};

inline ParsedLadder ladder_from_json(const ordered_json& j) {
  ParsedLadder parsed;
  parsed.attribute_names = j.at("attributes").get<std::vector<std::string>>();
  const int m = static_cast<int>(parsed.attribute_names.size());
  GroupingLadder& ladder = parsed.ladder;
  ladder.ordering = j.at("ordering").get<std::vector<int>>();
  ladder.boundary_values = j.at("boundary_rewards").get<std::vector<double>>();
  ladder.baseline_accuracy = j.at("baseline_accuracy").get<double>();
  ladder.alpha = j.at("alpha").get<double>();
  ladder.oracle_calls = j.at("oracle_calls").get<std::size_t>();
  for (const auto& row : j.at("ladder")) {
    LadderEntry entry;
    entry.k = row.at("k").get<int>();
    entry.partition = detail::groups_from_json(row.at("groups"), m);
    if (row.contains("p_value")) {
      TestReport report;
      report.partition = entry.partition;
      report.alpha = ladder.alpha;
      report.baseline_accuracy = row.at("baseline_accuracy").get<double>();
      report.permuted_accuracies = row.at("permuted_accuracies").get<std::vector<double>>();
      report.p_value = row.at("p_value").get<double>();
      report.rejected = row.at("rejected").get<bool>();
      entry.report = std::move(report);
    }
    ladder.entries.push_back(std::move(entry));
  }
  parsed.selected_k = j.at("selected").at("k").get<int>();
  return parsed;
}

// ---------------------------------------------------------------------------
// Single permutation test

inline std::string render_test_report_table(const TestReport& report) {
  const SummaryStats stats = report.permuted_summary();
  std::string out;
  out += "grouping             " + report.partition.to_string() + "\n";
  out += "baseline accuracy    " + detail::fixed3(report.baseline_accuracy) + "\n";
  out += "permuted accuracy    " + detail::fixed3(stats.mean) + " (min " +
         detail::fixed3(stats.min) + ", max " + detail::fixed3(stats.max) + ", sd " +
         detail::fixed3(stats.sd) + ", " + std::to_string(report.replicates()) +
         " replicates)\n";
  out += "p-value              " + detail::fixed3(report.p_value) + "\n";
  out += std::string("decision             ") +
         (report.rejected ? "rejected: the data are not consistent with this grouping"
                          : "not rejected: the data are consistent with this grouping") +
         " (alpha " + detail::fixed3(report.alpha) + ")\n";
  return out;
}

inline ordered_json test_report_to_json(const TestReport& report) {
  ordered_json j;
  j["schema"] = "astrid-test/1";
  j["groups"] = detail::groups_to_json(report.partition);
  j["baseline_accuracy"] = report.baseline_accuracy;
  j["permuted_accuracies"] = report.permuted_accuracies;
  j["alpha"] = report.alpha;
  j["p_value"] = report.p_value;
  j["rejected"] = report.rejected;
  return j;
}

inline TestReport test_report_from_json(const ordered_json& j, int m) {
  TestReport report;
  report.partition = detail::groups_from_json(j.at("groups"), m);
  report.baseline_accuracy = j.at("baseline_accuracy").get<double>();
  report.permuted_accuracies = j.at("permuted_accuracies").get<std::vector<double>>();
  report.alpha = j.at("alpha").get<double>();
  report.p_value = j.at("p_value").get<double>();
  report.rejected = j.at("rejected").get<bool>();
  return report;
}

// ---------------------------------------------------------------------------
// Anonymisation

inline std::string render_anonymity_table(const AnonymityReport& report) {
  std::string out;
  out += "grouping             " + report.partition.to_string() + "\n";
  out += "unique rows          " + std::to_string(report.unique_rows) + "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", report.mean_intact);
  out += "intact after shuffle " + std::string(buf) + " of " +
         std::to_string(report.unique_rows) + " (mean over " +
         std::to_string(report.replicates) + " replicates)\n";
  std::snprintf(buf, sizeof buf, "%.4f", report.p_anon);
  out += "p_anon               " + std::string(buf) + "\n";
  return out;
}

inline ordered_json anonymity_to_json(const AnonymityReport& report) {
  ordered_json j;
  j["schema"] = "astrid-anonymity/1";
  j["groups"] = detail::groups_to_json(report.partition);
  j["replicates"] = report.replicates;
  j["unique_rows"] = report.unique_rows;
  j["mean_intact"] = report.mean_intact;
  j["p_anon"] = report.p_anon;
  return j;
}

}  // namespace astrid
