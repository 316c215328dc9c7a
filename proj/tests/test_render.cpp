#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace astrid;

namespace {

GroupingLadder tiny_ladder() {
  GroupingLadder ladder;
  ladder.ordering = {3, 4, 1, 2};
  ladder.boundary_values = {0.71, 0.7025, 0.64};
  ladder.baseline_accuracy = 0.9046875;
  ladder.alpha = 0.05;
  ladder.oracle_calls = 13;
  for (int k = 1; k <= 4; ++k) {
    LadderEntry e;
    e.k = k;
    e.partition = segment(ladder.ordering, ladder.boundary_values, k);
    if (k > 1) {
      TestReport r;
      r.partition = e.partition;
      r.alpha = 0.05;
      r.baseline_accuracy = 0.9046875;
      r.permuted_accuracies = {0.896, 0.904, 0.91203125, 0.888};
      r.p_value = 0.4;
      r.rejected = false;
      if (k == 4) {
        r.p_value = 0.01;
        r.rejected = true;
      }
      e.report = r;
    }
    ladder.entries.push_back(e);
  }
  return ladder;
}

}  // namespace

TEST_CASE("group letters follow the ordering with parentheses at group edges") {
  const std::vector<int> ordering{3, 4, 1, 2};
  const Partition p = validate_partition({{3}, {4}, {1, 2}}, 4);
  CHECK(detail::group_letter_cells(ordering, p) ==
        std::vector<std::string>{"(A)", "(B)", "(C", "C)"});
  CHECK(detail::group_letter_cells(ordering, Partition::whole(4)) ==
        std::vector<std::string>{"(A", "A", "A", "A)"});
  CHECK(detail::group_letter_cells({1}, Partition::whole(1)) ==
        std::vector<std::string>{"(A)"});
}

TEST_CASE("ladder table carries accuracies, p-values and the selection mark") {
  const GroupingLadder ladder = tiny_ladder();
  const std::string table =
      render_ladder_table(ladder, {"a1", "a2", "a3", "a4"}, 3);

  // Attribute columns appear in ordering order.
  REQUIRE(table.find("a3") != std::string::npos);
  CHECK(table.find("a3") < table.find("a4"));
  CHECK(table.find("a4") < table.find("a1"));
  CHECK(table.find("a1") < table.find("a2"));
  CHECK(table.find("0.900") != std::string::npos);  // mean of the permuted accs
  CHECK(table.find("0.905") != std::string::npos);  // baseline, 3 decimals
  CHECK(table.find("0.400") != std::string::npos);
  CHECK(table.find("0.010") != std::string::npos);
  CHECK(table.find("*  3") != std::string::npos);
  CHECK(table.find("selected grouping (k = 3 of 4): 1,2|3|4") != std::string::npos);
  CHECK(table.find("(C") != std::string::npos);
}

TEST_CASE("ladder json round trips") {
  const GroupingLadder ladder = tiny_ladder();
  const std::vector<std::string> names{"a1", "a2", "a3", "a4"};
  const ordered_json j = ladder_to_json(ladder, names, 3);

  CHECK(j.at("schema") == "astrid-ladder/1");
  CHECK(j.at("selected").at("k") == 3);

  // Through text and back: equal structures, bit-equal doubles.
  const ordered_json reparsed = ordered_json::parse(j.dump(2));
  const ParsedLadder back = ladder_from_json(reparsed);
  CHECK(back.ladder == ladder);
  CHECK(back.selected_k == 3);
  CHECK(back.attribute_names == names);
}

TEST_CASE("test report json round trips") {
  TestReport r;
  r.partition = validate_partition({{1, 2}, {3}}, 3);
  r.baseline_accuracy = 0.8125;
  r.permuted_accuracies = {0.75, 0.8125, 0.77};
  r.alpha = 0.05;
  r.p_value = 0.5;
  r.rejected = false;
  const ordered_json j = test_report_to_json(r);
  CHECK(j.at("schema") == "astrid-test/1");
  CHECK(test_report_from_json(ordered_json::parse(j.dump()), 3) == r);
}

TEST_CASE("report tables are plain and complete") {
  TestReport r;
  r.partition = validate_partition({{1}, {2}}, 2);
  r.baseline_accuracy = 0.9;
  r.permuted_accuracies = {0.5, 0.6};
  r.alpha = 0.05;
  r.p_value = 1.0 / 3.0;
  r.rejected = false;
  const std::string table = render_test_report_table(r);
  CHECK(table.find("1|2") != std::string::npos);
  CHECK(table.find("0.900") != std::string::npos);
  CHECK(table.find("0.333") != std::string::npos);
  CHECK(table.find("not rejected") != std::string::npos);

  AnonymityReport a;
  a.partition = Partition::singletons(2);
  a.replicates = 10;
  a.unique_rows = 40;
  a.mean_intact = 1.5;
  a.p_anon = 0.0375;
  const std::string atable = render_anonymity_table(a);
  CHECK(atable.find("0.0375") != std::string::npos);
  CHECK(atable.find("40") != std::string::npos);
  const ordered_json aj = anonymity_to_json(a);
  CHECK(aj.at("p_anon") == 0.0375);
  CHECK(aj.at("unique_rows") == 40);
}
