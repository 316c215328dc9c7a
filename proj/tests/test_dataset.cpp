#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace astrid;

TEST_CASE("load_csv infers kinds and values") {
  const std::string csv =
      "age,city,income,class\n"
      "31,oslo,100.5,yes\n"
      "42,turku,200,no\n"
      "27,oslo,50,yes\n";
  const LoadResult r = load_csv_text(csv, "class");
  const Dataset& d = r.dataset;

  REQUIRE(d.n_rows() == 3);
  REQUIRE(d.n_cols() == 3);
  REQUIRE(r.rows_dropped == 0);
  REQUIRE(r.columns_dropped.empty());

  CHECK(d.column(0).name == "age");
  CHECK(d.column(0).kind == ColumnKind::kNumeric);
  CHECK(d.column(0).numeric == std::vector<double>{31, 42, 27});

  CHECK(d.column(1).kind == ColumnKind::kCategorical);
  CHECK(d.column(1).categories == std::vector<std::string>{"oslo", "turku"});
  CHECK(d.column(1).codes == std::vector<std::int32_t>{0, 1, 0});

  CHECK(d.column(2).numeric == std::vector<double>{100.5, 200, 50});

  CHECK(d.class_names() == std::vector<std::string>{"no", "yes"});
  CHECK(d.labels() == std::vector<std::int32_t>{1, 0, 1});
  CHECK(d.class_column() == "class");
}

TEST_CASE("load_csv drops incomplete rows then constant columns") {
  // "height" varies only on the row that has a missing field, so it becomes
  // constant once that row is gone; the drop order matters.
  const std::string csv =
      "height,width,class\n"
      "10,1,a\n"
      "10,2,b\n"
      "99,?,a\n"
      "10,4,b\n";
  const LoadResult r = load_csv_text(csv, "class");
  REQUIRE(r.rows_dropped == 1);
  REQUIRE(r.columns_dropped == std::vector<std::string>{"height"});
  REQUIRE(r.dataset.n_cols() == 1);
  CHECK(r.dataset.column(0).name == "width");
  CHECK(r.dataset.n_rows() == 3);
}

TEST_CASE("load_csv treats empty and question mark as missing") {
  const std::string csv =
      "a,b,class\n"
      "1,x,yes\n"
      ",x,no\n"
      "3,?,no\n"
      "4,y,no\n"
      "5,x,yes\n";
  const LoadResult r = load_csv_text(csv, "class");
  CHECK(r.rows_dropped == 2);
  CHECK(r.dataset.n_rows() == 3);
}

TEST_CASE("load_csv error cases") {
  CHECK_THROWS_WITH(load_csv_text("a,b,class\n1,2,x\n", "label"),
                    Catch::Matchers::ContainsSubstring("class column \"label\" not found") &&
                        Catch::Matchers::ContainsSubstring("a, b, class"));
  CHECK_THROWS_WITH(load_csv_text("a,class\n1,x\n2,x\n", "class"),
                    Catch::Matchers::ContainsSubstring("distinct value"));
  CHECK_THROWS_WITH(load_csv_text("a,class\n1\n", "class"),
                    Catch::Matchers::ContainsSubstring("record 2"));
  CHECK_THROWS_WITH(load_csv_text("a,a,class\n1,2,x\n1,2,y\n", "class"),
                    Catch::Matchers::ContainsSubstring("duplicate column name"));
  CHECK_THROWS_WITH(load_csv_text("a,class\n?,x\n?,y\n", "class"),
                    Catch::Matchers::ContainsSubstring("no rows left"));
  // Constant attribute is the only attribute.
  CHECK_THROWS_WITH(load_csv_text("a,class\n7,x\n7,y\n", "class"),
                    Catch::Matchers::ContainsSubstring("no attribute columns remain"));
  // Numeric override on unparseable data.
  LoadOptions opts;
  opts.kind_overrides["a"] = ColumnKind::kNumeric;
  CHECK_THROWS_WITH(load_csv_text("a,class\nlow,x\nhigh,y\n", "class", opts),
                    Catch::Matchers::ContainsSubstring("declared numeric"));
}

TEST_CASE("load_csv kind override keeps numeric-looking tokens categorical") {
  LoadOptions opts;
  opts.kind_overrides["zip"] = ColumnKind::kCategorical;
  const LoadResult r = load_csv_text("zip,t,class\n100,0.5,a\n200,0.7,b\n100,0.1,a\n",
                                     "class", opts);
  CHECK(r.dataset.column(0).kind == ColumnKind::kCategorical);
  CHECK(r.dataset.column(0).categories == std::vector<std::string>{"100", "200"});
}

TEST_CASE("csv parser handles quoting") {
  const std::string csv =
      "name,note,class\n"
      "\"a,b\",\"say \"\"hi\"\"\",x\n"
      "c,\"two\nlines\",y\n";
  const LoadResult r = load_csv_text(csv, "class");
  REQUIRE(r.dataset.n_rows() == 2);
  CHECK(r.dataset.column(0).categories == std::vector<std::string>{"a,b", "c"});
  CHECK(r.dataset.column(1).categories == std::vector<std::string>{"say \"hi\"", "two\nlines"});
  CHECK_THROWS_WITH(load_csv_text("a,class\n\"oops,x\n", "class"),
                    Catch::Matchers::ContainsSubstring("unterminated"));
}

TEST_CASE("csv round trip is lossless") {
  const Dataset d = testsupport::random_dataset(7, 40, 2, 2);
  std::ostringstream out;
  write_csv(d, out);
  const LoadResult r = load_csv_text(out.str(), d.class_column());
  CHECK(r.dataset == d);
}

TEST_CASE("validate_partition canonicalises") {
  const Partition p = validate_partition({{3}, {4, 1}, {2}}, 4);
  REQUIRE(p.groups().size() == 3);
  CHECK(p.groups()[0] == std::vector<int>{1, 4});
  CHECK(p.groups()[1] == std::vector<int>{2});
  CHECK(p.groups()[2] == std::vector<int>{3});
  CHECK(p.to_string() == "1,4|2|3");
  CHECK(p == validate_partition({{2}, {1, 4}, {3}}, 4));

  CHECK(Partition::whole(3).to_string() == "1,2,3");
  CHECK(Partition::singletons(3).to_string() == "1|2|3");
  CHECK(Partition::singletons(3).group_of(2) == 1);
}

TEST_CASE("validate_partition rejects malformed groupings") {
  CHECK_THROWS_WITH(validate_partition({{1, 2}, {2, 3}}, 3),
                    Catch::Matchers::ContainsSubstring("more than one group"));
  CHECK_THROWS_WITH(validate_partition({{1}, {3}}, 3),
                    Catch::Matchers::ContainsSubstring("not covered"));
  CHECK_THROWS_WITH(validate_partition({{1}, {}}, 1),
                    Catch::Matchers::ContainsSubstring("group 2 is empty"));
  CHECK_THROWS_WITH(validate_partition({{0, 1}}, 1),
                    Catch::Matchers::ContainsSubstring("out of range"));
  CHECK_THROWS_WITH(validate_partition({{1, 5}}, 4),
                    Catch::Matchers::ContainsSubstring("out of range [1, 4]"));
}

TEST_CASE("split_dataset is stratified with largest-remainder sizes") {
  // 37 rows of class a, 23 of class b; shares 0.5/0.25/0.25.
  // Largest remainder per class: a -> 18.5, 9.25, 9.25 -> bases 18, 9, 9 plus
  // one leftover to the .5 remainder -> 19, 9, 9; b -> 11.5, 5.75, 5.75 ->
  // bases 11, 5, 5 plus two leftovers to the .75 remainders -> 11, 6, 6.
  std::vector<Column> cols(1);
  cols[0].name = "x";
  cols[0].kind = ColumnKind::kNumeric;
  std::vector<std::int32_t> labels;
  for (int i = 0; i < 60; ++i) {
    cols[0].numeric.push_back(i);
    labels.push_back(i < 37 ? 0 : 1);
  }
  const Dataset d(std::move(cols), std::move(labels), {"a", "b"});
  const SplitTriple s = split_dataset(d, {0.5, 0.25, 0.25}, 11);

  auto count = [](const Dataset& part, std::int32_t c) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < part.n_rows(); ++i)
      if (part.label(i) == c) ++n;
    return n;
  };
  CHECK(count(s.train, 0) == 19);
  CHECK(count(s.test_reward, 0) == 9);
  CHECK(count(s.test_select, 0) == 9);
  CHECK(count(s.train, 1) == 11);
  CHECK(count(s.test_reward, 1) == 6);
  CHECK(count(s.test_select, 1) == 6);

  // The three parts partition the rows: every original value appears exactly
  // once across them.
  std::multiset<double> seen;
  for (const Dataset* part : {&s.train, &s.test_reward, &s.test_select})
    for (double v : part->column(0).numeric) seen.insert(v);
  REQUIRE(seen.size() == 60);
  for (int i = 0; i < 60; ++i) CHECK(seen.count(i) == 1);
}

TEST_CASE("split_dataset apportionment oracle") {
  // Largest remainder: 10 rows at 0.5/0.25/0.25 -> 5, 2.5, 2.5 -> 5, 3, 2
  // (equal remainders .5 break by part order).
  std::vector<Column> cols(1);
  cols[0].name = "x";
  cols[0].kind = ColumnKind::kNumeric;
  std::vector<std::int32_t> labels;
  for (int i = 0; i < 20; ++i) {
    cols[0].numeric.push_back(i);
    labels.push_back(i < 10 ? 0 : 1);
  }
  const Dataset d(std::move(cols), std::move(labels), {"a", "b"});
  const SplitTriple s = split_dataset(d, {0.5, 0.25, 0.25}, 3);
  CHECK(s.train.n_rows() == 10);
  CHECK(s.test_reward.n_rows() == 6);
  CHECK(s.test_select.n_rows() == 4);
}

TEST_CASE("split_dataset is deterministic and seed-sensitive") {
  const Dataset d = testsupport::random_dataset(5, 80, 3, 0);
  const SplitTriple a = split_dataset(d, {0.5, 0.25, 0.25}, 42);
  const SplitTriple b = split_dataset(d, {0.5, 0.25, 0.25}, 42);
  const SplitTriple c = split_dataset(d, {0.5, 0.25, 0.25}, 43);
  CHECK(a.train == b.train);
  CHECK(a.test_reward == b.test_reward);
  CHECK(a.test_select == b.test_select);
  CHECK(a.train != c.train);
}

TEST_CASE("split_dataset rejects bad ratios and starved classes") {
  const Dataset d = testsupport::random_dataset(5, 40, 2, 0);
  CHECK_THROWS_WITH(split_dataset(d, {0.5, 0.5, 0.25}, 1),
                    Catch::Matchers::ContainsSubstring("sum to 1"));
  CHECK_THROWS_WITH(split_dataset(d, {1.0, 0.0, 0.0}, 1),
                    Catch::Matchers::ContainsSubstring("positive"));

  std::vector<Column> cols(1);
  cols[0].name = "x";
  cols[0].kind = ColumnKind::kNumeric;
  cols[0].numeric = {1, 2, 3, 4, 5};
  const Dataset tiny(std::move(cols), {0, 0, 0, 0, 1}, {"a", "b"});
  CHECK_THROWS_WITH(split_dataset(tiny, {0.5, 0.25, 0.25}, 1),
                    Catch::Matchers::ContainsSubstring("class \"b\""));
}

TEST_CASE("generate_synthetic shape and determinism") {
  const Dataset d = generate_synthetic(100, 9);
  REQUIRE(d.n_rows() == 200);
  REQUIRE(d.n_cols() == 4);
  CHECK(d.class_names() == std::vector<std::string>{"0", "1"});
  CHECK(d == generate_synthetic(100, 9));
  CHECK(d != generate_synthetic(100, 10));
  CHECK_THROWS(generate_synthetic(0, 1));
  CHECK(synthetic_ground_truth().to_string() == "1,2|3|4");
}

TEST_CASE("generate_synthetic marginals hide the pair but the joint carries it") {
  const Dataset d = generate_synthetic(2000, 4);
  std::vector<double> a1_class0, a1_class1, a2_class0, a2_class1;
  std::size_t same_sign[2] = {0, 0}, per_class[2] = {0, 0};
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const auto c = static_cast<std::size_t>(d.label(i));
    (c == 0 ? a1_class0 : a1_class1).push_back(d.column(0).numeric[i]);
    (c == 0 ? a2_class0 : a2_class1).push_back(d.column(1).numeric[i]);
    ++per_class[c];
    if (d.column(0).numeric[i] * d.column(1).numeric[i] > 0) ++same_sign[c];
  }
  // Marginal of each pair member is the same in both classes...
  CHECK(testsupport::ks_same_distribution_99(a1_class0, a1_class1));
  CHECK(testsupport::ks_same_distribution_99(a2_class0, a2_class1));
  // ...but the joint sign pattern separates the classes sharply.
  const double rate0 = static_cast<double>(same_sign[0]) / static_cast<double>(per_class[0]);
  const double rate1 = static_cast<double>(same_sign[1]) / static_cast<double>(per_class[1]);
  CHECK(rate0 > 0.8);
  CHECK(rate1 < 0.2);
}

TEST_CASE("subset_rows keeps schema and picks rows") {
  const Dataset d = testsupport::random_dataset(13, 30, 1, 1);
  const Dataset s = subset_rows(d, {3, 7, 7});
  REQUIRE(s.n_rows() == 3);
  CHECK(s.column(0).numeric[0] == d.column(0).numeric[3]);
  CHECK(s.column(0).numeric[1] == d.column(0).numeric[7]);
  CHECK(s.column(0).numeric[2] == d.column(0).numeric[7]);
  CHECK(s.label(0) == d.label(3));
  CHECK(s.column(1).categories == d.column(1).categories);
  CHECK(s.class_names() == d.class_names());
}
