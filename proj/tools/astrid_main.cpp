// Command line front end: generate benchmark data, test a grouping, search
// for the finest acceptable grouping, or release a shuffled copy of a
// dataset. Results go to standard output (or --out); diagnostics go to
// standard error. Exit status: 0 on success (hypothesis not rejected), 3
// when the tested hypothesis is rejected, 2 on any input or usage error.

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <astrid/astrid.hpp>

namespace {

struct CommonOptions {
  std::string input;
  std::string class_column = "class";
  std::string classifier = "rf";
  std::vector<std::string> kinds;
  std::string split_text = "0.5,0.25,0.25";
  double alpha = 0.05;
  int test_replicates = 250;    // R: permutations behind each p-value
  int reward_replicates = 100;  // R': permutations behind each reward estimate
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string format = "table";
  std::string out;
};

void add_data_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--input", opt.input, "CSV file to analyse")->required();
  cmd.add_option("--class-column", opt.class_column, "name of the label column")
      ->capture_default_str();
  cmd.add_option("--kind", opt.kinds,
                 "force a column kind, e.g. --kind zip=categorical (repeatable)");
}

void add_run_options(CLI::App& cmd, CommonOptions& opt, bool with_search) {
  cmd.add_option("--classifier", opt.classifier,
                 "nb | rf[:trees=N,features=F] | knn[:k=N] | external:<command>")
      ->capture_default_str();
  cmd.add_option("--alpha", opt.alpha, "significance level")->capture_default_str();
  cmd.add_option("--R", opt.test_replicates, "permutation replicates per p-value")
      ->capture_default_str();
  if (with_search)
    cmd.add_option("--Rprime", opt.reward_replicates,
                   "permutation replicates per reward estimate in the search")
        ->capture_default_str();
  cmd.add_option("--split", opt.split_text,
                 "train,reward,selection shares of the stratified split")
      ->capture_default_str();
  cmd.add_option("--seed", opt.seed, "master seed")->capture_default_str();
  cmd.add_option("--jobs", opt.jobs, "worker threads (0 = all cores); results do not depend on it")
      ->capture_default_str();
  cmd.add_option("--format", opt.format, "table | json")->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  cmd.add_option("--out", opt.out, "also write the report to this file");
}

std::array<double, 3> parse_split(const std::string& text) {
  std::array<double, 3> ratios{};
  std::size_t at = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const std::size_t end = p == 2 ? text.size() : text.find(',', at);
    if (end == std::string::npos)
      throw std::invalid_argument("split must be three comma-separated shares");
    const auto v = astrid::parse_double(text.substr(at, end - at));
    if (!v) throw std::invalid_argument("split share \"" + text.substr(at, end - at) +
                                        "\" is not a number");
    ratios[p] = *v;
    at = end + 1;
  }
  return ratios;
}

astrid::Partition parse_partition(const std::string& text, int m) {
  std::vector<std::vector<int>> groups;
  std::vector<int> group;
  std::string token;
  auto flush_token = [&] {
    if (token.empty()) throw std::invalid_argument("empty attribute index in grouping");
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("attribute index \"" + token + "\" is not an integer");
    }
    if (used != token.size())
      throw std::invalid_argument("attribute index \"" + token + "\" is not an integer");
    group.push_back(value);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',') {
      flush_token();
    } else if (ch == '|') {
      flush_token();
      groups.push_back(std::move(group));
      group.clear();
    } else if (ch != ' ') {
      token += ch;
    }
  }
  flush_token();
  groups.push_back(std::move(group));
  return astrid::Partition::validate(std::move(groups), m);
}

astrid::LoadOptions load_options(const CommonOptions& opt, std::size_t min_classes = 2) {
  astrid::LoadOptions options;
  options.min_classes = min_classes;
  for (const std::string& item : opt.kinds) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--kind expects name=numeric or name=categorical, got \"" +
                                  item + "\"");
    const std::string name = item.substr(0, eq);
    const std::string kind = item.substr(eq + 1);
    if (kind == "numeric") {
      options.kind_overrides[name] = astrid::ColumnKind::kNumeric;
    } else if (kind == "categorical") {
      options.kind_overrides[name] = astrid::ColumnKind::kCategorical;
    } else {
      throw std::invalid_argument("unknown column kind \"" + kind + "\"");
    }
  }
  return options;
}

astrid::LoadResult load_input(const CommonOptions& opt, std::size_t min_classes = 2) {
  astrid::LoadResult loaded = astrid::load_csv(opt.input, opt.class_column,
                                               load_options(opt, min_classes));
  std::cerr << "loaded " << loaded.dataset.n_rows() << " rows, " << loaded.dataset.n_cols()
            << " attributes, " << loaded.dataset.n_classes() << " classes";
  if (loaded.rows_dropped) std::cerr << "; dropped " << loaded.rows_dropped << " incomplete rows";
  if (!loaded.columns_dropped.empty()) {
    std::cerr << "; dropped constant columns:";
    for (const auto& name : loaded.columns_dropped) std::cerr << ' ' << name;
  }
  std::cerr << '\n';
  return loaded;
}

std::vector<std::string> attribute_names(const astrid::Dataset& d) {
  std::vector<std::string> names;
  names.reserve(d.n_cols());
  for (const auto& col : d.columns()) names.push_back(col.name);
  return names;
}

void deliver(const std::string& rendered, const std::string& out_path) {
  std::cout << rendered;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error(out_path + ": cannot open file for writing");
    out << rendered;
  }
}

// ---------------------------------------------------------------------------

int cmd_synth(std::size_t n_per_class, std::uint64_t seed, const std::string& out_path) {
  const astrid::Dataset data = astrid::generate_synthetic(n_per_class, seed);
  astrid::write_csv(data, out_path);
  std::cerr << "wrote " << data.n_rows() << " rows to " << out_path << " (factorises over "
            << astrid::synthetic_ground_truth().to_string() << ")\n";
  return 0;
}

int cmd_test(const CommonOptions& opt, const std::string& partition_text) {
  const astrid::LoadResult loaded = load_input(opt);
  const astrid::Partition partition =
      parse_partition(partition_text, static_cast<int>(loaded.dataset.n_cols()));
  const astrid::ClassifierSpec spec = astrid::ClassifierSpec::parse(opt.classifier);
  const auto trainer = astrid::make_trainer(spec);
  const astrid::SplitTriple split =
      astrid::split_dataset(loaded.dataset, parse_split(opt.split_text),
                            astrid::derive_seed(opt.seed, astrid::stream::kSplit));

  const astrid::TestReport report = astrid::empirical_p_value(
      split.train, split.test_select, partition, *trainer, opt.test_replicates, opt.alpha,
      opt.seed, opt.jobs);

  if (opt.format == "json") {
    deliver(astrid::test_report_to_json(report).dump(2) + "\n", opt.out);
  } else {
    deliver(astrid::render_test_report_table(report), opt.out);
  }
  return report.rejected ? 3 : 0;
}

int cmd_analyze(const CommonOptions& opt) {
  const astrid::LoadResult loaded = load_input(opt);
  const astrid::ClassifierSpec spec = astrid::ClassifierSpec::parse(opt.classifier);
  const auto trainer = astrid::make_trainer(spec);
  const astrid::SplitTriple split =
      astrid::split_dataset(loaded.dataset, parse_split(opt.split_text),
                            astrid::derive_seed(opt.seed, astrid::stream::kSplit));

  astrid::AstridParams params;
  params.reward_replicates = opt.reward_replicates;
  params.test_replicates = opt.test_replicates;
  params.alpha = opt.alpha;
  params.seed = opt.seed;
  params.jobs = opt.jobs;

  std::cerr << "searching groupings of " << split.train.n_cols() << " attributes ("
            << opt.reward_replicates << " permutations per reward, " << opt.test_replicates
            << " per test)\n";
  const astrid::GroupingLadder ladder = astrid::analyze(split, *trainer, params);
  const astrid::LadderEntry& selected = astrid::select_grouping(ladder);

  const std::vector<std::string> names = attribute_names(loaded.dataset);
  if (opt.format == "json") {
    deliver(astrid::ladder_to_json(ladder, names, selected.k).dump(2) + "\n", opt.out);
  } else {
    deliver(astrid::render_ladder_table(ladder, names, selected.k), opt.out);
  }
  return 0;
}

int cmd_anonymize(const CommonOptions& opt, const std::string& partition_text,
                  int replicates, const std::string& release_path) {
  const astrid::LoadResult loaded = load_input(opt, 1);
  if (partition_text.empty())
    throw std::invalid_argument(
        "no grouping given; pass --partition, e.g. one found by `astrid analyze`");
  const astrid::Partition partition =
      parse_partition(partition_text, static_cast<int>(loaded.dataset.n_cols()));

  const astrid::Dataset released = astrid::anonymize(loaded.dataset, partition, opt.seed);
  astrid::write_csv(released, release_path);
  std::cerr << "wrote shuffled copy to " << release_path << '\n';

  const astrid::AnonymityReport report =
      astrid::measure_p_anon(loaded.dataset, partition, replicates, opt.seed, opt.jobs);
  if (report.p_anon == 1.0)
    std::cerr << "warning: every unique row survives this shuffle intact; the release is a row "
                 "reordering of the original\n";

  if (opt.format == "json") {
    deliver(astrid::anonymity_to_json(report).dump(2) + "\n", opt.out);
  } else {
    deliver(astrid::render_anonymity_table(report), opt.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation tests for attribute interactions behind a classifier"};
  app.set_version_flag("--version", "astrid 0.1.0");
  app.require_subcommand(1);

  CommonOptions opt;

  std::size_t synth_n = 500;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "generate a benchmark dataset");
  synth->add_option("--n-per-class", synth_n, "rows per class")->capture_default_str();
  synth->add_option("--seed", opt.seed, "master seed")->capture_default_str();
  synth->add_option("--out", synth_out, "output CSV path")->required();

  std::string partition_text;
  CLI::App* test = app.add_subcommand("test", "permutation test of one grouping");
  add_data_options(*test, opt);
  test->add_option("--partition", partition_text, "grouping to test, e.g. \"1,2|3|4\"")
      ->required();
  add_run_options(*test, opt, false);

  CLI::App* analyze = app.add_subcommand("analyze", "search and test groupings of every size");
  add_data_options(*analyze, opt);
  add_run_options(*analyze, opt, true);

  std::string release_path;
  int anon_replicates = 100;
  CLI::App* anonymize = app.add_subcommand("anonymize", "release a shuffled copy of a dataset");
  add_data_options(*anonymize, opt);
  anonymize->add_option("--partition", partition_text, "grouping to shuffle under")->required();
  anonymize->add_option("--replicates", anon_replicates, "shuffles behind the p_anon estimate")
      ->capture_default_str();
  anonymize->add_option("--release", release_path, "path for the shuffled CSV")->required();
  anonymize->add_option("--seed", opt.seed, "master seed")->capture_default_str();
  anonymize->add_option("--jobs", opt.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();
  anonymize->add_option("--format", opt.format, "table | json")
      ->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  anonymize->add_option("--out", opt.out, "also write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_n, opt.seed, synth_out);
    if (test->parsed()) return cmd_test(opt, partition_text);
    if (analyze->parsed()) return cmd_analyze(opt);
    if (anonymize->parsed()) return cmd_anonymize(opt, partition_text, anon_replicates, release_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
