// verlinde: Chern characters of Verlinde bundles, verification suites and
// stable graph listings.

#include "verlinde/cohft.hpp"
#include "verlinde/error.hpp"
#include "verlinde/fusion.hpp"
#include "verlinde/json_io.hpp"
#include "verlinde/verify/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace verlinde;

enum Exit { ok = 0, verify_failed = 1, invalid_input = 2, unsupported = 3, internal = 4 };

struct AlgebraOptions {
  std::string algebra = "sl2";
  int level = 1;
  int rank = 2;
  std::string datum_path;
};

struct ChOptions {
  int genus = 0;
  int n = 0;
  std::string labels;
  int max_degree = 2;
  std::string locus = "full";
  bool zero_lambda_genus0 = false;
};

FusionDatum load_algebra(const AlgebraOptions& a) {
  if (a.algebra == "sl2") return builtin_sl2(a.level);
  if (a.algebra == "slr1") return builtin_slr_level1(a.rank);
  if (a.algebra == "file") {
    if (a.datum_path.empty()) throw InvalidInput("--algebra file needs --datum <path>");
    std::ifstream in(a.datum_path);
    if (!in) throw InvalidInput("cannot open fusion datum '" + a.datum_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_fusion_datum(buffer.str());
  }
  throw InvalidInput("unknown algebra '" + a.algebra + "'");
}

// Labels are integers in the datum's indexing, or label names.
std::vector<Label> parse_labels(const FusionDatum& datum, const std::string& text) {
  std::vector<Label> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw InvalidInput("empty entry in --labels");
    if (auto found = datum.find(item)) {
      out.push_back(*found);
      continue;
    }
    std::size_t used = 0;
    int value = -1;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || value < 0 || value >= datum.size())
      throw InvalidInput("label '" + item + "' is not valid for this fusion datum");
    out.push_back(value);
  }
  return out;
}

int cmd_ch(const AlgebraOptions& alg, const ChOptions& o, const std::string& format,
           const EvalOptions& eval) {
  const FusionDatum datum = load_algebra(alg);
  if (o.genus < 0 || o.n < 0) throw InvalidInput("genus and n must be nonnegative");
  if (2 * o.genus - 2 + o.n <= 0) throw InvalidInput("unstable type: need 2g - 2 + n > 0");
  const std::vector<Label> labels = parse_labels(datum, o.labels);
  if (static_cast<int>(labels.size()) != o.n)
    throw InvalidInput("--labels has " + std::to_string(labels.size()) + " entries, expected n = " +
                       std::to_string(o.n));
  if (o.max_degree < 0) throw InvalidInput("--max-degree must be nonnegative");
  const Locus locus = parse_locus(o.locus);

  TautClass ch = verlinde_chern_character(datum, o.genus, o.n, labels, o.max_degree, eval);
  ch = restrict(ch, locus);
  if (o.zero_lambda_genus0 && o.genus == 0) ch = zero_lambda(ch);

  if (format == "json")
    std::cout << taut_to_json(ch).dump(2) << '\n';
  else
    std::cout << taut_to_text(ch);
  return ok;
}

int cmd_graphs(int g, int n, int max_edges, const std::string& format) {
  if (g < 0 || n < 0 || 2 * g - 2 + n <= 0) throw InvalidInput("unstable type: need 2g - 2 + n > 0");
  if (max_edges < 0) throw InvalidInput("--max-edges must be nonnegative");
  const auto graphs = enumerate_stable_graphs(g, n, max_edges);
  if (format == "json") {
    nlohmann::ordered_json out;
    out["g"] = g;
    out["n"] = n;
    out["max_edges"] = max_edges;
    out["count"] = graphs.size();
    out["graphs"] = nlohmann::ordered_json::array();
    for (const auto& gr : graphs) {
      nlohmann::ordered_json item;
      item["graph"] = graph_to_json(gr);
      item["automorphisms"] = automorphism_order(gr);
      item["locus"] = to_string(classify_locus(gr, g));
      out["graphs"].push_back(std::move(item));
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << graphs.size() << " graphs\n";
    for (const auto& gr : graphs)
      std::cout << "aut=" << automorphism_order(gr) << "  " << to_string(classify_locus(gr, g))
                << "  " << describe(gr) << '\n';
  }
  return ok;
}

int cmd_verify(const std::string& suite, const std::string& format, const EvalOptions& eval) {
  const auto& names = verify::suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw InvalidInput("unknown suite '" + suite + "'");
  const auto reports = verify::run_suites(suite, eval);
  bool all_passed = true;
  if (format == "json") {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json item;
      item["suite"] = r.suite;
      item["passed"] = r.passed();
      item["seconds"] = r.seconds;
      item["budget_seconds"] = r.budget_seconds;
      item["checks"] = nlohmann::ordered_json::array();
      for (const auto& c : r.checks)
        item["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      out.push_back(std::move(item));
      all_passed = all_passed && r.passed();
    }
    std::cout << out.dump(2) << '\n';
  } else {
    for (const auto& r : reports) {
      for (const auto& c : r.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << r.suite << '/' << c.name << ": " << c.detail
                  << '\n';
      std::ostringstream time;
      time.precision(3);
      time << std::fixed << r.seconds << "s (limit " << r.budget_seconds << "s)";
      std::cout << (r.passed() ? "PASS " : "FAIL ") << r.suite << ": " << r.checks.size()
                << " checks, " << r.failures() << " failed, " << time.str() << '\n';
      all_passed = all_passed && r.passed();
    }
  }
  return all_passed ? ok : verify_failed;
}

int fail(const char* kind, const std::string& what, int code) {
  std::string line = what;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "error[" << kind << "]: " << line << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chern characters of Verlinde bundles over Mbar_{g,n}"};
  app.require_subcommand(1);

  AlgebraOptions alg;
  ChOptions ch;
  std::string format = "json";
  unsigned threads = 0;
  std::string suite = "all";
  int max_edges = 1;

  auto add_algebra = [&](CLI::App* sub) {
    sub->add_option("--algebra", alg.algebra, "sl2, slr1 or file")
        ->check(CLI::IsMember({"sl2", "slr1", "file"}));
    sub->add_option("--level", alg.level, "sl2 level");
    sub->add_option("--rank", alg.rank, "r for slr1");
    sub->add_option("--datum", alg.datum_path, "fusion datum JSON (with --algebra file)");
  };

  CLI::App* ch_cmd = app.add_subcommand("ch", "Chern character through a given degree");
  add_algebra(ch_cmd);
  ch_cmd->add_option("--genus", ch.genus, "genus g")->required();
  ch_cmd->add_option("-n", ch.n, "number of markings")->required();
  ch_cmd->add_option("--labels", ch.labels, "comma-separated labels, one per marking");
  ch_cmd->add_option("--max-degree", ch.max_degree, "truncation degree D");
  ch_cmd->add_option("--locus", ch.locus, "full, smooth, rational_tails or compact_type")
      ->check(CLI::IsMember({"full", "general", "smooth", "rational_tails", "compact_type"}));
  ch_cmd->add_flag("--zero-lambda-genus0", ch.zero_lambda_genus0,
                   "drop lambda_1 terms when g = 0");
  ch_cmd->add_option("--threads", threads, "worker threads (0: all)");
  ch_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the self-verification suites");
  std::string verify_format = "text";
  verify_cmd->add_option("--suite", suite, "all or one suite name");
  verify_cmd->add_option("--threads", threads, "worker threads (0: all)");
  verify_cmd->add_option("--format", verify_format, "text or json")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* graphs_cmd = app.add_subcommand("graphs", "List stable graphs");
  int graph_genus = 0, graph_n = 0;
  graphs_cmd->add_option("--genus", graph_genus, "genus g")->required();
  graphs_cmd->add_option("-n", graph_n, "number of markings")->required();
  graphs_cmd->add_option("--max-edges", max_edges, "maximum number of edges");
  graphs_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("invalid-input", e.what(), invalid_input);
  }

  EvalOptions eval;
  eval.threads = threads;
  try {
    if (ch_cmd->parsed()) return cmd_ch(alg, ch, format, eval);
    if (graphs_cmd->parsed()) return cmd_graphs(graph_genus, graph_n, max_edges, format);
    return cmd_verify(suite, verify_format, eval);
  } catch (const InvalidInput& e) {
    return fail("invalid-input", e.what(), invalid_input);
  } catch (const UnsupportedOperation& e) {
    return fail("unsupported", e.what(), unsupported);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), internal);
  }
}
