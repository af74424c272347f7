#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "squirrelkit/adapter.h"
#include "squirrelkit/campaign.h"
#include "squirrelkit/instantiator.h"
#include "squirrelkit/ir.h"
#include "squirrelkit/library.h"
#include "squirrelkit/mutator.h"

namespace fs = std::filesystem;
using namespace squirrelkit;

namespace {

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    ss << f.rdbuf();
  }
  return ss.str();
}

IrProgram parse_or_die(const std::string& sql) {
  auto parsed = sql_to_ir(sql);
  if (auto* err = std::get_if<SyntaxError>(&parsed))
    throw std::runtime_error("syntax error at offset " + std::to_string(err->offset) + ": " + err->message);
  return std::move(std::get<IrProgram>(parsed));
}

void add_campaign_options(CLI::App* cmd, CampaignConfig& cfg) {
  cmd->add_option("--corpus", cfg.corpus_dir, "directory of seed .sql files");
  cmd->add_option("--out", cfg.output_dir, "output directory")->required();
  cmd->add_option("--target", cfg.target, "instrumented-sqlite or mock")->check(CLI::IsMember({"instrumented-sqlite", "mock"}));
  cmd->add_option("--target-binary", cfg.target_binary, "instrumented target executable");
  cmd->add_option("--mock-script", cfg.mock_script, "pattern script for the mock target");
  cmd->add_option("--time", cfg.time_budget_s, "time budget in seconds");
  cmd->add_option("--max-execs", cfg.max_execs, "stop after this many executions");
  cmd->add_option("--seed", cfg.rng_seed, "random seed");
  cmd->add_option("--bitmap-size", cfg.bitmap_size, "coverage map size in bytes");
  cmd->add_option("--timeout-ms", cfg.timeout_ms, "per-query timeout");
  cmd->add_option("--library-cap", cfg.library_cap, "maximum library entries");
  cmd->add_option("--max-nodes", cfg.mutation.max_nodes, "discard mutated candidates larger than this many IR nodes");
  cmd->add_option("--stats-interval", cfg.stats_interval_s, "seconds between stats lines");
  cmd->add_flag("--drop-invalid-novelty", cfg.drop_invalid_novelty, "never queue syntax errors");
  cmd->add_flag("--resume", cfg.resume, "continue from the state in --out");
  cmd->add_flag("!--quiet,--verbose", cfg.quiet, "print stats lines to stderr");
}

void print_stats(const CampaignStats& s) {
  std::printf("execs=%llu correct=%llu semantic_errors=%llu syntax_errors=%llu crashes_unique=%llu edges=%llu queue=%llu\n",
              (unsigned long long)s.execs, (unsigned long long)s.correct, (unsigned long long)s.semantic_errors,
              (unsigned long long)s.syntax_errors, (unsigned long long)s.crashes_unique,
              (unsigned long long)s.global_edges, (unsigned long long)s.queue_len);
}

int render_stats(const fs::path& dir) {
  std::ifstream f(dir / "stats.jsonl");
  if (!f) throw std::runtime_error("no stats.jsonl in " + dir.string());
  static const char* kCols[] = {"elapsed_s", "execs",       "execs_per_s", "global_edges",   "queue_len", "library_entries",
                                "syntax_ok", "semantic_ok", "correct",     "crashes_unique", "timeouts"};
  for (std::size_t i = 0; i < std::size(kCols); ++i) std::printf("%s%s", i ? "\t" : "", kCols[i]);
  std::printf("\n");
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    for (std::size_t i = 0; i < std::size(kCols); ++i) std::printf("%s%s", i ? "\t" : "", j[kCols[i]].dump().c_str());
    std::printf("\n");
  }
  std::ifstream sf(dir / "summary.json");
  if (sf) {
    auto s = nlohmann::json::parse(sf);
    std::uint64_t execs = s["execs"];
    auto pct = [&](std::uint64_t v) { return execs ? 100.0 * static_cast<double>(v) / static_cast<double>(execs) : 0.0; };
    std::printf("\nclass\tcount\tpercent\n");
    for (const char* k : {"syntax_errors", "semantic_errors", "correct"}) {
      std::uint64_t v = s[k];
      std::printf("%s\t%llu\t%.2f\n", k, (unsigned long long)v, pct(v));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SQL fuzzer driven by IR mutation and dependency-aware instantiation"};
  app.require_subcommand(1);

  CampaignConfig fuzz_cfg;
  bool no_instantiate = false;
  auto* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
  add_campaign_options(fuzz, fuzz_cfg);
  fuzz->add_option("--rules", fuzz_cfg.rules_path, "relation rule file");
  fuzz->add_flag("--no-instantiate", no_instantiate, "fill data randomly instead of following dependencies");

  CampaignConfig base_cfg;
  auto* baseline = app.add_subcommand("baseline", "run a byte-level havoc campaign");
  add_campaign_options(baseline, base_cfg);
  baseline->add_option("--havoc-stack", base_cfg.havoc_stack, "mutations per candidate (negative: random power of two)");

  std::string input = "-";
  std::uint64_t seed = 0;
  std::string rules_path;

  auto* translate = app.add_subcommand("translate", "print the IR of a query");
  translate->add_option("input", input, "SQL file or - for stdin");

  auto* strip = app.add_subcommand("strip", "print the query with data replaced by placeholders");
  strip->add_option("input", input, "SQL file or - for stdin");

  std::string library_dir;
  std::size_t count = 8;
  auto* mutate = app.add_subcommand("mutate-once", "print mutated skeletons of a query");
  mutate->add_option("input", input, "SQL file or - for stdin");
  mutate->add_option("--seed", seed);
  mutate->add_option("--library", library_dir, "directory of .sql files for the library (default: the input)");
  mutate->add_option("--count", count, "maximum candidates");

  bool random_fill = false;
  auto* inst = app.add_subcommand("instantiate", "fill a query's data following dependencies");
  inst->add_option("input", input, "SQL file or - for stdin");
  inst->add_option("--seed", seed);
  inst->add_option("--rules", rules_path);
  inst->add_flag("--no-instantiate", random_fill, "fill randomly instead");

  auto* depgraph = app.add_subcommand("depgraph", "print the dependency graph of a query");
  depgraph->add_option("input", input, "SQL file or - for stdin");
  depgraph->add_option("--seed", seed);
  depgraph->add_option("--rules", rules_path);

  std::string target = "instrumented-sqlite", target_binary, mock_script;
  int timeout_ms = 2000;
  auto* cls = app.add_subcommand("classify", "run a query once and print its outcome class");
  cls->add_option("input", input, "SQL file or - for stdin");
  cls->add_option("--target", target)->check(CLI::IsMember({"instrumented-sqlite", "mock"}));
  cls->add_option("--target-binary", target_binary);
  cls->add_option("--mock-script", mock_script);
  cls->add_option("--timeout-ms", timeout_ms);

  std::string stats_dir;
  auto* stats = app.add_subcommand("stats", "print a campaign's stats as tab-separated tables");
  stats->add_option("dir", stats_dir, "campaign output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fuzz) {
      if (no_instantiate) fuzz_cfg.mode = CampaignMode::kNoInstantiate;
      print_stats(run_campaign(fuzz_cfg));
    } else if (*baseline) {
      print_stats(baseline_havoc_campaign(base_cfg));
    } else if (*translate) {
      std::cout << dump_ir(parse_or_die(read_input(input)));
    } else if (*strip) {
      std::cout << ir_to_sql(strip_data(parse_or_die(read_input(input)))) << "\n";
    } else if (*mutate) {
      IrProgram skeleton = strip_data(parse_or_die(read_input(input)));
      IrLibrary lib;
      if (library_dir.empty()) {
        lib.insert(skeleton);
      } else {
        for (const auto& de : fs::recursive_directory_iterator(library_dir)) {
          if (!de.is_regular_file() || de.path().extension() != ".sql") continue;
          auto parsed = sql_to_ir(read_input(de.path().string()));
          if (auto* p = std::get_if<IrProgram>(&parsed)) lib.insert(strip_data(*p));
        }
      }
      MutationConfig mc;
      mc.max_candidates_per_input = count;
      Rng rng(seed);
      GenerateStats gs;
      for (const auto& c : generate(skeleton, lib, mc, rng, &gs)) std::cout << ir_to_sql(c) << "\n";
      std::fprintf(stderr, "attempted=%zu passed=%zu\n", gs.attempted, gs.passed);
    } else if (*inst) {
      IrProgram skeleton = strip_data(parse_or_die(read_input(input)));
      Rng rng(seed);
      if (random_fill) {
        std::cout << fill_randomly(skeleton, rng) << "\n";
      } else {
        RuleSet rules = rules_path.empty() ? default_rules() : load_rules(rules_path);
        InstantiateResult r = retry_instantiate(skeleton, rules, rng);
        if (!r.ok()) {
          std::fprintf(stderr, "instantiation failed: %s\n", std::string(failure_name(*r.failure)).c_str());
          return 1;
        }
        std::cout << *r.sql << "\n";
      }
    } else if (*depgraph) {
      IrProgram skeleton = strip_data(parse_or_die(read_input(input)));
      RuleSet rules = rules_path.empty() ? default_rules() : load_rules(rules_path);
      Rng rng(seed);
      DependencyGraph g = build_dependency_graph(skeleton, rules, rng);
      std::cout << g.edge_list();
    } else if (*cls) {
      CampaignConfig cfg;
      cfg.target = target;
      cfg.target_binary = target_binary;
      cfg.mock_script = mock_script;
      cfg.timeout_ms = timeout_ms;
      auto adapter = make_adapter(cfg);
      ExecutionOutcome out = execute(read_input(input), *adapter, cfg.bitmap_size);
      std::cout << outcome_name(out.cls);
      if (out.unknown_error) std::cout << " (unknown message)";
      if (!out.detail.empty()) std::cout << "\t" << out.detail;
      std::cout << "\n";
    } else if (*stats) {
      return render_stats(stats_dir);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
