#include <gtest/gtest.h>

#include <json.hpp>

#include "oracles.h"
#include "squirrelkit/campaign.h"

namespace sk = squirrelkit;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("squirrelkit_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

sk::CampaignConfig mock_config(const fs::path& out, std::uint64_t execs, std::uint64_t seed = 1) {
  sk::CampaignConfig c;
  c.corpus_dir = oracle::source_dir() / "corpus";
  c.output_dir = out;
  c.target = "mock";
  c.time_budget_s = 1e9;
  c.max_execs = execs;
  c.rng_seed = seed;
  c.bitmap_size = 1 << 16;
  c.stats_interval_s = 1e9;
  return c;
}

std::uint64_t class_sum(const sk::CampaignStats& s) {
  return s.syntax_errors + s.semantic_errors + s.correct + s.crashes + s.timeouts;
}

}  // namespace

TEST(Campaign, ConfigCheck) {
  sk::CampaignConfig c = mock_config("/tmp/x", 10);
  EXPECT_NO_THROW(c.check());
  c.bitmap_size = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(Campaign, MockRunIsDeterministic) {
  auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  sk::run_campaign(mock_config(a, 1500, 7));
  sk::run_campaign(mock_config(b, 1500, 7));
  for (const char* f : {"summary.json", "queue.tsv"})
    EXPECT_EQ(oracle::read_file(a / f), oracle::read_file(b / f)) << f;
  auto c = fresh_dir("det_c");
  sk::run_campaign(mock_config(c, 1500, 8));
  EXPECT_NE(oracle::read_file(a / "queue.tsv"), oracle::read_file(c / "queue.tsv"));
  for (auto d : {a, b, c}) fs::remove_all(d);
}

TEST(Campaign, CountsAreConsistent) {
  auto dir = fresh_dir("counts");
  sk::MockAdapter mock;
  auto s = sk::run_campaign(mock_config(dir, 2000, 3), mock);
  EXPECT_EQ(class_sum(s), s.execs);
  EXPECT_EQ(mock.executions(), s.execs);
  EXPECT_GE(s.execs, 2000u);
  EXPECT_GE(s.syntax_ok(), s.semantic_ok());
  EXPECT_LE(s.unknown_errors, s.semantic_errors);
  EXPECT_EQ(s.corpus_files, oracle::corpus().size());
  EXPECT_LE(s.queue_len, s.execs);
  EXPECT_LE(s.mutations_passed, s.mutations_attempted);

  auto summary = nlohmann::json::parse(oracle::read_file(dir / "summary.json"));
  EXPECT_EQ(summary["execs"].get<std::uint64_t>(), s.execs);
  fs::remove_all(dir);
}

TEST(Campaign, QueueEntriesAreNovelAndMonotone) {
  auto dir = fresh_dir("queue");
  sk::MockAdapter mock;
  sk::Campaign camp(mock_config(dir, 1500, 5), mock);
  camp.run();
  const auto& q = camp.queue();
  ASSERT_FALSE(q.empty());
  for (std::size_t i = 1; i < q.size(); ++i) {
    EXPECT_GT(q[i].id, q[i - 1].id);
    EXPECT_GE(q[i].discovery_exec, q[i - 1].discovery_exec);
  }
  // Replaying every entry in discovery order against an empty global map
  // must find new coverage each time.
  sk::MockAdapter replay;
  sk::CoverageBitmap global(1 << 16);
  std::size_t novel = 0;
  for (const auto& e : q) {
    auto out = sk::execute(e.query_text, replay, 1 << 16);
    EXPECT_NE(out.cls, sk::OutcomeClass::kCrash);
    EXPECT_NE(out.cls, sk::OutcomeClass::kTimeout);
    if (sk::has_new_coverage(out.coverage, global)) ++novel;
  }
  EXPECT_EQ(novel, q.size());
  // Every structured entry re-parses.
  for (const auto& e : q) {
    EXPECT_TRUE(e.structured);
    auto re = sk::sql_to_ir(e.query_text);
    ASSERT_TRUE(std::holds_alternative<sk::IrProgram>(re)) << e.query_text;
    EXPECT_FALSE(e.skeleton().statements.empty());
  }
  fs::remove_all(dir);
}

TEST(Campaign, ZeroBudgetOnlyPrimes) {
  auto dir = fresh_dir("zero");
  auto cfg = mock_config(dir, 0);
  cfg.time_budget_s = 0;
  auto s = sk::run_campaign(cfg);
  EXPECT_EQ(s.execs, s.seed_execs);
  EXPECT_EQ(s.mutations_attempted, 0u);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);
}

TEST(Campaign, SingleSeedLibraryMatchesSubtrees) {
  auto corpus = fresh_dir("one_seed_corpus");
  fs::copy_file(oracle::source_dir() / "corpus/listings/listing1.sql", corpus / "listing1.sql");
  auto dir = fresh_dir("one_seed");
  auto cfg = mock_config(dir, 0);
  cfg.corpus_dir = corpus;
  cfg.time_budget_s = 0;
  sk::MockAdapter mock;
  sk::Campaign camp(cfg, mock);
  camp.run();
  EXPECT_EQ(camp.queue().size(), 1u);
  auto program = std::get<sk::IrProgram>(sk::sql_to_ir(oracle::read_file(corpus / "listing1.sql")));
  EXPECT_EQ(camp.library().size(), oracle::distinct_subtrees(sk::strip_data(program)).size());
  fs::remove_all(dir);
  fs::remove_all(corpus);
}

TEST(Campaign, EmptyCorpusThrows) {
  auto corpus = fresh_dir("empty_corpus");
  auto cfg = mock_config(fresh_dir("empty_out"), 10);
  cfg.corpus_dir = corpus;
  EXPECT_THROW(sk::run_campaign(cfg), std::invalid_argument);
}

TEST(CrashDeduper, OneReproPerSignature) {
  auto dir = fresh_dir("crash");
  sk::MockAdapter mock;
  sk::CrashDeduper d(dir);
  auto a = sk::execute("SELECT 'SQUIRRELKIT_CRASH';", mock, 4096);
  auto b = sk::execute("SELECT 2, 'SQUIRRELKIT_CRASH';", mock, 4096);
  EXPECT_TRUE(d.record("SELECT 'SQUIRRELKIT_CRASH';", a, 0.1, 1));
  EXPECT_FALSE(d.record("SELECT 2, 'SQUIRRELKIT_CRASH';", b, 0.2, 2));
  EXPECT_EQ(d.unique(), 1u);
  auto sig = sk::CrashDeduper::signature_name(a.coverage);
  auto repro = oracle::read_file(dir / "crashes" / sig / "repro.sql");
  EXPECT_EQ(repro, "SELECT 'SQUIRRELKIT_CRASH';");
  EXPECT_EQ(sk::execute(repro, mock, 4096).cls, sk::OutcomeClass::kCrash);
  fs::remove_all(dir);
}

TEST(Havoc, StackZeroReplays) {
  sk::Rng rng(1);
  EXPECT_EQ(sk::havoc("SELECT 1;", {}, 0, rng), "SELECT 1;");
}

TEST(Havoc, MutatesAndIsSeeded) {
  std::string other = "CREATE TABLE t (a);";
  sk::Rng a(3), b(3);
  std::size_t changed = 0;
  for (int i = 0; i < 100; ++i) {
    auto x = sk::havoc("SELECT a FROM t WHERE b = 1;", {&other}, -1, a);
    auto y = sk::havoc("SELECT a FROM t WHERE b = 1;", {&other}, -1, b);
    EXPECT_EQ(x, y);
    EXPECT_LE(x.size(), 1u << 16);
    if (x != "SELECT a FROM t WHERE b = 1;") ++changed;
  }
  EXPECT_GT(changed, 90u);
}

TEST(Campaign, BaselineRunsAndCounts) {
  auto dir = fresh_dir("baseline");
  auto cfg = mock_config(dir, 1000);
  auto s = sk::baseline_havoc_campaign(cfg);
  EXPECT_EQ(class_sum(s), s.execs);
  EXPECT_GT(s.syntax_errors, 0u);
  EXPECT_EQ(s.mutations_attempted, 0u);
  fs::remove_all(dir);
}

TEST(Campaign, NoInstantiateModeRuns) {
  auto dir = fresh_dir("noinst");
  auto cfg = mock_config(dir, 1000);
  cfg.mode = sk::CampaignMode::kNoInstantiate;
  auto s = sk::run_campaign(cfg);
  EXPECT_EQ(class_sum(s), s.execs);
  EXPECT_GT(s.mutations_passed, 0u);
  fs::remove_all(dir);
}

TEST(Campaign, ResumeContinuesFromState) {
  auto dir = fresh_dir("resume");
  auto first = sk::run_campaign(mock_config(dir, 800, 2));
  ASSERT_TRUE(fs::exists(dir / "state.json"));
  auto cfg = mock_config(dir, 1600, 2);
  cfg.resume = true;
  auto second = sk::run_campaign(cfg);
  EXPECT_GE(second.execs, 1600u);
  EXPECT_EQ(second.seed_execs, first.seed_execs);
  EXPECT_GE(second.queue_len, first.queue_len);
  EXPECT_GE(second.global_edges, first.global_edges);
  EXPECT_EQ(class_sum(second), second.execs);
  fs::remove_all(dir);
}

TEST(Campaign, DropInvalidNoveltyKeepsSyntaxErrorsOut) {
  auto dir = fresh_dir("drop_invalid");
  auto cfg = mock_config(dir, 1000);
  cfg.mode = sk::CampaignMode::kBaseline;
  cfg.drop_invalid_novelty = true;
  sk::MockAdapter mock;
  sk::Campaign camp(cfg, mock);
  camp.run();
  for (const auto& e : camp.queue()) EXPECT_NE(e.cls, sk::OutcomeClass::kSyntaxError) << e.query_text;
  fs::remove_all(dir);
}
