#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "squirrelkit/adapter.h"
#include "squirrelkit/coverage.h"
#include "squirrelkit/instantiator.h"
#include "squirrelkit/ir.h"
#include "squirrelkit/library.h"
#include "squirrelkit/mutator.h"
#include "squirrelkit/rng.h"

namespace squirrelkit {

enum class CampaignMode {
  kFull,           // mutate skeletons, instantiate with the dependency graph
  kNoInstantiate,  // mutate skeletons, fill data randomly
  kBaseline,       // byte-level havoc on query text
};

std::string_view mode_name(CampaignMode mode);

struct CampaignConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path output_dir;
  std::string target = "instrumented-sqlite";  // or "mock"
  std::filesystem::path target_binary;           // empty: default_target_binary()
  std::filesystem::path mock_script;             // optional, mock only
  double time_budget_s = 60.0;
  std::uint64_t max_execs = 0;  // 0: no execution cap
  std::uint64_t rng_seed = 0;
  std::size_t bitmap_size = kDefaultBitmapSize;
  int timeout_ms = 2000;
  MutationConfig mutation;
  std::filesystem::path rules_path;  // empty: built-in rules
  std::size_t library_cap = IrLibrary::kDefaultCap;
  bool drop_invalid_novelty = false;
  CampaignMode mode = CampaignMode::kFull;
  bool resume = false;
  double stats_interval_s = 5.0;
  // Havoc stack size: negative draws 2^k with k in [1, 7]; 0 replays inputs.
  int havoc_stack = -1;
  bool quiet = true;

  void check() const;
};

struct CampaignStats {
  double elapsed_s = 0.0;
  std::uint64_t execs = 0;
  std::uint64_t seed_execs = 0;
  std::uint64_t syntax_errors = 0;
  std::uint64_t semantic_errors = 0;
  std::uint64_t unknown_errors = 0;  // subset of semantic_errors
  std::uint64_t correct = 0;
  std::uint64_t crashes = 0;
  std::uint64_t crashes_unique = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t global_edges = 0;
  std::uint64_t queue_len = 0;
  std::uint64_t library_entries = 0;
  std::uint64_t corpus_files = 0;
  std::uint64_t corpus_rejected = 0;
  std::uint64_t mutations_attempted = 0;
  std::uint64_t mutations_passed = 0;
  std::uint64_t instantiate_failures = 0;

  std::uint64_t syntax_ok() const { return semantic_errors + correct; }
  std::uint64_t semantic_ok() const { return correct; }
  double execs_per_s() const { return elapsed_s > 0 ? static_cast<double>(execs) / elapsed_s : 0.0; }
};

struct QueueEntry {
  std::uint64_t id = 0;
  std::string query_text;
  bool structured = false;  // false in baseline mode
  std::uint64_t discovery_exec = 0;
  double discovery_time_s = 0.0;
  std::uint64_t exec_count = 0;
  std::optional<std::uint64_t> parent_id;
  OutcomeClass cls = OutcomeClass::kCorrect;

  // Stripped IR of query_text. Recomputed on demand so the queue only holds text.
  IrProgram skeleton() const;
};

// Runs one query through the adapter and classifies it.
ExecutionOutcome execute(const std::string& query, Adapter& adapter, std::size_t bitmap_size);

std::unique_ptr<Adapter> make_adapter(const CampaignConfig& config);

// Remembers crash signatures and writes crashes/<signature>/{repro.sql,meta.json}.
class CrashDeduper {
 public:
  explicit CrashDeduper(std::filesystem::path output_dir) : dir_(std::move(output_dir)) {}

  // True iff the signature is new; only then is a reproducer written.
  bool record(const std::string& query, const ExecutionOutcome& outcome, double elapsed_s, std::uint64_t exec);
  std::size_t unique() const { return seen_.size(); }
  // Marks a signature as already seen (used on resume).
  void preload(const std::string& signature) { seen_.emplace(signature, 0); }
  static std::string signature_name(const CoverageBitmap& coverage);

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::uint64_t> seen_;
};

// Byte-level havoc: bit flips, byte substitutions, block deletion and
// duplication, and splices with another input.
std::string havoc(const std::string& input, const std::vector<const std::string*>& others, int stack, Rng& rng);

class Campaign {
 public:
  // The adapter must outlive the campaign.
  Campaign(CampaignConfig config, Adapter& adapter);

  // Ingests the corpus (or the saved state when resuming).
  void prime();
  // One scheduling round: picks an entry and runs its candidates. Returns
  // false once the budget is exhausted.
  bool step();
  // prime() then step() until done; writes all outputs.
  CampaignStats run();

  const CampaignStats& stats() const { return stats_; }
  const std::vector<QueueEntry>& queue() const { return queue_; }
  const IrLibrary& library() const { return library_; }
  const CoverageBitmap& global_map() const { return global_; }

  void write_outputs();

 private:
  bool budget_left() const;
  double elapsed() const;
  // Executes, classifies and updates the queue. Returns the outcome.
  OutcomeClass run_candidate(const std::string& query, const IrProgram* skeleton, std::optional<std::uint64_t> parent,
                             bool seed);
  std::size_t pick();
  void emit_stats_line();
  void load_state();
  std::string queue_listing() const;

  CampaignConfig config_;
  Adapter& adapter_;
  Rng rng_;
  IrLibrary library_;
  RuleSet rules_;
  CoverageBitmap global_;
  CrashDeduper crashes_;
  std::vector<QueueEntry> queue_;
  CampaignStats stats_;
  std::size_t cursor_ = 0;
  bool revisit_ = false;
  std::uint64_t next_id_ = 0;
  double start_ = 0.0;
  double last_stats_ = 0.0;
  double elapsed_offset_ = 0.0;
  std::unique_ptr<std::ofstream> stats_stream_;
};

CampaignStats run_campaign(const CampaignConfig& config);
CampaignStats run_campaign(const CampaignConfig& config, Adapter& adapter);
CampaignStats baseline_havoc_campaign(CampaignConfig config);
CampaignStats baseline_havoc_campaign(CampaignConfig config, Adapter& adapter);

// summary.json contents for a finished campaign.
std::string summary_json(const CampaignStats& stats, const CampaignConfig& config);

}  // namespace squirrelkit
