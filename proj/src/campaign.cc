#include "squirrelkit/campaign.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace squirrelkit {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view mode_name(CampaignMode mode) {
  switch (mode) {
    case CampaignMode::kFull: return "full";
    case CampaignMode::kNoInstantiate: return "no-instantiate";
    case CampaignMode::kBaseline: return "baseline";
  }
  return "?";
}

void CampaignConfig::check() const {
  if (!resume && !fs::is_directory(corpus_dir)) throw std::invalid_argument("corpus directory not found: " + corpus_dir.string());
  if (output_dir.empty()) throw std::invalid_argument("output directory is required");
  if (time_budget_s < 0) throw std::invalid_argument("time budget must be non-negative");
  if (bitmap_size == 0) throw std::invalid_argument("bitmap size must be positive");
  if (timeout_ms <= 0) throw std::invalid_argument("timeout must be positive");
  if (target != "instrumented-sqlite" && target != "mock") throw std::invalid_argument("unknown target adapter: " + target);
  if (library_cap == 0) throw std::invalid_argument("library cap must be positive");
  if (stats_interval_s <= 0) throw std::invalid_argument("stats interval must be positive");
  mutation.check();
}

IrProgram QueueEntry::skeleton() const {
  if (!structured) return {};
  auto parsed = sql_to_ir(query_text);
  auto* program = std::get_if<IrProgram>(&parsed);
  return program ? strip_data(*program) : IrProgram{};
}

ExecutionOutcome execute(const std::string& query, Adapter& adapter, std::size_t bitmap_size) {
  ExecutionOutcome out;
  out.coverage = CoverageBitmap(bitmap_size);
  RawResult raw = adapter.run(query, out.coverage);
  out.cls = classify(raw, &out.unknown_error, &out.detail);
  return out;
}

std::unique_ptr<Adapter> make_adapter(const CampaignConfig& config) {
  if (config.target == "mock") {
    if (!config.mock_script.empty()) return std::make_unique<MockAdapter>(MockAdapter::from_file(config.mock_script));
    return std::make_unique<MockAdapter>();
  }
  if (config.target == "instrumented-sqlite") {
    fs::path bin = config.target_binary.empty() ? default_target_binary() : config.target_binary;
    return std::make_unique<InstrumentedSqliteAdapter>(bin, config.bitmap_size, config.timeout_ms);
  }
  throw std::invalid_argument("unknown target adapter: " + config.target);
}

// ---------------------------------------------------------------------------

std::string CrashDeduper::signature_name(const CoverageBitmap& coverage) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(coverage_signature(coverage)));
  return buf;
}

bool CrashDeduper::record(const std::string& query, const ExecutionOutcome& outcome, double elapsed_s,
                          std::uint64_t exec) {
  std::string sig = signature_name(outcome.coverage);
  auto [it, fresh] = seen_.emplace(sig, exec);
  if (!fresh) return false;
  fs::path dir = dir_ / "crashes" / sig;
  fs::create_directories(dir);
  std::ofstream(dir / "repro.sql", std::ios::binary) << query;
  json meta = {{"signature", sig},
               {"class", std::string(outcome_name(outcome.cls))},
               {"detail", outcome.detail},
               {"discovery_exec", exec},
               {"discovery_time_s", elapsed_s}};
  std::ofstream(dir / "meta.json") << meta.dump(2) << "\n";
  return true;
}

// ---------------------------------------------------------------------------

std::string havoc(const std::string& input, const std::vector<const std::string*>& others, int stack, Rng& rng) {
  static constexpr std::string_view kInteresting = " '\"();,.*=0123456789-+";
  constexpr std::size_t kMaxLen = 1 << 16;
  if (stack == 0) return input;
  int n = stack < 0 ? 1 << (1 + rng.below(7)) : stack;
  std::string s = input;
  for (int i = 0; i < n; ++i) {
    switch (rng.below(6)) {
      case 0:
        if (!s.empty()) s[rng.below(s.size())] ^= static_cast<char>(1u << rng.below(8));
        break;
      case 1:
        if (!s.empty()) s[rng.below(s.size())] = kInteresting[rng.below(kInteresting.size())];
        break;
      case 2:
        if (!s.empty()) s[rng.below(s.size())] = static_cast<char>(0x20 + rng.below(0x5f));
        break;
      case 3:
        if (s.size() > 1) {
          std::size_t len = 1 + rng.below(std::min<std::size_t>(s.size() - 1, 32));
          s.erase(rng.below(s.size() - len + 1), len);
        }
        break;
      case 4:
        if (!s.empty() && s.size() < kMaxLen) {
          std::size_t len = 1 + rng.below(std::min<std::size_t>(s.size(), 32));
          std::string block = s.substr(rng.below(s.size() - len + 1), len);
          s.insert(rng.below(s.size() + 1), block);
        }
        break;
      case 5:
        if (!others.empty()) {
          const std::string& o = *others[rng.below(others.size())];
          if (!o.empty()) s = s.substr(0, rng.below(s.size() + 1)) + o.substr(rng.below(o.size()));
        }
        break;
    }
  }
  if (s.size() > kMaxLen) s.resize(kMaxLen);
  return s;
}

// ---------------------------------------------------------------------------

namespace {

double now_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json stats_json(const CampaignStats& s) {
  return {{"execs", s.execs},
          {"seed_execs", s.seed_execs},
          {"syntax_errors", s.syntax_errors},
          {"semantic_errors", s.semantic_errors},
          {"unknown_errors", s.unknown_errors},
          {"correct", s.correct},
          {"crashes", s.crashes},
          {"crashes_unique", s.crashes_unique},
          {"timeouts", s.timeouts},
          {"global_edges", s.global_edges},
          {"queue_len", s.queue_len},
          {"library_entries", s.library_entries},
          {"corpus_files", s.corpus_files},
          {"corpus_rejected", s.corpus_rejected},
          {"mutations_attempted", s.mutations_attempted},
          {"mutations_passed", s.mutations_passed},
          {"instantiate_failures", s.instantiate_failures}};
}

void stats_from_json(const json& j, CampaignStats& s) {
  s.execs = j.value("execs", 0ull);
  s.seed_execs = j.value("seed_execs", 0ull);
  s.syntax_errors = j.value("syntax_errors", 0ull);
  s.semantic_errors = j.value("semantic_errors", 0ull);
  s.unknown_errors = j.value("unknown_errors", 0ull);
  s.correct = j.value("correct", 0ull);
  s.crashes = j.value("crashes", 0ull);
  s.crashes_unique = j.value("crashes_unique", 0ull);
  s.timeouts = j.value("timeouts", 0ull);
  s.corpus_files = j.value("corpus_files", 0ull);
  s.corpus_rejected = j.value("corpus_rejected", 0ull);
  s.mutations_attempted = j.value("mutations_attempted", 0ull);
  s.mutations_passed = j.value("mutations_passed", 0ull);
  s.instantiate_failures = j.value("instantiate_failures", 0ull);
}

double ratio(std::uint64_t a, std::uint64_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

}  // namespace

std::string summary_json(const CampaignStats& stats, const CampaignConfig& config) {
  json j = stats_json(stats);
  j["mode"] = std::string(mode_name(config.mode));
  j["target"] = config.target;
  j["seed"] = config.rng_seed;
  j["syntax_ok"] = stats.syntax_ok();
  j["semantic_ok"] = stats.semantic_ok();
  j["syntax_correct_rate"] = ratio(stats.syntax_ok(), stats.execs);
  j["semantic_correct_rate"] = ratio(stats.semantic_ok(), stats.execs);
  j["mutation_pass_rate"] = ratio(stats.mutations_passed, stats.mutations_attempted);
  return j.dump(2) + "\n";
}

Campaign::Campaign(CampaignConfig config, Adapter& adapter)
    : config_(std::move(config)),
      adapter_(adapter),
      rng_(config_.rng_seed),
      library_(config_.library_cap, config_.rng_seed ^ 0x5bd1e995ULL),
      rules_(config_.rules_path.empty() ? default_rules() : load_rules(config_.rules_path)),
      global_(config_.bitmap_size),
      crashes_(config_.output_dir) {
  config_.check();
  fs::create_directories(config_.output_dir);
  start_ = now_s();
  last_stats_ = start_;
}

double Campaign::elapsed() const { return elapsed_offset_ + (now_s() - start_); }

bool Campaign::budget_left() const {
  if (config_.max_execs && stats_.execs >= config_.max_execs) return false;
  return elapsed() < config_.time_budget_s;
}

OutcomeClass Campaign::run_candidate(const std::string& query, const IrProgram* skeleton,
                                     std::optional<std::uint64_t> parent, bool seed) {
  ExecutionOutcome out = execute(query, adapter_, config_.bitmap_size);
  ++stats_.execs;
  if (seed) ++stats_.seed_execs;
  switch (out.cls) {
    case OutcomeClass::kSyntaxError: ++stats_.syntax_errors; break;
    case OutcomeClass::kSemanticError:
      ++stats_.semantic_errors;
      if (out.unknown_error) ++stats_.unknown_errors;
      break;
    case OutcomeClass::kCorrect: ++stats_.correct; break;
    case OutcomeClass::kCrash:
      ++stats_.crashes;
      if (crashes_.record(query, out, elapsed(), stats_.execs)) ++stats_.crashes_unique;
      return out.cls;
    case OutcomeClass::kTimeout: ++stats_.timeouts; return out.cls;
  }

  bool novel = false;
  if (!(config_.drop_invalid_novelty && out.cls == OutcomeClass::kSyntaxError))
    novel = has_new_coverage(out.coverage, global_);
  // The first seed always enters so the queue is never empty.
  if (!novel && !(seed && queue_.empty())) return out.cls;

  QueueEntry e;
  e.id = next_id_++;
  e.query_text = query;
  e.structured = skeleton != nullptr;
  e.discovery_exec = stats_.execs;
  e.discovery_time_s = elapsed();
  e.parent_id = parent;
  e.cls = out.cls;
  if (skeleton && !seed) library_.insert(*skeleton);
  queue_.push_back(std::move(e));
  return out.cls;
}

void Campaign::prime() {
  if (config_.resume && fs::exists(config_.output_dir / "state.json")) {
    load_state();
    return;
  }
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(config_.corpus_dir))
    if (de.is_regular_file() && de.path().extension() == ".sql") files.push_back(de.path());
  std::sort(files.begin(), files.end());
  stats_.corpus_files = files.size();

  struct Seed {
    std::string text;
    IrProgram skeleton;
  };
  std::vector<Seed> seeds;
  for (const auto& f : files) {
    std::string text = read_file(f);
    auto parsed = sql_to_ir(text);
    auto* program = std::get_if<IrProgram>(&parsed);
    if (!program || program->statements.empty()) {
      ++stats_.corpus_rejected;
      continue;
    }
    Seed s{std::move(text), strip_data(*program)};
    library_.insert(s.skeleton);
    seeds.push_back(std::move(s));
  }
  if (seeds.empty()) throw std::invalid_argument("corpus has no parseable queries: " + config_.corpus_dir.string());
  for (const auto& s : seeds) {
    if (config_.max_execs && stats_.execs >= config_.max_execs) break;
    run_candidate(s.text, config_.mode == CampaignMode::kBaseline ? nullptr : &s.skeleton, std::nullopt, true);
  }
}

std::size_t Campaign::pick() {
  std::size_t idx = cursor_ % queue_.size();
  // Entries found during the latest tenth of the run are visited twice.
  bool recent = queue_[idx].discovery_exec * 10 >= stats_.execs * 9;
  if (recent && !revisit_) {
    revisit_ = true;
    return idx;
  }
  revisit_ = false;
  ++cursor_;
  return idx;
}

bool Campaign::step() {
  if (!budget_left() || queue_.empty()) return false;
  std::size_t idx = pick();
  QueueEntry& entry = queue_[idx];
  ++entry.exec_count;
  const std::uint64_t parent = entry.id;

  if (config_.mode == CampaignMode::kBaseline) {
    std::vector<const std::string*> others;
    for (const auto& q : queue_)
      if (q.id != parent) others.push_back(&q.query_text);
    std::vector<std::string> candidates;
    for (std::size_t i = 0; i < config_.mutation.max_candidates_per_input; ++i)
      candidates.push_back(havoc(entry.query_text, others, config_.havoc_stack, rng_));
    for (const auto& c : candidates) {
      if (!budget_left()) break;
      run_candidate(c, nullptr, parent, false);
    }
  } else {
    GenerateStats gs;
    std::vector<IrProgram> candidates = generate(entry.skeleton(), library_, config_.mutation, rng_, &gs);
    stats_.mutations_attempted += gs.attempted;
    stats_.mutations_passed += gs.passed;
    for (const auto& c : candidates) {
      if (!budget_left()) break;
      std::string query;
      if (config_.mode == CampaignMode::kFull) {
        InstantiateResult r = retry_instantiate(c, rules_, rng_);
        if (!r.ok()) {
          ++stats_.instantiate_failures;
          continue;
        }
        query = std::move(*r.sql);
      } else {
        query = fill_randomly(c, rng_);
      }
      run_candidate(query, &c, parent, false);
    }
  }

  if (now_s() - last_stats_ >= config_.stats_interval_s) emit_stats_line();
  return true;
}

void Campaign::emit_stats_line() {
  last_stats_ = now_s();
  stats_.elapsed_s = elapsed();
  stats_.global_edges = global_.count_nonzero();
  stats_.queue_len = queue_.size();
  stats_.library_entries = config_.mode == CampaignMode::kBaseline ? 0 : library_.size();
  if (!stats_stream_) {
    auto mode = config_.resume ? std::ios::app : std::ios::trunc;
    stats_stream_ = std::make_unique<std::ofstream>(config_.output_dir / "stats.jsonl", std::ios::out | mode);
  }
  json j = {{"elapsed_s", stats_.elapsed_s},     {"execs", stats_.execs},
            {"execs_per_s", stats_.execs_per_s()}, {"global_edges", stats_.global_edges},
            {"queue_len", stats_.queue_len},     {"library_entries", stats_.library_entries},
            {"syntax_ok", stats_.syntax_ok()},   {"semantic_ok", stats_.semantic_ok()},
            {"correct", stats_.correct},         {"crashes_unique", stats_.crashes_unique},
            {"timeouts", stats_.timeouts}};
  *stats_stream_ << j.dump() << "\n";
  stats_stream_->flush();
  if (!config_.quiet) std::fprintf(stderr, "%s\n", j.dump().c_str());
}

std::string Campaign::queue_listing() const {
  std::string out = "id\tparent\tdiscovery_exec\texec_count\tclass\tfile\n";
  for (const auto& e : queue_) {
    out += std::to_string(e.id) + "\t" + (e.parent_id ? std::to_string(*e.parent_id) : "-") + "\t" +
           std::to_string(e.discovery_exec) + "\t" + std::to_string(e.exec_count) + "\t" +
           std::string(outcome_name(e.cls)) + "\tqueue/" + std::to_string(e.id) + ".sql\n";
  }
  return out;
}

void Campaign::write_outputs() {
  emit_stats_line();
  const fs::path& out = config_.output_dir;
  fs::create_directories(out / "queue");
  for (const auto& e : queue_) {
    std::ofstream(out / "queue" / (std::to_string(e.id) + ".sql"), std::ios::binary) << e.query_text;
    if (!e.structured) continue;
    IrProgram skel = e.skeleton();
    std::ofstream sk(out / "queue" / (std::to_string(e.id) + ".skel.jsonl"));
    for (const auto& st : skel.statements) sk << serialize_ir(*st) << "\n";
  }
  std::ofstream(out / "queue.tsv") << queue_listing();
  std::ofstream(out / "summary.json") << summary_json(stats_, config_);
  if (config_.mode != CampaignMode::kBaseline) library_.save(out);

  std::ofstream(out / "global_map.bin", std::ios::binary)
      .write(reinterpret_cast<const char*>(global_.data()), static_cast<std::streamsize>(global_.size()));
  std::ostringstream rng_state;
  rng_state << rng_.engine();
  json state = {{"stats", stats_json(stats_)},
                {"next_id", next_id_},
                {"cursor", cursor_},
                {"revisit", revisit_},
                {"elapsed_s", stats_.elapsed_s},
                {"rng", rng_state.str()},
                {"mode", std::string(mode_name(config_.mode))},
                {"bitmap_size", config_.bitmap_size}};
  json queue = json::array();
  for (const auto& e : queue_)
    queue.push_back({{"id", e.id},
                     {"parent", e.parent_id ? json(*e.parent_id) : json(nullptr)},
                     {"discovery_exec", e.discovery_exec},
                     {"discovery_time_s", e.discovery_time_s},
                     {"exec_count", e.exec_count},
                     {"class", std::string(outcome_name(e.cls))}});
  state["queue"] = queue;
  json crashes = json::array();
  for (const auto& de : fs::exists(out / "crashes") ? fs::directory_iterator(out / "crashes") : fs::directory_iterator())
    crashes.push_back(de.path().filename().string());
  std::sort(crashes.begin(), crashes.end());
  state["crashes"] = crashes;
  std::ofstream(out / "state.json") << state.dump(2) << "\n";
}

void Campaign::load_state() {
  const fs::path& out = config_.output_dir;
  json state = json::parse(read_file(out / "state.json"));
  if (state.value("bitmap_size", std::size_t{0}) != config_.bitmap_size)
    throw std::invalid_argument("resume: bitmap size differs from the saved campaign");
  stats_from_json(state["stats"], stats_);
  next_id_ = state["next_id"];
  cursor_ = state["cursor"];
  revisit_ = state["revisit"];
  elapsed_offset_ = state["elapsed_s"];
  std::istringstream rng_state(state["rng"].get<std::string>());
  rng_state >> rng_.engine();

  std::string map = read_file(out / "global_map.bin");
  if (map.size() != global_.size()) throw std::invalid_argument("resume: global map has the wrong length");
  std::copy(map.begin(), map.end(), global_.data());

  if (config_.mode != CampaignMode::kBaseline && fs::exists(out / "library"))
    library_ = IrLibrary::load(out, config_.library_cap, config_.rng_seed ^ 0x5bd1e995ULL);

  auto class_from = [](const std::string& s) {
    for (auto c : {OutcomeClass::kSyntaxError, OutcomeClass::kSemanticError, OutcomeClass::kCorrect,
                   OutcomeClass::kCrash, OutcomeClass::kTimeout})
      if (outcome_name(c) == s) return c;
    return OutcomeClass::kCorrect;
  };
  for (const auto& q : state["queue"]) {
    QueueEntry e;
    e.id = q["id"];
    if (!q["parent"].is_null()) e.parent_id = q["parent"].get<std::uint64_t>();
    e.discovery_exec = q["discovery_exec"];
    e.discovery_time_s = q["discovery_time_s"];
    e.exec_count = q["exec_count"];
    e.cls = class_from(q["class"]);
    e.query_text = read_file(out / "queue" / (std::to_string(e.id) + ".sql"));
    fs::path skel = out / "queue" / (std::to_string(e.id) + ".skel.jsonl");
    e.structured = fs::exists(skel);
    queue_.push_back(std::move(e));
  }
  for (const auto& sig : state["crashes"]) crashes_.preload(sig.get<std::string>());
}

CampaignStats Campaign::run() {
  try {
    prime();
    while (step()) {
    }
  } catch (const AdapterError&) {
    write_outputs();
    throw;
  }
  write_outputs();
  return stats_;
}

CampaignStats run_campaign(const CampaignConfig& config, Adapter& adapter) {
  Campaign c(config, adapter);
  return c.run();
}

CampaignStats run_campaign(const CampaignConfig& config) {
  config.check();
  auto adapter = make_adapter(config);
  return run_campaign(config, *adapter);
}

CampaignStats baseline_havoc_campaign(CampaignConfig config, Adapter& adapter) {
  config.mode = CampaignMode::kBaseline;
  return run_campaign(config, adapter);
}

CampaignStats baseline_havoc_campaign(CampaignConfig config) {
  config.mode = CampaignMode::kBaseline;
  return run_campaign(config);
}

}  // namespace squirrelkit
