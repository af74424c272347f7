#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "squirrelkit/coverage.h"

namespace squirrelkit {

enum class OutcomeClass { kSyntaxError, kSemanticError, kCorrect, kCrash, kTimeout };

std::string_view outcome_name(OutcomeClass c);

// What the target process reported for one query.
struct RawResult {
  bool timed_out = false;
  int signal = 0;     // terminating signal, 0 if it exited
  int exit_code = 0;  // exit status when signal == 0
  // One entry per executed statement: empty for success, else the message.
  std::vector<std::string> errors;
};

struct ExecutionOutcome {
  OutcomeClass cls = OutcomeClass::kCorrect;
  // An error message matched no pattern; cls is then kSemanticError.
  bool unknown_error = false;
  std::string detail;
  CoverageBitmap coverage;
};

class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MessageClass { kSyntax, kSemantic, kRuntime, kUnknown };

// Pattern table derived by probing the SQLite target with known-bad inputs.
MessageClass classify_message(std::string_view message);

// Crash and timeout first, then syntax, then semantic, else correct.
OutcomeClass classify(const RawResult& result, bool* unknown_error = nullptr, std::string* detail = nullptr);

class Adapter {
 public:
  virtual ~Adapter() = default;
  // Runs the query against a fresh database. Coverage must be sized by the
  // caller; it is cleared and filled by the adapter.
  virtual RawResult run(const std::string& query, CoverageBitmap& coverage) = 0;
  virtual std::string name() const = 0;
};

// One target process per query; the edge map is shared through a file whose
// path and length are passed in SQUIRRELKIT_COV_PATH / SQUIRRELKIT_COV_LEN.
class InstrumentedSqliteAdapter : public Adapter {
 public:
  InstrumentedSqliteAdapter(std::filesystem::path binary, std::size_t map_size, int timeout_ms);
  ~InstrumentedSqliteAdapter() override;
  InstrumentedSqliteAdapter(const InstrumentedSqliteAdapter&) = delete;
  InstrumentedSqliteAdapter& operator=(const InstrumentedSqliteAdapter&) = delete;

  RawResult run(const std::string& query, CoverageBitmap& coverage) override;
  std::string name() const override { return "instrumented-sqlite"; }

 private:
  std::filesystem::path binary_;
  std::size_t map_size_;
  int timeout_ms_;
  std::string map_path_;
  std::uint8_t* map_ = nullptr;
};

// Deterministic stand-in for a target. Script lines are
//   <ECMAScript regex> TAB <syntax|semantic|correct|crash|timeout> [TAB detail]
// and the first line whose regex matches the query decides the result.
// Unscripted queries are judged by the built-in parser (syntax error or
// correct). Any query containing the crash token crashes with SIGSEGV and a
// fixed coverage signature. Coverage is derived from the query's structure.
class MockAdapter : public Adapter {
 public:
  struct Rule {
    std::regex pattern;
    OutcomeClass cls;
    std::string detail;
  };

  MockAdapter() = default;
  explicit MockAdapter(std::string_view script, std::string crash_token = "SQUIRRELKIT_CRASH");
  static MockAdapter from_file(const std::filesystem::path& path);

  RawResult run(const std::string& query, CoverageBitmap& coverage) override;
  std::string name() const override { return "mock"; }

  std::size_t executions() const { return executions_; }

 private:
  std::vector<Rule> rules_;
  std::string crash_token_ = "SQUIRRELKIT_CRASH";
  std::size_t executions_ = 0;
};

// Path of the instrumented target built alongside this library.
std::filesystem::path default_target_binary();

}  // namespace squirrelkit
