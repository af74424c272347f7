#include "squirrelkit/adapter.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/mman.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "squirrelkit/grammar.h"
#include "squirrelkit/ir.h"

extern char** environ;

namespace squirrelkit {

std::string_view outcome_name(OutcomeClass c) {
  switch (c) {
    case OutcomeClass::kSyntaxError: return "syntax_error";
    case OutcomeClass::kSemanticError: return "semantic_error";
    case OutcomeClass::kCorrect: return "correct";
    case OutcomeClass::kCrash: return "crash";
    case OutcomeClass::kTimeout: return "timeout";
  }
  return "?";
}

namespace {

std::regex join_patterns(std::initializer_list<const char*> parts) {
  std::string all;
  for (const char* p : parts) {
    if (!all.empty()) all += '|';
    all += "(?:";
    all += p;
    all += ')';
  }
  return std::regex(all, std::regex::ECMAScript | std::regex::optimize);
}

// Messages produced while the statement is still being parsed.
const std::regex& syntax_patterns() {
  static const std::regex re = join_patterns({
      R"(^near ".*": syntax error$)",
      R"(^unrecognized token: )",
      R"(^incomplete input$)",
      R"(^parser stack overflow$)",
      R"(^(ORDER BY|LIMIT) clause should come after \w+( \w+)? not before$)",
      R"(^unknown or unsupported join type: )",
      R"(^a NATURAL join may not have an ON or USING clause$)",
      R"(^at most \d+ tables in a join$)",
      R"(^too many terms in compound SELECT$)",
      R"(^Expression tree is too large)",
      R"(^the \S+ clause is not allowed)",
      R"(^unknown table option: )",
      R"(^syntax error after column name)",
  });
  return re;
}

// Failures while resolving names, types and shapes against the schema.
const std::regex& semantic_patterns() {
  static const std::regex re = join_patterns({
      R"(^no such (table|column|function|index|module|view|trigger|collation sequence|savepoint|window): )",
      R"(^(table|index|view|trigger) \S+ already exists$)",
      R"(^there is already (another table|an index|a table) )",
      R"(^ambiguous column name: )",
      R"(^wrong number of arguments to function )",
      R"(^misuse of (aggregate|window function|aliased aggregate|aliased window function))",
      R"(^(SELECTs to the left and right of \w+( \w+)?|all VALUES must have the same number of terms))",
      R"(^table \S+ has \d+ columns but \d+ values were supplied$)",
      R"(^\d+ values for \d+ columns$)",
      R"(^\d+(st|nd|rd|th) (ORDER|GROUP) BY term out of range)",
      R"(^(ORDER|GROUP) BY term out of range)",
      R"(^Too (few|many) columns for an rtree table$)",
      R"(^duplicate (column name|WITH table name): )",
      R"(^table "\S+" has more than one primary key$)",
      R"(^sub-select returns \d+ columns - expected \d+$)",
      R"(^no tables specified$)",
      R"(^cannot join using column )",
      R"(^must have at least one non-generated column$)",
      R"(^default value of column \S+ is not constant$)",
      R"(^expressions prohibited in PRIMARY KEY and UNIQUE constraints$)",
      R"(^view \S+ is circularly defined$)",
      R"(^object name reserved for internal use: )",
      R"(^(aggregate|window) functions are not allowed in )",
      R"(^(misuse of|cannot use) window function)",
      R"(^row value misused$)",
      R"(^too many columns )",
      R"(^hex literal too big: )",
      R"(^expected \d+ columns for '\S+' but got \d+$)",
      R"(^table \S+ may not be (modified|dropped|altered|indexed))",
      R"(^cannot (modify|create|drop|use|add|alter|start|commit|rollback|release|store|open|VACUUM|INSERT|UPDATE|DELETE|ATTACH|DETACH) )",
      R"(^(DISTINCT|ORDER BY) .* must have exactly one argument)",
      R"(^only a single result allowed for a SELECT that is part of an expression$)",
      R"(^RAISE\(\) may only be used within a trigger-program$)",
      R"(^unknown database )",
      R"(^index associated with UNIQUE or PRIMARY KEY constraint cannot be dropped$)",
      R"(^generated columns cannot be part of the PRIMARY KEY$)",
      R"(^unsupported use of NULLS )",
      R"(^(UNIQUE|PRIMARY KEY) constraint on generated column)",
      R"(^.* is not a function$)",
      R"(^\S+ is a view$)",
      R"(^number of columns in foreign key does not match)",
      R"(^foreign key on \S+ should reference only one column)",
      R"(^AUTOINCREMENT is only allowed on an INTEGER PRIMARY KEY$)",
      R"(^(first|second|third|\S+) argument to \S+\(\) must be )",
      R"(^(the|a) .* (must|may) (be|not) )",
      R"(^parameters are not allowed in views$)",
      R"(^temporary trigger may not have qualified name$)",
      R"(^(non-deterministic|unsafe use of) )",
      R"(^(virtual )?tables? may not )",
      R"(^(ON|USING) clause)",
      R"(^circular reference: )",
      R"(^recursive reference in a subquery: )",
      R"(^multiple (recursive references|references to recursive table): )",
      R"(^(only|no) .* (is|are) allowed)",
      R"(^generated column loop on )",
      R"(^error in generated column )",
      R"( prohibited in )",
      R"(^Cannot add a (UNIQUE|PRIMARY KEY|NOT NULL|REFERENCES) column)",
      R"(^Cannot add a column )",
      R"(^ON CONFLICT clause does not match any PRIMARY KEY or UNIQUE constraint$)",
      R"(^parse error in )",
      R"(^error in (table|view|trigger|index) \S+ after )",
      R"(\(\) may not be used as a window function$)",
      R"(^Wrong number of columns for an rtree table$)",
      R"(^(missing|unknown) datatype for )",
      R"(^unknown column "\S+" in foreign key definition$)",
      R"(^\S+ may not be used with )",
      R"(^(FILTER|DISTINCT) clause may only be used with )",
      R"(^(RANGE|frame) )",
  });
  return re;
}

// Errors raised while the prepared statement runs.
const std::regex& runtime_patterns() {
  static const std::regex re = join_patterns({
      R"(constraint failed)",
      R"(^datatype mismatch$)",
      R"(^malformed JSON$)",
      R"(^JSON (cannot hold BLOB values|path error)|^bad JSON path)",
      R"(^integer overflow$)",
      R"(^(string or blob|result|row value) too big$)",
      R"(^out of memory$)",
      R"(^interrupted$)",
      R"(^database (table )?is locked)",
      R"(^attempt to write a readonly database$)",
      R"(^(abort|aborted) )",
      R"(^too many levels of trigger recursion$)",
      R"(^(argument|parameter) .* out of range)",
      R"(^(FOREIGN KEY|NOT NULL|CHECK|UNIQUE|PRIMARY KEY) )",
      R"(^(invalid|illegal) )",
      R"(^unable to )",
      R"(^(x|y|width|precision) ?\S* out of range)",
      R"(^.* out of range$)",
      R"(^(N|n)o such rowid)",
      R"(^database disk image is malformed$)",
      R"(^query aborted$)",
      R"(^[a-z_]+\(\): )",
      R"(^(RAISE|raise)\b)",
  });
  return re;
}

}  // namespace

MessageClass classify_message(std::string_view message) {
  const std::string m(message);
  if (std::regex_search(m, syntax_patterns())) return MessageClass::kSyntax;
  if (std::regex_search(m, semantic_patterns())) return MessageClass::kSemantic;
  if (std::regex_search(m, runtime_patterns())) return MessageClass::kRuntime;
  return MessageClass::kUnknown;
}

OutcomeClass classify(const RawResult& result, bool* unknown_error, std::string* detail) {
  if (unknown_error) *unknown_error = false;
  if (result.timed_out) {
    if (detail) *detail = "timeout";
    return OutcomeClass::kTimeout;
  }
  if (result.signal != 0) {
    if (detail) *detail = "signal " + std::to_string(result.signal);
    return OutcomeClass::kCrash;
  }
  if (result.exit_code != 0) {
    if (detail) *detail = "exit " + std::to_string(result.exit_code);
    return OutcomeClass::kCrash;
  }
  const std::string* first_error = nullptr;
  bool unknown = false;
  for (const auto& e : result.errors) {
    if (e.empty()) continue;
    MessageClass mc = classify_message(e);
    if (mc == MessageClass::kSyntax) {
      if (detail) *detail = e;
      return OutcomeClass::kSyntaxError;
    }
    if (mc == MessageClass::kUnknown) unknown = true;
    if (!first_error) first_error = &e;
  }
  if (first_error) {
    if (unknown_error) *unknown_error = unknown;
    if (detail) *detail = *first_error;
    return OutcomeClass::kSemanticError;
  }
  return OutcomeClass::kCorrect;
}

// ---------------------------------------------------------------------------

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return;  // child went away; its exit status tells the rest
    }
    off += static_cast<std::size_t>(n);
  }
}

std::vector<std::string> parse_report(const std::string& out) {
  std::vector<std::string> errors;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line == "OK") errors.emplace_back();
    else if (line.rfind("ERR ", 0) == 0) errors.push_back(line.substr(4));
  }
  return errors;
}

}  // namespace

InstrumentedSqliteAdapter::InstrumentedSqliteAdapter(std::filesystem::path binary, std::size_t map_size,
                                                     int timeout_ms)
    : binary_(std::move(binary)), map_size_(map_size), timeout_ms_(timeout_ms) {
  if (map_size_ == 0) throw AdapterError("coverage map size must be positive");
  if (!std::filesystem::exists(binary_)) throw AdapterError("target binary not found: " + binary_.string());
  std::string tmpl = std::filesystem::is_directory("/dev/shm") ? "/dev/shm/squirrelkit-cov-XXXXXX"
                                                               : "/tmp/squirrelkit-cov-XXXXXX";
  int fd = ::mkstemp(tmpl.data());
  if (fd < 0) throw AdapterError(errno_text("mkstemp"));
  map_path_ = tmpl;
  if (::ftruncate(fd, static_cast<off_t>(map_size_)) != 0) {
    ::close(fd);
    ::unlink(map_path_.c_str());
    throw AdapterError(errno_text("ftruncate"));
  }
  void* p = ::mmap(nullptr, map_size_, PROT_READ | PROT_WRITE, MAP_SHARED, fd, 0);
  ::close(fd);
  if (p == MAP_FAILED) {
    ::unlink(map_path_.c_str());
    throw AdapterError(errno_text("mmap"));
  }
  map_ = static_cast<std::uint8_t*>(p);
}

InstrumentedSqliteAdapter::~InstrumentedSqliteAdapter() {
  if (map_) ::munmap(map_, map_size_);
  if (!map_path_.empty()) ::unlink(map_path_.c_str());
}

RawResult InstrumentedSqliteAdapter::run(const std::string& query, CoverageBitmap& coverage) {
  if (coverage.size() != map_size_) throw AdapterError("coverage bitmap size does not match the adapter");
  std::memset(map_, 0, map_size_);

  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw AdapterError(errno_text("pipe"));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw AdapterError(errno_text("pipe"));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);

  std::vector<std::string> env_store;
  for (char** e = environ; *e; ++e) {
    std::string_view kv(*e);
    if (kv.rfind("SQUIRRELKIT_COV_", 0) == 0) continue;
    env_store.emplace_back(kv);
  }
  env_store.push_back("SQUIRRELKIT_COV_PATH=" + map_path_);
  env_store.push_back("SQUIRRELKIT_COV_LEN=" + std::to_string(map_size_));
  std::vector<char*> envp;
  for (auto& s : env_store) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::string path = binary_.string();
  char* argv[] = {path.data(), nullptr};
  pid_t pid = 0;
  int rc = ::posix_spawn(&pid, path.c_str(), &actions, nullptr, argv, envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    errno = rc;
    throw AdapterError(errno_text("posix_spawn"));
  }

  // The target reads all of stdin before producing output.
  struct sigaction ignore {}, old {};
  ignore.sa_handler = SIG_IGN;
  ::sigaction(SIGPIPE, &ignore, &old);
  write_all(in_pipe[1], query);
  ::close(in_pipe[1]);
  ::sigaction(SIGPIPE, &old, nullptr);

  RawResult result;
  std::string out;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) {
      result.timed_out = true;
      break;
    }
    ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  if (result.timed_out) ::kill(pid, SIGKILL);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!result.timed_out) {
    if (WIFSIGNALED(status)) result.signal = WTERMSIG(status);
    else if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  }
  result.errors = parse_report(out);
  std::memcpy(coverage.data(), map_, map_size_);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

OutcomeClass parse_class(const std::string& s) {
  if (s == "syntax") return OutcomeClass::kSyntaxError;
  if (s == "semantic") return OutcomeClass::kSemanticError;
  if (s == "correct") return OutcomeClass::kCorrect;
  if (s == "crash") return OutcomeClass::kCrash;
  if (s == "timeout") return OutcomeClass::kTimeout;
  throw std::invalid_argument("unknown outcome class in mock script: " + s);
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

std::uint64_t str_hash(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

void hit(CoverageBitmap& cov, std::uint64_t key) {
  auto& b = cov[key % cov.size()];
  if (b != 0xff) ++b;
}

// One edge per IR node shape and one per (parent, child) type pair, so
// structurally new queries look like new coverage.
void structural_coverage(const IrProgram& program, CoverageBitmap& cov) {
  for (const auto& stmt : program.statements) {
    for_each_preorder(*stmt, [&](const IrNode& n) {
      std::uint64_t h = mix(static_cast<std::uint64_t>(n.ir_type), str_hash(n.op_prefix));
      h = mix(h, str_hash(n.op_mid));
      h = mix(h, str_hash(n.op_suffix));
      hit(cov, h);
      for (const IrNode* c : {n.left.get(), n.right.get()}) {
        if (c) hit(cov, mix(mix(0x51ed27ULL, static_cast<std::uint64_t>(n.ir_type)), static_cast<std::uint64_t>(c->ir_type)));
      }
    });
  }
}

}  // namespace

MockAdapter::MockAdapter(std::string_view script, std::string crash_token) : crash_token_(std::move(crash_token)) {
  std::istringstream in{std::string(script)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto t1 = line.find('\t');
    if (t1 == std::string::npos) throw std::invalid_argument("mock script line " + std::to_string(lineno) + ": missing tab");
    auto t2 = line.find('\t', t1 + 1);
    std::string cls = line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
    Rule r{std::regex(line.substr(0, t1)), parse_class(cls), t2 == std::string::npos ? "" : line.substr(t2 + 1)};
    rules_.push_back(std::move(r));
  }
}

MockAdapter MockAdapter::from_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw AdapterError("cannot read mock script: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return MockAdapter(ss.str());
}

RawResult MockAdapter::run(const std::string& query, CoverageBitmap& coverage) {
  ++executions_;
  coverage.clear();
  RawResult r;
  if (!crash_token_.empty() && query.find(crash_token_) != std::string::npos) {
    r.signal = SIGSEGV;
    for (std::uint64_t i = 0; i < 4; ++i) hit(coverage, mix(0xc0ffeeULL, i));
    return r;
  }

  auto parsed = sql_to_ir(query);
  const IrProgram* program = std::get_if<IrProgram>(&parsed);
  std::size_t statements = program ? program->statements.size() : 1;

  for (const auto& rule : rules_) {
    if (!std::regex_search(query, rule.pattern)) continue;
    switch (rule.cls) {
      case OutcomeClass::kSyntaxError:
        r.errors.push_back("near \"" + (rule.detail.empty() ? std::string("mock") : rule.detail) + "\": syntax error");
        break;
      case OutcomeClass::kSemanticError:
        r.errors.push_back("no such table: " + (rule.detail.empty() ? std::string("mock") : rule.detail));
        break;
      case OutcomeClass::kCorrect: r.errors.assign(statements, ""); break;
      case OutcomeClass::kCrash: r.signal = SIGSEGV; break;
      case OutcomeClass::kTimeout: r.timed_out = true; break;
    }
    hit(coverage, mix(0xabcULL, str_hash(rule.detail) ^ static_cast<std::uint64_t>(rule.cls)));
    if (program) structural_coverage(*program, coverage);
    return r;
  }

  if (!program) {
    const auto& err = std::get<SyntaxError>(parsed);
    r.errors.push_back("near \"" + err.expected + "\": syntax error");
    hit(coverage, mix(0x5e77aULL, mix(err.offset, str_hash(err.message))));
    return r;
  }
  r.errors.assign(statements, "");
  structural_coverage(*program, coverage);
  return r;
}

std::filesystem::path default_target_binary() {
  if (const char* env = std::getenv("SQUIRRELKIT_TARGET")) return env;
#ifdef SQUIRRELKIT_TARGET_PATH
  return SQUIRRELKIT_TARGET_PATH;
#else
  return "sqlite_target";
#endif
}

}  // namespace squirrelkit
