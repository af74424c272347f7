#include <gtest/gtest.h>

#include <csignal>

#include "oracles.h"
#include "squirrelkit/adapter.h"
#include "squirrelkit/campaign.h"

namespace sk = squirrelkit;

namespace {

sk::RawResult errors(std::vector<std::string> e) {
  sk::RawResult r;
  r.errors = std::move(e);
  return r;
}

bool have_target() { return std::filesystem::exists(SQUIRRELKIT_TARGET_BIN); }

}  // namespace

TEST(ClassifyMessage, KnownMessages) {
  EXPECT_EQ(sk::classify_message("near \"RELECT\": syntax error"), sk::MessageClass::kSyntax);
  EXPECT_EQ(sk::classify_message("incomplete input"), sk::MessageClass::kSyntax);
  EXPECT_EQ(sk::classify_message("unrecognized token: \"#\""), sk::MessageClass::kSyntax);
  EXPECT_EQ(sk::classify_message("no such table: t1"), sk::MessageClass::kSemantic);
  EXPECT_EQ(sk::classify_message("no such column: c9"), sk::MessageClass::kSemantic);
  EXPECT_EQ(sk::classify_message("table t1 already exists"), sk::MessageClass::kSemantic);
  EXPECT_EQ(sk::classify_message("ambiguous column name: a"), sk::MessageClass::kSemantic);
  EXPECT_EQ(sk::classify_message("wrong number of arguments to function abs()"), sk::MessageClass::kSemantic);
  EXPECT_EQ(sk::classify_message("UNIQUE constraint failed: t.a"), sk::MessageClass::kRuntime);
  EXPECT_EQ(sk::classify_message("datatype mismatch"), sk::MessageClass::kRuntime);
  EXPECT_EQ(sk::classify_message("something nobody has seen"), sk::MessageClass::kUnknown);
}

TEST(Classify, Precedence) {
  sk::RawResult t;
  t.timed_out = true;
  t.signal = SIGKILL;
  EXPECT_EQ(sk::classify(t), sk::OutcomeClass::kTimeout);

  sk::RawResult s = errors({"near \"x\": syntax error"});
  s.signal = SIGSEGV;
  EXPECT_EQ(sk::classify(s), sk::OutcomeClass::kCrash);

  sk::RawResult x;
  x.exit_code = 3;
  EXPECT_EQ(sk::classify(x), sk::OutcomeClass::kCrash);

  // One syntax error anywhere outranks semantic errors elsewhere.
  EXPECT_EQ(sk::classify(errors({"", "no such table: t", "near \"(\": syntax error"})), sk::OutcomeClass::kSyntaxError);
  EXPECT_EQ(sk::classify(errors({"", "no such table: t", ""})), sk::OutcomeClass::kSemanticError);
  EXPECT_EQ(sk::classify(errors({"", "", ""})), sk::OutcomeClass::kCorrect);
  EXPECT_EQ(sk::classify(errors({})), sk::OutcomeClass::kCorrect);
}

TEST(Classify, UnknownMessagesAreFlaggedSemantic) {
  bool unknown = false;
  std::string detail;
  EXPECT_EQ(sk::classify(errors({"zorp"}), &unknown, &detail), sk::OutcomeClass::kSemanticError);
  EXPECT_TRUE(unknown);
  EXPECT_EQ(detail, "zorp");
  EXPECT_EQ(sk::classify(errors({"no such table: t"}), &unknown), sk::OutcomeClass::kSemanticError);
  EXPECT_FALSE(unknown);
}

TEST(Classify, OutcomeNames) {
  EXPECT_EQ(sk::outcome_name(sk::OutcomeClass::kSyntaxError), "syntax_error");
  EXPECT_EQ(sk::outcome_name(sk::OutcomeClass::kSemanticError), "semantic_error");
  EXPECT_EQ(sk::outcome_name(sk::OutcomeClass::kCorrect), "correct");
  EXPECT_EQ(sk::outcome_name(sk::OutcomeClass::kCrash), "crash");
  EXPECT_EQ(sk::outcome_name(sk::OutcomeClass::kTimeout), "timeout");
}

TEST(Mock, DefaultsToParser) {
  sk::MockAdapter m;
  EXPECT_EQ(sk::execute("RELECT 1;", m, 4096).cls, sk::OutcomeClass::kSyntaxError);
  EXPECT_EQ(sk::execute("SELECT 1;", m, 4096).cls, sk::OutcomeClass::kCorrect);
  EXPECT_EQ(m.executions(), 2u);
}

TEST(Mock, ScriptRules) {
  sk::MockAdapter m("# comment\nno_such\tsemantic\tno_such\n^SLOW\ttimeout\n");
  EXPECT_EQ(sk::execute("SELECT * FROM no_such;", m, 4096).cls, sk::OutcomeClass::kSemanticError);
  EXPECT_EQ(sk::execute("SLOW", m, 4096).cls, sk::OutcomeClass::kTimeout);
  EXPECT_THROW(sk::MockAdapter("no tab here\n"), std::invalid_argument);
  EXPECT_THROW(sk::MockAdapter("x\tweird\n"), std::invalid_argument);
}

TEST(Mock, CrashTokenHasStableCoverage) {
  sk::MockAdapter m;
  auto a = sk::execute("SELECT 'SQUIRRELKIT_CRASH';", m, 4096);
  auto b = sk::execute("SELECT 1, 'SQUIRRELKIT_CRASH' FROM t;", m, 4096);
  EXPECT_EQ(a.cls, sk::OutcomeClass::kCrash);
  EXPECT_EQ(sk::coverage_signature(a.coverage), sk::coverage_signature(b.coverage));
}

TEST(Mock, DeterministicCoverage) {
  sk::MockAdapter m;
  auto a = sk::execute("SELECT a FROM t WHERE b > 1;", m, 4096);
  auto b = sk::execute("SELECT a FROM t WHERE b > 1;", m, 4096);
  auto c = sk::execute("SELECT a FROM t ORDER BY b;", m, 4096);
  EXPECT_EQ(a.coverage.span().size(), 4096u);
  EXPECT_TRUE(std::equal(a.coverage.span().begin(), a.coverage.span().end(), b.coverage.span().begin()));
  EXPECT_NE(sk::coverage_signature(a.coverage), sk::coverage_signature(c.coverage));
}

TEST(RealTarget, ClassifiesOutcomes) {
  if (!have_target()) GTEST_SKIP() << "instrumented target not built";
  sk::InstrumentedSqliteAdapter a(SQUIRRELKIT_TARGET_BIN, sk::kDefaultBitmapSize, 2000);
  auto syn = sk::execute("RELECT 1;", a, sk::kDefaultBitmapSize);
  EXPECT_EQ(syn.cls, sk::OutcomeClass::kSyntaxError);
  auto sem = sk::execute("SELECT * FROM nowhere;", a, sk::kDefaultBitmapSize);
  EXPECT_EQ(sem.cls, sk::OutcomeClass::kSemanticError);
  EXPECT_FALSE(sem.unknown_error);
  auto ok = sk::execute("CREATE TABLE t (a INT); INSERT INTO t VALUES (1); SELECT a FROM t;", a, sk::kDefaultBitmapSize);
  EXPECT_EQ(ok.cls, sk::OutcomeClass::kCorrect);
  EXPECT_GT(ok.coverage.count_nonzero(), 100u);
  auto inc = sk::execute("SELECT (1", a, sk::kDefaultBitmapSize);
  EXPECT_EQ(inc.cls, sk::OutcomeClass::kSyntaxError);
}

TEST(RealTarget, CoverageIsRepeatable) {
  if (!have_target()) GTEST_SKIP() << "instrumented target not built";
  sk::InstrumentedSqliteAdapter a(SQUIRRELKIT_TARGET_BIN, sk::kDefaultBitmapSize, 2000);
  const std::string q = "CREATE TABLE t (a, b); INSERT INTO t VALUES (1, 2); SELECT b FROM t WHERE a = 1;";
  auto x = sk::execute(q, a, sk::kDefaultBitmapSize);
  auto y = sk::execute(q, a, sk::kDefaultBitmapSize);
  EXPECT_EQ(sk::coverage_signature(x.coverage), sk::coverage_signature(y.coverage));
}

TEST(RealTarget, MissingBinaryThrows) {
  EXPECT_THROW(
      {
        sk::InstrumentedSqliteAdapter a("/nonexistent/target", 4096, 1000);
        sk::CoverageBitmap m(4096);
        a.run("SELECT 1;", m);
      },
      sk::AdapterError);
}
