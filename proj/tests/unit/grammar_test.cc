#include <gtest/gtest.h>

#include "oracles.h"
#include "squirrelkit/grammar.h"
#include "squirrelkit/ir.h"

namespace sk = squirrelkit;

namespace {

sk::AstProgram parse_ok(std::string_view sql) {
  auto r = sk::parse(sql);
  if (auto* e = std::get_if<sk::SyntaxError>(&r)) ADD_FAILURE() << "parse failed: " << e->message << " in " << sql;
  return std::move(std::get<sk::AstProgram>(r));
}

bool parses(std::string_view sql) { return std::holds_alternative<sk::AstProgram>(sk::parse(sql)); }

// Collects (token, refined type name) for every data leaf in source order.
void leaves(const sk::AstNode& n, std::vector<std::pair<std::string, std::string>>& out) {
  if (n.is_data_leaf()) {
    out.emplace_back(n.token_text, n.data_type ? std::string(n.data_type->name()) : "?");
    return;
  }
  for (const auto& c : n.children)
    if (c) leaves(*c, out);
}

std::vector<std::pair<std::string, std::string>> annotated(std::string_view sql) {
  auto p = parse_ok(sql);
  sk::annotate(p);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : p.statements) leaves(*s, out);
  return out;
}

}  // namespace

TEST(Lexer, KeywordsAreUpperCasedIdentifiersKept) {
  auto r = sk::tokenize("select Foo from \"Bar\" where x = 'it''s' -- tail\n");
  ASSERT_TRUE(std::holds_alternative<std::vector<sk::Token>>(r));
  const auto& t = std::get<std::vector<sk::Token>>(r);
  ASSERT_GE(t.size(), 8u);
  EXPECT_EQ(t[0].kind, sk::TokenKind::kKeyword);
  EXPECT_EQ(t[0].text, "SELECT");
  EXPECT_EQ(t[1].kind, sk::TokenKind::kIdentifier);
  EXPECT_EQ(t[1].text, "Foo");
  EXPECT_EQ(t[7].kind, sk::TokenKind::kString);
  EXPECT_EQ(t[7].text, "'it''s'");
}

TEST(Lexer, NumbersAndBlobs) {
  auto r = sk::tokenize("1 2.5 .5 1e3 0xFF x'0a'");
  ASSERT_TRUE(std::holds_alternative<std::vector<sk::Token>>(r));
  const auto& t = std::get<std::vector<sk::Token>>(r);
  EXPECT_EQ(t[0].kind, sk::TokenKind::kInteger);
  EXPECT_EQ(t[1].kind, sk::TokenKind::kFloat);
  EXPECT_EQ(t[2].kind, sk::TokenKind::kFloat);
  EXPECT_EQ(t[3].kind, sk::TokenKind::kFloat);
  EXPECT_EQ(t[4].kind, sk::TokenKind::kInteger);
  EXPECT_EQ(t[5].kind, sk::TokenKind::kBlob);
}

TEST(Lexer, UnterminatedStringIsSyntaxError) {
  EXPECT_TRUE(std::holds_alternative<sk::SyntaxError>(sk::tokenize("SELECT 'abc")));
}

TEST(Parser, RejectsMisspelledKeyword) {
  auto r = sk::parse("RELECT 1;");
  ASSERT_TRUE(std::holds_alternative<sk::SyntaxError>(r));
  EXPECT_EQ(std::get<sk::SyntaxError>(r).offset, 0u);
}

TEST(Parser, FirstErrorAborts) {
  auto r = sk::parse("SELECT 1; SELECT FROM; SELEC 2;");
  ASSERT_TRUE(std::holds_alternative<sk::SyntaxError>(r));
  EXPECT_EQ(std::get<sk::SyntaxError>(r).offset, 17u);
}

TEST(Parser, EmptyProgramIsValid) {
  auto p = parse_ok("  ;; ");
  EXPECT_TRUE(p.statements.empty());
}

TEST(Parser, AcceptsBroadGrammar) {
  const char* ok[] = {
      "SELECT DISTINCT a, b AS c FROM t AS x LEFT JOIN u ON x.a = u.b WHERE a > 1 GROUP BY a HAVING count(*) > 1 "
      "ORDER BY 1 DESC LIMIT 5 OFFSET 2;",
      "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x + 1 FROM c WHERE x < 3) SELECT x FROM c;",
      "CREATE TABLE t(a INTEGER PRIMARY KEY AUTOINCREMENT, b TEXT NOT NULL DEFAULT 'x' CHECK (b <> ''), "
      "c REFERENCES p(id) ON DELETE CASCADE, UNIQUE(b, c)) WITHOUT ROWID;",
      "CREATE TRIGGER r AFTER INSERT ON t WHEN new.a > 0 BEGIN INSERT INTO u VALUES(new.a); DELETE FROM u; END;",
      "INSERT INTO t(a, b) VALUES(1, 2) ON CONFLICT(a) DO UPDATE SET b = excluded.b WHERE b < 3;",
      "SELECT CASE WHEN a THEN 1 WHEN b THEN 2 ELSE 3 END, CAST(a AS TEXT), a BETWEEN 1 AND 2, a NOT IN (1, 2), "
      "a IS NOT NULL, EXISTS (SELECT 1), a LIKE 'x%' FROM t;",
      "SELECT sum(a) OVER (PARTITION BY b ORDER BY c) FROM t;",
      "CREATE VIRTUAL TABLE r USING rtree(id, x0, x1);",
      "PRAGMA table_info(t); PRAGMA user_version = 3; BEGIN; COMMIT; EXPLAIN QUERY PLAN SELECT 1;",
      "CREATE VIEW v(a) AS SELECT 1; DROP VIEW IF EXISTS v; CREATE UNIQUE INDEX i ON t(a DESC) WHERE a > 0;",
      "ALTER TABLE t ADD COLUMN z INT; REPLACE INTO t VALUES(1); UPDATE OR IGNORE t SET a = 1;",
  };
  for (const char* s : ok) EXPECT_TRUE(parses(s)) << s;
}

TEST(Parser, RejectsOutOfGrammarInputs) {
  const char* bad[] = {
      "SELECT 1 ORDER BY 1 UNION SELECT 2;",
      "SELECT count(*) FILTER (WHERE 1) FROM t;",
      "SELECT (1;",
      "CREATE TABLE;",
      "INSERT t VALUES(1);",
      "SELECT * FROM t WHERE;",
  };
  for (const char* s : bad) EXPECT_FALSE(parses(s)) << s;
}

TEST(Parser, DeepNestingIsRejectedNotCrashing) {
  std::string s = "SELECT ";
  for (int i = 0; i < 1000; ++i) s += "(";
  s += "1";
  for (int i = 0; i < 1000; ++i) s += ")";
  EXPECT_FALSE(parses(s));
}

TEST(Parser, KeywordPartitionHasChildrenPlusOneEntries) {
  for (const auto& [name, sql] : oracle::corpus()) {
    auto p = parse_ok(sql);
    std::function<void(const sk::AstNode&)> check = [&](const sk::AstNode& n) {
      ASSERT_EQ(n.keywords.size(), n.children.size() + 1) << name << " " << sk::kind_name(n.kind);
      for (const auto& c : n.children)
        if (c) check(*c);
    };
    for (const auto& s : p.statements) check(*s);
  }
}

TEST(Annotation, RuleTableIsConsistent) { EXPECT_NO_THROW(sk::check_annotation_rules()); }

TEST(Annotation, RunningExampleTypes) {
  auto got = annotated("SELECT c2, c6 FROM t1, t2 WHERE t1.c1 = t2.c5;");
  std::vector<std::pair<std::string, std::string>> want = {
      {"c2", "UseAnyColumn"},  {"c6", "UseAnyColumn"},   {"t1", "UseAnyTable"},    {"t2", "UseAnyTable"},
      {"t1", "UseFromTable"},  {"c1", "UseTableColumn"}, {"t2", "UseFromTable"},   {"c5", "UseTableColumn"}};
  EXPECT_EQ(got, want);
}

TEST(Annotation, DefinitionsUsesAndDrops) {
  auto got = annotated(
      "CREATE TABLE t(a INT, b); CREATE INDEX i ON t(a); CREATE VIEW v(x) AS SELECT a FROM t; "
      "DROP INDEX i; DROP VIEW v; DROP TABLE t;");
  std::vector<std::pair<std::string, std::string>> want = {
      {"t", "CreateTable"},  {"a", "CreateColumn"},     {"b", "CreateColumn"},  {"i", "CreateIndex"},
      {"t", "UseAnyTable"},  {"a", "UseAnyColumn"},     {"v", "CreateView"},    {"x", "CreateViewColumn"},
      {"a", "UseAnyColumn"}, {"t", "UseAnyTable"},      {"i", "DropIndex"},     {"v", "DropView"},
      {"t", "DropTable"}};
  EXPECT_EQ(got, want);
}

TEST(Annotation, LiteralsAndFunctions) {
  auto got = annotated("SELECT abs(-1), 2.5, 'a' FROM t;");
  std::vector<std::pair<std::string, std::string>> want = {
      {"abs", "UseFunction"}, {"1", "LiteralInt"}, {"2.5", "LiteralFloat"}, {"'a'", "LiteralString"}, {"t", "UseAnyTable"}};
  EXPECT_EQ(got, want);
}

TEST(Annotation, EveryCorpusLeafGetsADeclaredType) {
  for (const auto& [name, sql] : oracle::corpus()) {
    auto p = parse_ok(sql);
    ASSERT_NO_THROW(sk::annotate(p)) << name;
    std::vector<std::pair<std::string, std::string>> ls;
    for (const auto& s : p.statements) leaves(*s, ls);
    for (const auto& [tok, type] : ls) EXPECT_NE(type, "?") << name << ": " << tok;
  }
}

TEST(Render, AstRenderReparsesToSameTokens) {
  for (const auto& [name, sql] : oracle::corpus()) {
    auto p = parse_ok(sql);
    std::string out = sk::render_ast(p);
    EXPECT_TRUE(sk::tokens_equal(out, sql)) << name << "\n" << out << "\n" << sql;
  }
}

TEST(Render, AppendFragmentSpacing) {
  std::string s;
  for (const char* f : {"SELECT", "a", ",", "b", "FROM", "t", "(", "x", ")", ".", "y", ";"}) sk::append_fragment(s, f);
  EXPECT_EQ(s, "SELECT a, b FROM t (x).y;");
}

TEST(Render, TokensEqualIgnoresCaseAndSpacing) {
  EXPECT_TRUE(sk::tokens_equal("select a  from t", "SELECT a FROM t"));
  EXPECT_FALSE(sk::tokens_equal("SELECT a FROM t", "SELECT A FROM t"));
}
