#include <gtest/gtest.h>

#include <regex>

#include "oracles.h"
#include "squirrelkit/instantiator.h"
#include "squirrelkit/library.h"
#include "squirrelkit/mutator.h"

namespace sk = squirrelkit;

namespace {

sk::IrProgram ir_of(std::string_view sql) { return std::move(std::get<sk::IrProgram>(sk::sql_to_ir(sql))); }

const char* kFig6 =
    "CREATE TABLE x1 (x2 INT, x3 INT); CREATE TABLE x4 (x5 INT, x6 INT); CREATE TABLE x7 (x8 INT, x9 INT); "
    "SELECT x10, x11 FROM x12, x13 WHERE x14.x15 = x16.x17;";

// Pins node i (0-based) to a preferred parent if allowed.
sk::ParentChooser pin(std::map<int, int> prefs) {
  return [prefs](int node, const std::vector<int>& cands) {
    auto it = prefs.find(node);
    if (it != prefs.end() && std::find(cands.begin(), cands.end(), it->second) != cands.end()) return it->second;
    return cands.front();
  };
}

std::vector<std::string> identifiers(const std::string& sql) {
  std::vector<std::string> out;
  for (const auto& t : oracle::scan_tokens(sql))
    if (t.ident && std::islower(static_cast<unsigned char>(t.text[0]))) out.push_back(t.text);  // keywords render upper-case
  return out;
}

}  // namespace

TEST(Rules, DefaultRulesParse) {
  EXPECT_GE(sk::default_rules().size(), 8u);
  auto again = sk::parse_rules(sk::default_rules_text());
  EXPECT_EQ(again.size(), sk::default_rules().size());
  auto file = sk::load_rules(oracle::source_dir() / "rules/sqlite.rules");
  EXPECT_EQ(file.size(), sk::default_rules().size());
}

TEST(Rules, ParsesFields) {
  auto r = sk::parse_rules("# c\n\nCreateTable|CreateView  UseAnyTable  isA  interStmt  any\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].alpha.size(), 2u);
  EXPECT_EQ(r[0].gamma, sk::Relation::kIsA);
  EXPECT_EQ(r[0].scope, sk::RuleScope::kInterStmt);
  EXPECT_EQ(r[0].choice, sk::RuleChoice::kAny);
}

TEST(Rules, MalformedLinesReportLineNumber) {
  auto expect_error = [](const char* text, const char* needle) {
    try {
      sk::parse_rules(text);
      ADD_FAILURE() << "no error for " << text;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("CreateTable UseAnyTable isA interStmt\n", "line 1");
  expect_error("\nNoSuchType UseAnyTable isA interStmt any\n", "line 2");
  expect_error("CreateTable UseAnyTable loves interStmt any\n", "relation");
  expect_error("CreateTable UseAnyTable isA sideways any\n", "scope");
  expect_error("CreateTable UseAnyTable isA interStmt best\n", "choice");
  expect_error("CreateTable CreateTable isA interStmt any\n", "self");
}

TEST(DependencyGraph, Fig6Shape) {
  auto p = sk::strip_data(ir_of(kFig6));
  sk::Rng rng(0);
  auto g = sk::build_dependency_graph(p, sk::default_rules(), rng);
  ASSERT_EQ(g.nodes.size(), 17u);
  auto roots = g.roots();
  EXPECT_EQ(roots, (std::vector<int>{0, 3, 6}));
  // Column definitions hang off their own table.
  EXPECT_EQ(g.nodes[1].parent, 0);
  EXPECT_EQ(g.nodes[2].parent, 0);
  EXPECT_EQ(g.nodes[4].parent, 3);
  EXPECT_EQ(g.nodes[5].parent, 3);
  EXPECT_EQ(g.nodes[7].parent, 6);
  EXPECT_EQ(g.nodes[8].parent, 6);
  // Table uses point at a CREATE; qualifiers at a FROM item; columns at a qualifier.
  for (int t : {11, 12}) EXPECT_TRUE(g.nodes[t].parent == 0 || g.nodes[t].parent == 3 || g.nodes[t].parent == 6);
  for (int q : {13, 15}) EXPECT_TRUE(g.nodes[q].parent == 11 || g.nodes[q].parent == 12);
  EXPECT_EQ(g.nodes[14].parent, 13);
  EXPECT_EQ(g.nodes[16].parent, 15);
  // Every parent resolves before its child: schema objects first, then token order.
  auto key = [&](int i) { return std::tuple(g.nodes[i].statement, g.nodes[i].rank, g.nodes[i].order); };
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.nodes[i].parent >= 0) EXPECT_LT(key(g.nodes[i].parent), key(static_cast<int>(i)));
}

TEST(Instantiate, Fig7Golden) {
  auto p = sk::strip_data(ir_of(kFig6));
  sk::Rng rng(3);
  auto g = sk::build_dependency_graph(p, sk::default_rules(), rng, pin({{9, 11}, {10, 11}, {11, 0}, {12, 3}, {13, 12}, {15, 11}}));
  EXPECT_EQ(g.nodes[11].parent, 0);
  EXPECT_EQ(g.nodes[12].parent, 3);
  EXPECT_EQ(g.nodes[13].parent, 12);
  auto res = sk::instantiate(g, p, rng);
  ASSERT_TRUE(res.ok());
  auto ids = identifiers(*res.sql);
  ASSERT_EQ(ids.size(), 17u) << *res.sql;
  for (int i = 0; i < 9; ++i) EXPECT_EQ(ids[i], "v" + std::to_string(i + 1)) << *res.sql;
  auto in = [](const std::string& v, std::initializer_list<const char*> set) {
    return std::any_of(set.begin(), set.end(), [&](const char* s) { return v == s; });
  };
  EXPECT_TRUE(in(ids[9], {"v2", "v3"})) << *res.sql;
  EXPECT_TRUE(in(ids[10], {"v2", "v3"})) << *res.sql;
  EXPECT_EQ(ids[11], "v1");
  EXPECT_EQ(ids[12], "v4");
  EXPECT_EQ(ids[13], "v4");
  EXPECT_TRUE(in(ids[14], {"v5", "v6"})) << *res.sql;
  EXPECT_EQ(ids[15], "v1");
  EXPECT_TRUE(in(ids[16], {"v2", "v3"})) << *res.sql;
  EXPECT_TRUE(oracle::lifetime_violations(*res.sql).empty());
}

TEST(Instantiate, UseBeforeDefinitionFails) {
  auto p = sk::strip_data(ir_of("SELECT a FROM t;"));
  sk::Rng rng(1);
  auto res = sk::retry_instantiate(p, sk::default_rules(), rng, 2);
  EXPECT_FALSE(res.ok());
  ASSERT_TRUE(res.failure.has_value());
  EXPECT_EQ(*res.failure, sk::InstantiateFailure::kUseBeforeDef);
  EXPECT_EQ(res.graphs_built, 2u);
}

TEST(Instantiate, DropBeforeDefinitionFails) {
  auto p = sk::strip_data(ir_of("DROP TABLE t; CREATE TABLE u (a INT);"));
  sk::Rng rng(1);
  auto res = sk::retry_instantiate(p, sk::default_rules(), rng, 1);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(*res.failure, sk::InstantiateFailure::kDeleteBeforeDef);
}

TEST(Instantiate, UseAfterDropFails) {
  auto p = sk::strip_data(ir_of("CREATE TABLE t (a INT); DROP TABLE t; SELECT a FROM t;"));
  sk::Rng rng(1);
  auto res = sk::retry_instantiate(p, sk::default_rules(), rng, 3);
  // Any reason is acceptable as long as no query is produced.
  EXPECT_FALSE(res.ok());
  EXPECT_TRUE(res.failure.has_value());
}

TEST(Instantiate, FailureNames) {
  EXPECT_EQ(sk::failure_name(sk::InstantiateFailure::kUseBeforeDef), "use-before-def");
  EXPECT_EQ(sk::failure_name(sk::InstantiateFailure::kDeleteBeforeDef), "delete-before-def");
  EXPECT_EQ(sk::failure_name(sk::InstantiateFailure::kEmptyRelation), "empty-relation");
}

TEST(Oracle, CorpusSeedsAreLifetimeClean) {
  for (const auto& [name, sql] : oracle::corpus()) {
    auto v = oracle::lifetime_violations(sql);
    if (name == "listing3.sql") {
      // A view whose body selects from itself.
      ASSERT_FALSE(v.empty());
      for (const auto& x : v) EXPECT_EQ(x.name, "V2");
      continue;
    }
    EXPECT_TRUE(v.empty()) << name << ": " << (v.empty() ? "" : v[0].kind + " " + v[0].name);
  }
}

TEST(Oracle, DetectsViolations) {
  EXPECT_EQ(oracle::lifetime_violations("SELECT a FROM t;").size(), 1u);
  EXPECT_EQ(oracle::lifetime_violations("CREATE TABLE t (a); DROP TABLE t; SELECT * FROM t;")[0].kind, "use-after-drop");
  EXPECT_TRUE(oracle::lifetime_violations("WITH c AS (SELECT 1) SELECT * FROM c;").empty());
  EXPECT_TRUE(oracle::lifetime_violations("CREATE TABLE t (a); SELECT * FROM t AS q JOIN t ON q.a = t.a;").empty());
}

TEST(Instantiate, InstantiatedCorpusIsLifetimeClean) {
  sk::Rng rng(2024);
  std::size_t ok = 0;
  for (const auto& [name, sql] : oracle::corpus()) {
    auto skel = sk::strip_data(ir_of(sql));
    for (int k = 0; k < 5; ++k) {
      auto res = sk::retry_instantiate(skel, sk::default_rules(), rng);
      if (!res.ok()) continue;
      ++ok;
      auto v = oracle::lifetime_violations(*res.sql);
      EXPECT_TRUE(v.empty()) << name << "\n" << *res.sql << "\n" << (v.empty() ? "" : v[0].kind + " " + v[0].name);
      EXPECT_TRUE(std::holds_alternative<sk::IrProgram>(sk::sql_to_ir(*res.sql))) << *res.sql;
    }
  }
  EXPECT_GT(ok, 900u);
}

TEST(Instantiate, MutatedSkeletonsAreLifetimeClean) {
  sk::IrLibrary lib(1 << 20);
  std::vector<sk::IrProgram> seeds;
  for (const auto& [name, sql] : oracle::corpus()) {
    seeds.push_back(sk::strip_data(ir_of(sql)));
    lib.insert(seeds.back());
  }
  sk::Rng rng(8);
  std::size_t ok = 0;
  for (const auto& s : seeds) {
    for (auto& m : sk::generate(s, lib, {}, rng)) {
      auto res = sk::retry_instantiate(m, sk::default_rules(), rng);
      if (!res.ok()) continue;
      ++ok;
      auto v = oracle::lifetime_violations(*res.sql);
      EXPECT_TRUE(v.empty()) << *res.sql << "\n" << (v.empty() ? "" : v[0].kind + " " + v[0].name);
    }
  }
  EXPECT_GT(ok, 200u);
}

TEST(Instantiate, NoDoubledSigns) {
  std::regex doubled(R"((^|[^-])-\s*-\s*[0-9])");
  sk::Rng rng(4);
  for (const auto& [name, sql] : oracle::corpus()) {
    auto skel = sk::strip_data(ir_of(sql));
    auto res = sk::retry_instantiate(skel, sk::default_rules(), rng);
    if (res.ok()) EXPECT_FALSE(std::regex_search(*res.sql, doubled)) << *res.sql;
    EXPECT_FALSE(std::regex_search(sk::fill_randomly(skel, rng), doubled));
  }
}

TEST(FillRandomly, UsesSmallNamePool) {
  auto skel = sk::strip_data(ir_of(kFig6));
  sk::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto sql = sk::fill_randomly(skel, rng);
    for (const auto& id : identifiers(sql)) EXPECT_TRUE(id == "v0" || id == "v1" || id == "v2" || id == "v3") << sql;
    EXPECT_TRUE(std::holds_alternative<sk::IrProgram>(sk::sql_to_ir(sql))) << sql;
  }
}

TEST(Instantiate, TableIsNotUsableInsideItsOwnCreate) {
  // The only table in scope is the one being created, so the subquery has
  // nothing it may legally name.
  auto p = sk::strip_data(ir_of("CREATE TABLE t (a INT CHECK (a IN (SELECT a FROM t)));"));
  sk::Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_FALSE(sk::retry_instantiate(p, sk::default_rules(), rng).ok());
  auto q = sk::strip_data(ir_of("CREATE TABLE t (a INT, b INT CHECK (b > a));"));
  EXPECT_TRUE(sk::retry_instantiate(q, sk::default_rules(), rng).ok());
}
