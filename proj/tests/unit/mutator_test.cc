#include <gtest/gtest.h>

#include "oracles.h"
#include "squirrelkit/mutator.h"

namespace sk = squirrelkit;

namespace {

sk::IrProgram ir_of(std::string_view sql) { return std::move(std::get<sk::IrProgram>(sk::sql_to_ir(sql))); }

sk::IrLibrary corpus_library() {
  sk::IrLibrary lib(1 << 20);
  for (const auto& [name, sql] : oracle::corpus()) lib.insert(sk::strip_data(ir_of(sql)));
  return lib;
}

std::vector<sk::IrProgram> stripped_corpus() {
  std::vector<sk::IrProgram> out;
  for (const auto& [name, sql] : oracle::corpus()) out.push_back(sk::strip_data(ir_of(sql)));
  return out;
}

}  // namespace

TEST(MutationConfig, RejectsOutOfRange) {
  sk::MutationConfig c;
  EXPECT_NO_THROW(c.check());
  c.p_insert = 1.5;
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = {};
  c.p_delete = -0.1;
  EXPECT_THROW(c.check(), std::invalid_argument);
  c = {};
  c.max_candidates_per_input = 0;
  EXPECT_THROW(c.check(), std::invalid_argument);
}

TEST(Mutator, DeleteEmptiesSlot) {
  auto p = ir_of("SELECT a FROM t WHERE b = 1;");
  sk::IrPtr& slot = p.statements[0]->left;
  ASSERT_NE(slot, nullptr);
  EXPECT_TRUE(sk::mutate_delete(slot));
  EXPECT_EQ(slot, nullptr);
  EXPECT_FALSE(sk::mutate_delete(slot));
}

TEST(Mutator, ReplaceKeepsType) {
  auto lib = corpus_library();
  sk::Rng rng(11);
  std::size_t replaced = 0;
  for (const auto& prog : stripped_corpus()) {
    for (int round = 0; round < 4; ++round) {
      auto p = sk::deep_copy(prog);
      std::vector<sk::IrPtr*> slots;
      for (auto& st : p.statements)
        sk::for_each_preorder(*st, [&](sk::IrNode& n) {
          for (sk::IrPtr* slot : {&n.left, &n.right})
            if (*slot && !(*slot)->is_data()) slots.push_back(slot);
        });
      if (slots.empty()) continue;
      sk::IrPtr& slot = *slots[rng.below(slots.size())];
      auto before = slot->ir_type;
      if (sk::mutate_replace(slot, lib, rng)) ++replaced;
      ASSERT_NE(slot, nullptr);
      EXPECT_EQ(slot->ir_type, before);
    }
  }
  EXPECT_GT(replaced, 100u);
}

TEST(Mutator, InsertFillsOnlyEmptyOperands) {
  auto lib = corpus_library();
  sk::Rng rng(5);
  auto p = sk::strip_data(ir_of("SELECT a FROM t;"));
  std::size_t before = sk::node_count(p);
  bool any = false;
  sk::for_each_preorder(*p.statements[0], [&](sk::IrNode& n) {
    if (any || n.is_data()) return;
    bool had_left = n.left != nullptr, had_right = n.right != nullptr;
    if (had_left && had_right) return;
    if (sk::mutate_insert(n, lib, rng)) {
      any = true;
      EXPECT_TRUE(n.left != nullptr || n.right != nullptr);
      if (had_left) EXPECT_NE(n.left, nullptr);
    }
  });
  if (any) EXPECT_GT(sk::node_count(p), before);
}

TEST(Generate, EveryOutputReparsesAndIsNormalized) {
  auto lib = corpus_library();
  sk::MutationConfig cfg;
  sk::Rng rng(42);
  sk::GenerateStats stats;
  std::size_t outputs = 0;
  for (const auto& prog : stripped_corpus()) {
    for (auto& out : sk::generate(prog, lib, cfg, rng, &stats)) {
      ++outputs;
      std::string sql = sk::ir_to_sql(out);
      auto re = sk::sql_to_ir(sql);
      ASSERT_TRUE(std::holds_alternative<sk::IrProgram>(re)) << sql;
      // Normalized: re-parse and strip yields exactly the same skeleton.
      EXPECT_TRUE(sk::structural_equal(sk::strip_data(std::get<sk::IrProgram>(re)), out)) << sql;
    }
  }
  EXPECT_GT(outputs, 100u);
  EXPECT_GE(stats.attempted, stats.passed);
  EXPECT_EQ(stats.passed, outputs);
}

TEST(Generate, RespectsCandidateAndStatementLimits) {
  auto lib = corpus_library();
  sk::MutationConfig cfg;
  cfg.max_candidates_per_input = 3;
  cfg.max_statements = 4;
  sk::Rng rng(9);
  for (const auto& prog : stripped_corpus()) {
    auto outs = sk::generate(prog, lib, cfg, rng);
    EXPECT_LE(outs.size(), 3u);
    for (const auto& o : outs) {
      EXPECT_GE(o.statements.size(), 1u);
      EXPECT_LE(o.statements.size(), std::max<std::size_t>(4, prog.statements.size()));
    }
  }
}

TEST(Generate, InputIsNotModified) {
  auto lib = corpus_library();
  auto prog = sk::strip_data(ir_of("SELECT a, b FROM t WHERE c > 2 ORDER BY a;"));
  auto copy = sk::deep_copy(prog);
  sk::Rng rng(1);
  sk::generate(prog, lib, {}, rng);
  EXPECT_TRUE(sk::structural_equal(prog, copy));
}

TEST(Generate, SameSeedSameOutput) {
  auto lib = corpus_library();
  auto prog = sk::strip_data(ir_of(oracle::read_file(oracle::source_dir() / "corpus/listings/listing1.sql")));
  sk::Rng a(77), b(77);
  auto x = sk::generate(prog, lib, {}, a);
  auto y = sk::generate(prog, lib, {}, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(sk::ir_to_sql(x[i]), sk::ir_to_sql(y[i]));
}

TEST(Validate, AcceptsCorpusRejectsBroken) {
  for (const auto& prog : stripped_corpus()) EXPECT_TRUE(sk::validate(prog));
  auto p = sk::strip_data(ir_of("SELECT a FROM t WHERE b = 1;"));
  // Drop the right operand of the comparison: "b =" no longer parses.
  bool cut = false;
  sk::for_each_preorder(*p.statements[0], [&](sk::IrNode& n) {
    if (!cut && n.op_mid == "=" && n.right) {
      n.right.reset();
      cut = true;
    }
  });
  ASSERT_TRUE(cut);
  EXPECT_FALSE(sk::validate(p));
  EXPECT_FALSE(sk::normalize(p).has_value());
}

TEST(Generate, OversizedCandidatesAreDiscarded) {
  auto lib = corpus_library();
  auto prog = sk::strip_data(ir_of(oracle::read_file(oracle::source_dir() / "corpus/listings/listing1.sql")));
  sk::MutationConfig cfg;
  cfg.max_nodes = sk::node_count(prog) - 1;
  cfg.p_insert = cfg.p_replace = cfg.p_delete = cfg.p_statement = 0.0;
  sk::Rng rng(1);
  sk::GenerateStats stats;
  EXPECT_TRUE(sk::generate(prog, lib, cfg, rng, &stats).empty());
  EXPECT_EQ(stats.oversized, cfg.max_candidates_per_input);
  EXPECT_EQ(stats.attempted, 0u);

  cfg = {};
  for (const auto& [name, sql] : oracle::corpus()) {
    for (const auto& out : sk::generate(sk::strip_data(ir_of(sql)), lib, cfg, rng))
      EXPECT_LE(sk::node_count(out), cfg.max_nodes);
  }
}
