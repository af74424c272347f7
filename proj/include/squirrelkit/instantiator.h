#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "squirrelkit/data_type.h"
#include "squirrelkit/ir.h"
#include "squirrelkit/rng.h"

namespace squirrelkit {

enum class Relation { kIsA, kIsAnElement };
enum class RuleScope { kIntraStmt, kInterStmt };
enum class RuleChoice { kAny, kNearest };

struct RelationRule {
  std::vector<DataType> alpha;  // relation targets (alternatives)
  DataType beta;                // relation source
  Relation gamma = Relation::kIsA;
  RuleScope scope = RuleScope::kIntraStmt;
  RuleChoice choice = RuleChoice::kAny;
};

using RuleSet = std::vector<RelationRule>;

// Parses the whitespace-separated rule format. Throws std::invalid_argument
// with the line number on malformed input or undeclared types.
RuleSet parse_rules(std::string_view text);
RuleSet load_rules(const std::filesystem::path& path);
// The shipped SQLite rule set (same content as rules/sqlite.rules).
const RuleSet& default_rules();
std::string_view default_rules_text();

struct DepNode {
  IrNode* ir = nullptr;
  DataType type{};
  std::size_t statement = 0;
  // Schema objects (tables, views, indexes, triggers) resolve before the
  // columns and aliases of the same statement.
  int rank = 0;
  // Position of the datum in rendered token order over the whole program.
  std::size_t order = 0;
  // Enclosing query blocks, outermost first.
  std::vector<const IrNode*> blocks;
  // Function names only: argument count (-1 for "*"), and whether an
  // aggregate is legal at this position.
  int arity = 0;
  bool aggregate_ok = false;
  int parent = -1;
  int rule = -1;
  std::vector<int> children;
};

struct DependencyGraph {
  // Semantic data nodes in token order; index i is "x(i+1)" in debug output.
  std::vector<DepNode> nodes;
  // Literal data nodes (filled but not part of the forest).
  std::vector<IrNode*> literals;
  // Rule set the graph was built from; DepNode::rule indexes into it.
  const RuleSet* rules = nullptr;

  std::vector<int> roots() const;
  // "x1 -> x12 isA" lines, followed by "xN root" lines.
  std::string edge_list() const;
};

// Picks one candidate index (into graph.nodes) for node `node`; used to pin
// choices in tests. Candidates are non-empty.
using ParentChooser = std::function<int(int node, const std::vector<int>& candidates)>;

// Nodes positioned before `node` that `rule` allows as its parent.
std::vector<int> rule_candidates(const DependencyGraph& graph, int node, const RelationRule& rule);

DependencyGraph build_dependency_graph(IrProgram& skeleton, const RuleSet& rules, Rng& rng,
                                       const ParentChooser& chooser = nullptr);

enum class InstantiateFailure { kUseBeforeDef, kDeleteBeforeDef, kEmptyRelation, kUseAfterDelete };

std::string_view failure_name(InstantiateFailure failure);

struct InstantiateResult {
  std::optional<std::string> sql;
  std::optional<InstantiateFailure> failure;
  std::size_t graphs_built = 0;

  bool ok() const { return sql.has_value(); }
};

struct InstantiateOptions {
  // Probability of a freshly generated literal instead of a predefined one.
  double p_random_literal = 0.1;
};

// Fills the skeleton's data nodes in place following the graph.
InstantiateResult instantiate(DependencyGraph& graph, IrProgram& skeleton, Rng& rng,
                              const InstantiateOptions& options = {});

// Copies the skeleton and tries up to max_tries fresh graphs.
InstantiateResult retry_instantiate(const IrProgram& skeleton, const RuleSet& rules, Rng& rng, int max_tries = 3,
                                    const InstantiateOptions& options = {});

// Dependency-free filling used when instantiation is disabled: names are drawn
// from a small fixed pool, literals as usual.
std::string fill_randomly(const IrProgram& skeleton, Rng& rng);

struct BuiltinFunction {
  std::string_view name;
  int min_args;
  int max_args;  // -1 for variadic
  bool aggregate;
};
const std::vector<BuiltinFunction>& builtin_functions();

}  // namespace squirrelkit
