#include "squirrelkit/instantiator.h"

#include <algorithm>
#include <deque>
#include <iomanip>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace squirrelkit {
namespace {

bool is_schema_kind(DataKind k) {
  return k == DataKind::kTable || k == DataKind::kView || k == DataKind::kIndex || k == DataKind::kTrigger;
}

using Key = std::tuple<std::size_t, int, std::size_t>;

Key key_of(const DepNode& n) { return {n.statement, n.rank, n.order}; }

// Nested blocks may see the enclosing block's names only where SQL allows a
// correlated reference.
bool transparent_block(const IrNode* block) {
  switch (block->ir_type) {
    case NodeKind::kSelectStmt:
    case NodeKind::kCompoundSelect:
    case NodeKind::kWithSelect:
    case NodeKind::kUpdateStmt:
    case NodeKind::kDeleteStmt:
    case NodeKind::kExplainStmt:
      return true;
    default:
      return false;
  }
}

bool visible(const DepNode& candidate, const DepNode& node) {
  const auto& cb = candidate.blocks;
  const auto& nb = node.blocks;
  if (cb.size() > nb.size() || !std::equal(cb.begin(), cb.end(), nb.begin())) return false;
  return cb.size() == nb.size() || transparent_block(cb.back());
}

std::size_t list_items(const IrNode* node) {
  if (!node) return 0;
  if (node->ir_type == NodeKind::kExprList || node->ir_type == NodeKind::kUnknown)
    return list_items(node->left.get()) + list_items(node->right.get());
  return 1;
}

struct Collector {
  DependencyGraph& graph;
  std::size_t statement = 0;
  std::size_t order = 0;
  std::vector<const IrNode*> blocks;
  int aggregate_context = 0;
  int scalar_context = 0;

  void walk(IrNode& node, const IrNode* parent) {
    if (node.data_value) {
      if (!node.data_type) return;
      if (node.data_type->is_literal()) {
        graph.literals.push_back(&node);
        return;
      }
      DepNode dn;
      dn.ir = &node;
      dn.type = *node.data_type;
      dn.statement = statement;
      dn.rank = is_schema_kind(dn.type.kind) ? 0 : 1;
      dn.order = order++;
      dn.blocks = blocks;
      if (dn.type.kind == DataKind::kFunctionName && parent) {
        const IrNode* args = parent->right.get();
        dn.arity = args && args->ir_type == NodeKind::kStar ? -1 : static_cast<int>(list_items(args));
        dn.aggregate_ok = aggregate_context > 0 && scalar_context == 0;
      }
      graph.nodes.push_back(std::move(dn));
      return;
    }
    const bool block = node.ir_type == NodeKind::kSelectStmt && !blocks.empty() && blocks.back() != &node;
    if (block) blocks.push_back(&node);
    const bool agg = node.ir_type == NodeKind::kSelectClause || node.ir_type == NodeKind::kHavingClause ||
                     node.ir_type == NodeKind::kOrderByClause;
    const bool scalar = node.ir_type == NodeKind::kWhereClause || node.ir_type == NodeKind::kGroupByClause ||
                        node.ir_type == NodeKind::kOnClause || node.ir_type == NodeKind::kFunctionCall ||
                        node.ir_type == NodeKind::kFromClause;
    // A nested query starts a fresh aggregate context.
    int saved_agg = aggregate_context, saved_scalar = scalar_context;
    if (node.ir_type == NodeKind::kSelectStmt) aggregate_context = scalar_context = 0;
    if (agg) ++aggregate_context;
    if (node.left) walk(*node.left, &node);
    if (scalar) ++scalar_context;
    if (node.right) walk(*node.right, &node);
    if (scalar) --scalar_context;
    if (agg) --aggregate_context;
    if (node.ir_type == NodeKind::kSelectStmt) {
      aggregate_context = saved_agg;
      scalar_context = saved_scalar;
    }
    if (block) blocks.pop_back();
  }
};

constexpr std::string_view kNamePool[] = {"v0", "v1", "v2", "v3"};

// Values are unsigned; a sign comes from the skeleton's unary operator, so the
// rendered query parses back to the same skeleton.
std::string random_literal(const DataType& type, Rng& rng, double p_random) {
  static constexpr std::string_view kInts[] = {"0", "1", "2", "10", "0xFFFF", "2147483648"};
  static constexpr std::string_view kFloats[] = {"0.0", "1.0", "1.5"};
  static constexpr std::string_view kStrings[] = {"'a'", "'ab'", "'11111111'"};
  const bool fresh = rng.chance(p_random);
  switch (type.kind) {
    case DataKind::kLiteralInt:
      if (fresh) return std::to_string(static_cast<std::int64_t>(rng.next() % 1000001));
      return std::string(kInts[rng.below(std::size(kInts))]);
    case DataKind::kLiteralFloat:
      if (fresh) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(3) << (rng.uniform() * 1000.0);
        std::string s = os.str();
        if (s.find_first_of(".e") == std::string::npos) s += ".0";
        return s;
      }
      return std::string(kFloats[rng.below(std::size(kFloats))]);
    default: {
      if (fresh) {
        std::string s = "'";
        const std::size_t len = 1 + rng.below(12);
        for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<char>('a' + rng.below(26)));
        return s + "'";
      }
      return std::string(kStrings[rng.below(std::size(kStrings))]);
    }
  }
}

struct NameInfo {
  DataKind kind;
  Key defined;
  std::optional<Key> dropped;
  std::string owner;  // for elements such as columns
};

class Instantiator {
 public:
  Instantiator(DependencyGraph& graph, Rng& rng, const InstantiateOptions& options)
      : graph_(graph), rng_(rng), options_(options) {}

  std::optional<InstantiateFailure> run() {
    for (IrNode* lit : graph_.literals) lit->data_value = random_literal(*lit->data_type, rng_, options_.p_random_literal);

    std::vector<int> roots = graph_.roots();
    std::sort(roots.begin(), roots.end(), [&](int a, int b) { return key_of(graph_.nodes[a]) < key_of(graph_.nodes[b]); });
    for (int root : roots) {
      std::deque<int> queue{root};
      while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        if (auto failure = fill(id)) return failure;
        std::vector<int> kids = graph_.nodes[id].children;
        std::sort(kids.begin(), kids.end(), [&](int a, int b) { return key_of(graph_.nodes[a]) < key_of(graph_.nodes[b]); });
        queue.insert(queue.end(), kids.begin(), kids.end());
      }
    }
    return audit();
  }

 private:
  std::string fresh_name() { return "v" + std::to_string(++counter_); }

  // A table, view, index or trigger cannot be named inside the statement that
  // creates it; its columns can (CHECK, generated columns).
  bool alive(const std::string& name, const Key& at, bool as_owner = false) const {
    auto it = names_.find(name);
    if (it == names_.end()) return false;
    if (!(it->second.defined < at)) return false;
    if (!as_owner && is_schema_kind(it->second.kind) && std::get<0>(it->second.defined) == std::get<0>(at)) return false;
    if (it->second.dropped && *it->second.dropped < at) return false;
    if (!it->second.owner.empty()) return alive(it->second.owner, at, true);
    return true;
  }

  void define(const std::string& name, const DepNode& n, const std::string& owner) {
    names_[name] = NameInfo{n.type.kind, key_of(n), std::nullopt, owner};
    data_map_[n.type.kind].push_back(name);
    if (!owner.empty()) relation_map_[owner].push_back(name);
  }

  std::optional<InstantiateFailure> fill(int id) {
    DepNode& n = graph_.nodes[id];
    const Key at = key_of(n);
    if (n.parent < 0) {
      switch (n.type.role) {
        case DataRole::kDefine:
          n.ir->data_value = fresh_name();
          define(*n.ir->data_value, n, "");
          return std::nullopt;
        case DataRole::kUse: {
          auto pick = pick_unparented_use(n, at);
          if (!pick) return InstantiateFailure::kUseBeforeDef;
          n.ir->data_value = *pick;
          return std::nullopt;
        }
        case DataRole::kDelete:
          return InstantiateFailure::kDeleteBeforeDef;
      }
    }
    const DepNode& p = graph_.nodes[n.parent];
    const std::string& parent_name = *p.ir->data_value;
    const RelationRule* rule = n.rule >= 0 ? &rules_at(n.rule) : nullptr;
    switch (n.type.role) {
      case DataRole::kDefine:
        n.ir->data_value = fresh_name();
        define(*n.ir->data_value, n, parent_name);
        return std::nullopt;
      case DataRole::kUse: {
        if (!rule || rule->gamma == Relation::kIsA) {
          n.ir->data_value = parent_name;
          return std::nullopt;
        }
        std::vector<std::string> elements;
        if (auto it = relation_map_.find(parent_name); it != relation_map_.end()) {
          for (const auto& e : it->second)
            if (alive(e, at)) elements.push_back(e);
        }
        if (elements.empty()) return InstantiateFailure::kEmptyRelation;
        n.ir->data_value = elements[rng_.below(elements.size())];
        return std::nullopt;
      }
      case DataRole::kDelete: {
        n.ir->data_value = parent_name;
        if (auto it = names_.find(parent_name); it != names_.end()) {
          if (!it->second.dropped || at < *it->second.dropped) it->second.dropped = at;
        }
        for (auto& [kind, list] : data_map_) list.erase(std::remove(list.begin(), list.end(), parent_name), list.end());
        relation_map_.erase(parent_name);
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> pick_unparented_use(const DepNode& n, const Key& at) {
    std::vector<std::string> pool;
    if (n.type.kind == DataKind::kFunctionName) {
      for (const auto& f : builtin_functions()) {
        if (f.aggregate && !n.aggregate_ok) continue;
        if (n.arity == -1) {
          if (f.name == "count") pool.emplace_back(f.name);
          continue;
        }
        if (n.arity < f.min_args || (f.max_args >= 0 && n.arity > f.max_args)) continue;
        pool.emplace_back(f.name);
      }
    } else {
      std::vector<DataKind> kinds{n.type.kind};
      if (n.type.kind == DataKind::kTable) kinds.push_back(DataKind::kView);
      for (DataKind k : kinds) {
        auto it = data_map_.find(k);
        if (it == data_map_.end()) continue;
        for (const auto& name : it->second)
          if (alive(name, at)) pool.push_back(name);
      }
    }
    if (pool.empty()) return std::nullopt;
    return pool[rng_.below(pool.size())];
  }

  // Lifetime check over every filled use and delete.
  std::optional<InstantiateFailure> audit() const {
    for (const auto& n : graph_.nodes) {
      if (n.type.role == DataRole::kDefine || n.type.kind == DataKind::kFunctionName) continue;
      const std::string& name = *n.ir->data_value;
      auto it = names_.find(name);
      if (it == names_.end()) return InstantiateFailure::kUseBeforeDef;
      const Key at = key_of(n);
      if (!(it->second.defined < at)) return InstantiateFailure::kUseBeforeDef;
      if (n.type.role == DataRole::kDelete) {
        if (it->second.dropped && *it->second.dropped < at) return InstantiateFailure::kUseAfterDelete;
        continue;
      }
      if (!alive(name, at)) return InstantiateFailure::kUseAfterDelete;
    }
    return std::nullopt;
  }

  const RelationRule& rules_at(int index) const {
    return (*(graph_.rules ? graph_.rules : &default_rules()))[static_cast<std::size_t>(index)];
  }

  DependencyGraph& graph_;
  Rng& rng_;
  const InstantiateOptions& options_;
  std::size_t counter_ = 0;
  std::unordered_map<std::string, NameInfo> names_;
  std::map<DataKind, std::vector<std::string>> data_map_;
  std::unordered_map<std::string, std::vector<std::string>> relation_map_;
};

}  // namespace

std::vector<int> DependencyGraph::roots() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].parent < 0) out.push_back(static_cast<int>(i));
  return out;
}

std::string DependencyGraph::edge_list() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.parent < 0) continue;
    os << 'x' << (n.parent + 1) << " -> x" << (i + 1) << ' ' << n.type.name() << '\n';
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].parent < 0) os << 'x' << (i + 1) << " root " << nodes[i].type.name() << '\n';
  }
  return os.str();
}

std::vector<int> rule_candidates(const DependencyGraph& graph, int node, const RelationRule& rule) {
  const DepNode& n = graph.nodes[static_cast<std::size_t>(node)];
  const Key at = key_of(n);
  std::vector<int> out;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const DepNode& c = graph.nodes[i];
    if (static_cast<int>(i) == node || !(key_of(c) < at)) continue;
    if (std::find(rule.alpha.begin(), rule.alpha.end(), c.type) == rule.alpha.end()) continue;
    if (rule.scope == RuleScope::kInterStmt) {
      if (c.statement >= n.statement) continue;
    } else if (c.statement != n.statement || !visible(c, n)) {
      continue;
    }
    out.push_back(static_cast<int>(i));
  }
  if (rule.choice == RuleChoice::kNearest && !out.empty()) {
    // Closest in rendered order, preferring one that precedes the node.
    int best = -1;
    for (int c : out) {
      const auto& cn = graph.nodes[static_cast<std::size_t>(c)];
      if (cn.order < n.order && (best < 0 || cn.order > graph.nodes[static_cast<std::size_t>(best)].order)) best = c;
    }
    if (best < 0) {
      for (int c : out) {
        if (best < 0 || graph.nodes[static_cast<std::size_t>(c)].order < graph.nodes[static_cast<std::size_t>(best)].order)
          best = c;
      }
    }
    out = {best};
  }
  return out;
}

DependencyGraph build_dependency_graph(IrProgram& skeleton, const RuleSet& rules, Rng& rng,
                                       const ParentChooser& chooser) {
  DependencyGraph graph;
  graph.rules = &rules;
  Collector collector{graph, 0, 0, {}, 0, 0};
  for (std::size_t s = 0; s < skeleton.statements.size(); ++s) {
    collector.statement = s;
    collector.blocks = {skeleton.statements[s].get()};
    collector.walk(*skeleton.statements[s], nullptr);
  }
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const int id = static_cast<int>(i);
    std::vector<std::pair<int, std::vector<int>>> options;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (!(rules[r].beta == graph.nodes[i].type)) continue;
      auto candidates = rule_candidates(graph, id, rules[r]);
      if (!candidates.empty()) options.emplace_back(static_cast<int>(r), std::move(candidates));
    }
    if (options.empty()) continue;
    auto& [rule, candidates] = options[rng.below(options.size())];
    const int parent = chooser ? chooser(id, candidates) : candidates[rng.below(candidates.size())];
    graph.nodes[i].parent = parent;
    graph.nodes[i].rule = rule;
    graph.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
  }
  return graph;
}

std::string_view failure_name(InstantiateFailure failure) {
  switch (failure) {
    case InstantiateFailure::kUseBeforeDef:
      return "use-before-def";
    case InstantiateFailure::kDeleteBeforeDef:
      return "delete-before-def";
    case InstantiateFailure::kEmptyRelation:
      return "empty-relation";
    case InstantiateFailure::kUseAfterDelete:
      return "use-after-delete";
  }
  return "unknown";
}

InstantiateResult instantiate(DependencyGraph& graph, IrProgram& skeleton, Rng& rng, const InstantiateOptions& options) {
  InstantiateResult result;
  Instantiator inst(graph, rng, options);
  if (auto failure = inst.run()) {
    result.failure = failure;
    return result;
  }
  result.sql = ir_to_sql(skeleton);
  return result;
}

InstantiateResult retry_instantiate(const IrProgram& skeleton, const RuleSet& rules, Rng& rng, int max_tries,
                                    const InstantiateOptions& options) {
  InstantiateResult result;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    IrProgram copy = deep_copy(skeleton);
    DependencyGraph graph = build_dependency_graph(copy, rules, rng);
    ++result.graphs_built;
    InstantiateResult one = instantiate(graph, copy, rng, options);
    if (one.ok()) {
      result.sql = std::move(one.sql);
      result.failure.reset();
      return result;
    }
    result.failure = one.failure;
  }
  return result;
}

std::string fill_randomly(const IrProgram& skeleton, Rng& rng) {
  IrProgram copy = deep_copy(skeleton);
  for (auto& stmt : copy.statements) {
    for_each_preorder(*stmt, [&](IrNode& n) {
      if (!n.data_value || !n.data_type) return;
      if (n.data_type->is_literal()) {
        n.data_value = random_literal(*n.data_type, rng, 0.1);
      } else if (n.data_type->kind == DataKind::kFunctionName) {
        const auto& fns = builtin_functions();
        n.data_value = std::string(fns[rng.below(fns.size())].name);
      } else {
        n.data_value = std::string(kNamePool[rng.below(std::size(kNamePool))]);
      }
    });
  }
  return ir_to_sql(copy);
}

const std::vector<BuiltinFunction>& builtin_functions() {
  static const std::vector<BuiltinFunction> fns = {
      {"abs", 1, 1, false},          {"changes", 0, 0, false},      {"char", 1, -1, false},
      {"coalesce", 2, -1, false},    {"hex", 1, 1, false},          {"ifnull", 2, 2, false},
      {"iif", 3, 3, false},          {"instr", 2, 2, false},        {"last_insert_rowid", 0, 0, false},
      {"length", 1, 1, false},       {"likely", 1, 1, false},       {"lower", 1, 1, false},
      {"ltrim", 1, 2, false},        {"max", 2, -1, false},         {"min", 2, -1, false},
      {"nullif", 2, 2, false},       {"printf", 1, -1, false},      {"quote", 1, 1, false},
      {"random", 0, 0, false},       {"randomblob", 1, 1, false},   {"replace", 3, 3, false},
      {"round", 1, 2, false},        {"rtrim", 1, 2, false},        {"sign", 1, 1, false},
      {"substr", 2, 3, false},       {"total_changes", 0, 0, false}, {"trim", 1, 2, false},
      {"typeof", 1, 1, false},       {"unicode", 1, 1, false},      {"unlikely", 1, 1, false},
      {"upper", 1, 1, false},        {"zeroblob", 1, 1, false},     {"date", 0, -1, false},
      {"datetime", 0, -1, false},    {"julianday", 0, -1, false},   {"strftime", 1, -1, false},
      {"json", 1, 1, false},         {"json_array", 0, -1, false},  {"json_extract", 2, -1, false},
      {"json_type", 1, 2, false},    {"json_valid", 1, 1, false},   {"sqrt", 1, 1, false},
      {"floor", 1, 1, false},        {"ceil", 1, 1, false},         {"pow", 2, 2, false},
      {"avg", 1, 1, true},           {"count", 0, 1, true},         {"group_concat", 1, 2, true},
      {"max", 1, 1, true},           {"min", 1, 1, true},           {"sum", 1, 1, true},
      {"total", 1, 1, true},
  };
  return fns;
}

}  // namespace squirrelkit
