#include <algorithm>
#include <string>

#include "squirrelkit/grammar.h"

namespace squirrelkit {
namespace {

constexpr int kAnySlot = -1;

struct AnnotationRule {
  NodeKind parent;
  int slot;
  NodeKind leaf;
  DataType type;
};

using K = NodeKind;

// (parent production, child slot, leaf kind) -> refined type. kAnySlot is used
// for list productions whose items are all alike.
constexpr AnnotationRule kRules[] = {
    {K::kCreateTableStmt, 0, K::kTable, dt::kCreateTable},
    {K::kCreateTableAsStmt, 0, K::kTable, dt::kCreateTable},
    {K::kCreateVirtualTableStmt, 0, K::kTable, dt::kCreateTable},
    {K::kTableRef, 0, K::kTable, dt::kUseAnyTable},
    {K::kQualifiedColumnRef, 0, K::kTable, dt::kUseFromTable},
    {K::kTableStar, 0, K::kTable, dt::kUseFromTable},
    {K::kForeignRef, 0, K::kTable, dt::kUseAnyTable},
    {K::kCreateIndexStmt, 1, K::kTable, dt::kUseAnyTable},
    {K::kCreateTriggerStmt, 1, K::kTable, dt::kUseAnyTable},
    {K::kInsertStmt, 0, K::kTable, dt::kUseAnyTable},
    {K::kUpdateStmt, 0, K::kTable, dt::kUseAnyTable},
    {K::kDeleteStmt, 0, K::kTable, dt::kUseAnyTable},
    {K::kAlterTableStmt, 0, K::kTable, dt::kUseAnyTable},
    {K::kDropTableStmt, 0, K::kTable, dt::kDropTable},
    {K::kPragmaStmt, 0, K::kTable, dt::kUsePragmaTable},

    {K::kCreateViewStmt, 0, K::kView, dt::kCreateView},
    {K::kDropViewStmt, 0, K::kView, dt::kDropView},

    {K::kCreateIndexStmt, 0, K::kIndex, dt::kCreateIndex},
    {K::kIndexedRef, 1, K::kIndex, dt::kUseAnyIndex},
    {K::kDropIndexStmt, 0, K::kIndex, dt::kDropIndex},

    {K::kCreateTriggerStmt, 0, K::kTrigger, dt::kCreateTrigger},
    {K::kDropTriggerStmt, 0, K::kTrigger, dt::kDropTrigger},

    {K::kColumnDef, 0, K::kColumn, dt::kCreateColumn},
    {K::kModuleArg, 0, K::kColumn, dt::kCreateColumn},
    {K::kViewColumnList, kAnySlot, K::kColumn, dt::kCreateViewColumn},
    {K::kColumnRef, 0, K::kColumn, dt::kUseAnyColumn},
    {K::kRowColumnRef, 0, K::kColumn, dt::kUseAnyColumn},
    {K::kUsingColumnList, kAnySlot, K::kColumn, dt::kUseAnyColumn},
    {K::kInsertColumnList, kAnySlot, K::kColumn, dt::kUseAnyColumn},
    {K::kConstraintColumnList, kAnySlot, K::kColumn, dt::kUseAnyColumn},
    {K::kRefColumnList, kAnySlot, K::kColumn, dt::kUseAnyColumn},
    {K::kSetItem, 0, K::kColumn, dt::kUseAnyColumn},
    {K::kQualifiedColumnRef, 1, K::kColumn, dt::kUseTableColumn},

    {K::kResultColumn, 1, K::kAlias, dt::kCreateAlias},
    {K::kTableRef, 1, K::kAlias, dt::kCreateAlias},
    {K::kSubqueryRef, 1, K::kAlias, dt::kCreateAlias},
    {K::kCte, 0, K::kAlias, dt::kCreateAlias},
    {K::kCteColumnList, kAnySlot, K::kAlias, dt::kCreateAlias},

    {K::kFunctionCall, 0, K::kFunction, dt::kUseFunction},
};

std::optional<DataType> literal_type(NodeKind leaf) {
  switch (leaf) {
    case K::kIntLiteral:
      return dt::kLiteralInt;
    case K::kFloatLiteral:
      return dt::kLiteralFloat;
    case K::kStringLiteral:
      return dt::kLiteralString;
    default:
      return std::nullopt;
  }
}

const AnnotationRule* find_rule(NodeKind parent, int slot, NodeKind leaf) {
  for (const auto& rule : kRules) {
    if (rule.parent == parent && rule.leaf == leaf && (rule.slot == slot || rule.slot == kAnySlot)) return &rule;
  }
  return nullptr;
}

void annotate_node(AstNode& node) {
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    AstNode* child = node.children[i].get();
    if (!child) continue;
    if (child->is_data_leaf()) {
      if (auto lit = literal_type(child->kind)) {
        child->data_type = lit;
        continue;
      }
      const AnnotationRule* rule = find_rule(node.kind, static_cast<int>(i), child->kind);
      if (!rule) {
        throw InternalError("no annotation rule for " + std::string(kind_name(child->kind)) + " at slot " +
                            std::to_string(i) + " of production " + std::string(kind_name(node.kind)));
      }
      child->data_type = rule->type;
    } else {
      annotate_node(*child);
    }
  }
}

}  // namespace

void annotate(AstProgram& program) {
  for (auto& stmt : program.statements) {
    if (stmt->is_data_leaf()) throw InternalError("statement root is a data leaf");
    annotate_node(*stmt);
  }
}

void check_annotation_rules() {
  for (const auto& rule : kRules) {
    if (!is_declared(rule.type)) {
      throw InternalError("rule for " + std::string(kind_name(rule.parent)) + " emits an undeclared data type");
    }
    if (!is_data_leaf_kind(rule.leaf) || rule.type.is_literal()) {
      throw InternalError("rule for " + std::string(kind_name(rule.parent)) + " targets a non-identifier leaf");
    }
    if (rule.slot == kAnySlot && !is_list_kind(rule.parent)) {
      throw InternalError("wildcard slot on non-list production " + std::string(kind_name(rule.parent)));
    }
  }
  for (auto leaf : {K::kTable, K::kColumn, K::kIndex, K::kView, K::kTrigger, K::kFunction, K::kAlias}) {
    const bool covered =
        std::any_of(std::begin(kRules), std::end(kRules), [&](const AnnotationRule& r) { return r.leaf == leaf; });
    if (!covered) throw InternalError("no annotation rule covers leaf " + std::string(kind_name(leaf)));
  }
  for (auto leaf : {K::kIntLiteral, K::kFloatLiteral, K::kStringLiteral}) {
    auto t = literal_type(leaf);
    if (!t || !t->is_literal() || t->role != DataRole::kUse || t->scope != DataScope::kNone) {
      throw InternalError("literal leaf " + std::string(kind_name(leaf)) + " has a non-literal type");
    }
  }
}

}  // namespace squirrelkit
