#include "squirrelkit/ast.h"

#include <array>

#include "squirrelkit/grammar.h"

namespace squirrelkit {
namespace {

constexpr std::string_view kKindNames[] = {
#define SQUIRRELKIT_NAME(name) #name,
    SQUIRRELKIT_NODE_KINDS(SQUIRRELKIT_NAME)
#undef SQUIRRELKIT_NAME
};

void render_into(const AstNode& node, std::string& out) {
  if (node.is_data_leaf()) {
    append_fragment(out, node.token_text);
    return;
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    append_fragment(out, node.keywords[i]);
    if (node.children[i]) render_into(*node.children[i], out);
  }
  append_fragment(out, node.keywords.back());
}

}  // namespace

std::string_view kind_name(NodeKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<NodeKind> kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i)
    if (kKindNames[i] == name) return static_cast<NodeKind>(i);
  return std::nullopt;
}

bool is_data_leaf_kind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kTable:
    case NodeKind::kColumn:
    case NodeKind::kIndex:
    case NodeKind::kView:
    case NodeKind::kTrigger:
    case NodeKind::kFunction:
    case NodeKind::kAlias:
    case NodeKind::kIntLiteral:
    case NodeKind::kFloatLiteral:
    case NodeKind::kStringLiteral:
      return true;
    default:
      return false;
  }
}

bool is_statement_kind(NodeKind kind) {
  return kind >= NodeKind::kSelectStmt && kind <= NodeKind::kExplainStmt;
}

bool is_list_kind(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSelectList:
    case NodeKind::kJoinSource:
    case NodeKind::kUsingColumnList:
    case NodeKind::kOrderList:
    case NodeKind::kCteList:
    case NodeKind::kCteColumnList:
    case NodeKind::kColumnDefList:
    case NodeKind::kColumnConstraintList:
    case NodeKind::kRefColumnList:
    case NodeKind::kTableConstraintList:
    case NodeKind::kConstraintColumnList:
    case NodeKind::kViewColumnList:
    case NodeKind::kIndexedColumnList:
    case NodeKind::kTriggerBody:
    case NodeKind::kModuleArgList:
    case NodeKind::kInsertColumnList:
    case NodeKind::kValueRowList:
    case NodeKind::kSetList:
    case NodeKind::kExprList:
    case NodeKind::kWhenList:
      return true;
    default:
      return false;
  }
}

std::string render_ast(const AstNode& node) {
  std::string out;
  render_into(node, out);
  return out;
}

std::string render_ast(const AstProgram& program) {
  std::string out;
  for (const auto& stmt : program.statements) {
    render_into(*stmt, out);
    append_fragment(out, ";");
  }
  return out;
}

}  // namespace squirrelkit
