#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squirrelkit/data_type.h"

namespace squirrelkit {

// Grammar productions. The same tags serve as IR types; kUnknown only ever
// appears on IR nodes introduced while reducing wide productions.
#define SQUIRRELKIT_NODE_KINDS(X) \
  X(Unknown)                      \
  /* statements */                \
  X(SelectStmt)                   \
  X(CompoundSelect)               \
  X(WithSelect)                   \
  X(CreateTableStmt)              \
  X(CreateTableAsStmt)            \
  X(CreateVirtualTableStmt)       \
  X(CreateViewStmt)               \
  X(CreateIndexStmt)              \
  X(CreateTriggerStmt)            \
  X(InsertStmt)                   \
  X(UpdateStmt)                   \
  X(DeleteStmt)                   \
  X(DropTableStmt)                \
  X(DropViewStmt)                 \
  X(DropIndexStmt)                \
  X(DropTriggerStmt)              \
  X(AlterTableStmt)               \
  X(PragmaStmt)                   \
  X(TransactionStmt)              \
  X(ExplainStmt)                  \
  /* select */                    \
  X(SelectClause)                 \
  X(DistinctOpt)                  \
  X(SelectList)                   \
  X(ResultColumn)                 \
  X(Star)                         \
  X(TableStar)                    \
  X(FromClause)                   \
  X(JoinSource)                   \
  X(TableRef)                     \
  X(SubqueryRef)                  \
  X(IndexedRef)                   \
  X(JoinedRef)                    \
  X(OnClause)                     \
  X(UsingClause)                  \
  X(UsingColumnList)              \
  X(WhereClause)                  \
  X(SelectTail)                   \
  X(GroupByClause)                \
  X(HavingClause)                 \
  X(OrderByClause)                \
  X(OrderList)                    \
  X(OrderTerm)                    \
  X(LimitClause)                  \
  X(WithClause)                   \
  X(CteList)                      \
  X(Cte)                          \
  X(CteColumns)                   \
  X(CteColumnList)                \
  /* ddl */                       \
  X(TableBody)                    \
  X(ColumnDefList)                \
  X(ColumnDef)                    \
  X(ColumnConstraintList)         \
  X(ColumnConstraint)             \
  X(ForeignRef)                   \
  X(RefColumns)                   \
  X(RefColumnList)                \
  X(TableConstraintList)          \
  X(TableConstraint)              \
  X(ConstraintColumnList)         \
  X(ViewColumns)                  \
  X(ViewColumnList)               \
  X(IndexedColumnList)            \
  X(WhenClause)                   \
  X(TriggerBody)                  \
  X(ModuleArgList)                \
  X(ModuleArg)                    \
  X(AddColumn)                    \
  /* dml */                       \
  X(InsertColumns)                \
  X(InsertColumnList)             \
  X(ValuesClause)                 \
  X(ValueRowList)                 \
  X(ValueRow)                     \
  X(DefaultValues)                \
  X(Upsert)                       \
  X(ConflictTarget)               \
  X(UpsertAction)                 \
  X(SetList)                      \
  X(SetItem)                      \
  /* expressions */               \
  X(Expr)                         \
  X(ExprList)                     \
  X(FunctionCall)                 \
  X(WindowCall)                   \
  X(WindowSpec)                   \
  X(PartitionBy)                  \
  X(CaseExpr)                     \
  X(WhenList)                     \
  X(WhenThen)                     \
  X(ElseClause)                   \
  X(ColumnRef)                    \
  X(QualifiedColumnRef)           \
  X(RowColumnRef)                 \
  X(KeywordLiteral)               \
  /* data leaves */               \
  X(Table)                        \
  X(Column)                       \
  X(Index)                        \
  X(View)                         \
  X(Trigger)                      \
  X(Function)                     \
  X(Alias)                        \
  X(IntLiteral)                   \
  X(FloatLiteral)                 \
  X(StringLiteral)

enum class NodeKind : unsigned char {
#define SQUIRRELKIT_ENUM(name) k##name,
  SQUIRRELKIT_NODE_KINDS(SQUIRRELKIT_ENUM)
#undef SQUIRRELKIT_ENUM
};

std::string_view kind_name(NodeKind kind);
std::optional<NodeKind> kind_from_name(std::string_view name);
// Leaves that carry an identifier or literal.
bool is_data_leaf_kind(NodeKind kind);
bool is_statement_kind(NodeKind kind);
// Productions whose child count varies (comma lists and the like).
bool is_list_kind(NodeKind kind);

struct AstNode {
  NodeKind kind = NodeKind::kUnknown;
  // Fixed slots per production; a null slot is an absent optional part.
  std::vector<std::unique_ptr<AstNode>> children;
  // keywords[i] precedes children[i]; keywords.back() follows the last child.
  // Always children.size() + 1 entries. Each entry is zero or more tokens
  // separated by single spaces.
  std::vector<std::string> keywords;
  // Source lexeme of identifier/literal leaves, empty otherwise.
  std::string token_text;
  std::optional<DataType> data_type;

  bool is_data_leaf() const { return is_data_leaf_kind(kind); }
};

using AstPtr = std::unique_ptr<AstNode>;

struct AstProgram {
  std::vector<AstPtr> statements;
};

// Space-separated token rendering of an AST (keywords interleaved with child
// renderings).
std::string render_ast(const AstNode& node);
std::string render_ast(const AstProgram& program);

}  // namespace squirrelkit
