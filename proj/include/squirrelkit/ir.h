#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "squirrelkit/ast.h"
#include "squirrelkit/data_type.h"
#include "squirrelkit/grammar.h"

namespace squirrelkit {

struct IrNode {
  NodeKind ir_type = NodeKind::kUnknown;
  std::string op_prefix;
  std::string op_mid;
  std::string op_suffix;
  std::unique_ptr<IrNode> left;
  std::unique_ptr<IrNode> right;
  std::optional<std::string> data_value;
  std::optional<DataType> data_type;
  std::uint64_t node_id = 0;

  bool is_data() const { return data_value.has_value(); }
  bool has_ops() const { return !op_prefix.empty() || !op_mid.empty() || !op_suffix.empty(); }
};

using IrPtr = std::unique_ptr<IrNode>;

struct IrProgram {
  std::vector<IrPtr> statements;
};

// Allocates a node with a process-unique id.
IrPtr make_ir(NodeKind type);
IrPtr make_data_ir(NodeKind type, std::string value, DataType data_type);

IrPtr ast_to_ir(const AstNode& node);
IrProgram ast_to_ir(const AstProgram& program);

std::string ir_to_sql(const IrNode& node);
std::string ir_to_sql(const IrProgram& program);

// parse + annotate + ast_to_ir.
std::variant<IrProgram, SyntaxError> sql_to_ir(std::string_view sql);

IrPtr deep_copy(const IrNode& node);
IrProgram deep_copy(const IrProgram& program);

// Compares type, operator parts, data value and data type; ignores ids.
bool structural_equal(const IrNode* a, const IrNode* b);
bool structural_equal(const IrProgram& a, const IrProgram& b);

std::size_t node_count(const IrNode& node);
std::size_t node_count(const IrProgram& program);

// One "Vn = (type, l=, r=, op=, d=)" line per node, post-order.
std::string dump_ir(const IrProgram& program);

// Line-oriented JSON form used for persistence.
std::string serialize_ir(const IrNode& node);
IrPtr deserialize_ir(std::string_view text);

template <typename Node, typename F>
void for_each_preorder(Node& node, F&& f) {
  f(node);
  if (node.left) for_each_preorder(*node.left, f);
  if (node.right) for_each_preorder(*node.right, f);
}

template <typename Node, typename F>
void for_each_postorder(Node& node, F&& f) {
  if (node.left) for_each_postorder(*node.left, f);
  if (node.right) for_each_postorder(*node.right, f);
  f(node);
}

}  // namespace squirrelkit
