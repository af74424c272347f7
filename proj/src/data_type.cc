#include "squirrelkit/data_type.h"

namespace squirrelkit {

std::string_view DataType::name() const {
  for (const auto& entry : kDataTypes)
    if (entry.type == *this) return entry.name;
  return "Undeclared";
}

std::string_view DataType::kind_name() const {
  switch (kind) {
    case DataKind::kTable: return "TableName";
    case DataKind::kColumn: return "ColumnName";
    case DataKind::kIndex: return "IndexName";
    case DataKind::kView: return "ViewName";
    case DataKind::kTrigger: return "TriggerName";
    case DataKind::kFunctionName: return "FunctionName";
    case DataKind::kAlias: return "AliasName";
    case DataKind::kLiteralString: return "StringLiteral";
    case DataKind::kLiteralInt: return "IntLiteral";
    case DataKind::kLiteralFloat: return "FloatLiteral";
  }
  return "?";
}

bool is_declared(const DataType& t) {
  for (const auto& entry : kDataTypes)
    if (entry.type == t) return true;
  return false;
}

std::optional<DataType> data_type_from_name(std::string_view name) {
  for (const auto& entry : kDataTypes)
    if (entry.name == name) return entry.type;
  return std::nullopt;
}

}  // namespace squirrelkit
