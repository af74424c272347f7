#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace squirrelkit {

enum class DataKind : std::uint8_t {
  kTable,
  kColumn,
  kIndex,
  kView,
  kTrigger,
  kFunctionName,
  kAlias,
  kLiteralString,
  kLiteralInt,
  kLiteralFloat,
};

enum class DataRole : std::uint8_t { kDefine, kUse, kDelete };

enum class DataScope : std::uint8_t { kAny, kFromClause, kSameStatement, kNone };

// Refined semantic type of a data-carrying leaf. Only the triples listed in
// kDataTypes below are valid; construct through the named constants.
struct DataType {
  DataKind kind;
  DataRole role;
  DataScope scope;

  friend constexpr bool operator==(const DataType&, const DataType&) = default;

  bool is_literal() const {
    return kind == DataKind::kLiteralString || kind == DataKind::kLiteralInt ||
           kind == DataKind::kLiteralFloat;
  }
  bool is_semantic() const { return !is_literal(); }

  // Refined name, e.g. "UseAnyTable".
  std::string_view name() const;
  // Basic kind name as printed in IR dumps, e.g. "ColumnName".
  std::string_view kind_name() const;
};

namespace dt {
inline constexpr DataType kCreateTable{DataKind::kTable, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kUseAnyTable{DataKind::kTable, DataRole::kUse, DataScope::kAny};
inline constexpr DataType kUseFromTable{DataKind::kTable, DataRole::kUse, DataScope::kFromClause};
inline constexpr DataType kUsePragmaTable{DataKind::kTable, DataRole::kUse, DataScope::kNone};
inline constexpr DataType kDropTable{DataKind::kTable, DataRole::kDelete, DataScope::kNone};
inline constexpr DataType kCreateColumn{DataKind::kColumn, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kCreateViewColumn{DataKind::kColumn, DataRole::kDefine, DataScope::kSameStatement};
inline constexpr DataType kUseAnyColumn{DataKind::kColumn, DataRole::kUse, DataScope::kAny};
inline constexpr DataType kUseTableColumn{DataKind::kColumn, DataRole::kUse, DataScope::kSameStatement};
inline constexpr DataType kCreateIndex{DataKind::kIndex, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kUseAnyIndex{DataKind::kIndex, DataRole::kUse, DataScope::kAny};
inline constexpr DataType kDropIndex{DataKind::kIndex, DataRole::kDelete, DataScope::kNone};
inline constexpr DataType kCreateView{DataKind::kView, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kDropView{DataKind::kView, DataRole::kDelete, DataScope::kNone};
inline constexpr DataType kCreateTrigger{DataKind::kTrigger, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kDropTrigger{DataKind::kTrigger, DataRole::kDelete, DataScope::kNone};
inline constexpr DataType kUseFunction{DataKind::kFunctionName, DataRole::kUse, DataScope::kNone};
inline constexpr DataType kCreateAlias{DataKind::kAlias, DataRole::kDefine, DataScope::kNone};
inline constexpr DataType kLiteralString{DataKind::kLiteralString, DataRole::kUse, DataScope::kNone};
inline constexpr DataType kLiteralInt{DataKind::kLiteralInt, DataRole::kUse, DataScope::kNone};
inline constexpr DataType kLiteralFloat{DataKind::kLiteralFloat, DataRole::kUse, DataScope::kNone};
}  // namespace dt

struct NamedDataType {
  std::string_view name;
  DataType type;
};

// The closed enumeration of refined data types.
inline constexpr std::array<NamedDataType, 21> kDataTypes{{
    {"CreateTable", dt::kCreateTable},
    {"UseAnyTable", dt::kUseAnyTable},
    {"UseFromTable", dt::kUseFromTable},
    {"UsePragmaTable", dt::kUsePragmaTable},
    {"DropTable", dt::kDropTable},
    {"CreateColumn", dt::kCreateColumn},
    {"CreateViewColumn", dt::kCreateViewColumn},
    {"UseAnyColumn", dt::kUseAnyColumn},
    {"UseTableColumn", dt::kUseTableColumn},
    {"CreateIndex", dt::kCreateIndex},
    {"UseAnyIndex", dt::kUseAnyIndex},
    {"DropIndex", dt::kDropIndex},
    {"CreateView", dt::kCreateView},
    {"DropView", dt::kDropView},
    {"CreateTrigger", dt::kCreateTrigger},
    {"DropTrigger", dt::kDropTrigger},
    {"UseFunction", dt::kUseFunction},
    {"CreateAlias", dt::kCreateAlias},
    {"LiteralString", dt::kLiteralString},
    {"LiteralInt", dt::kLiteralInt},
    {"LiteralFloat", dt::kLiteralFloat},
}};

bool is_declared(const DataType& t);
std::optional<DataType> data_type_from_name(std::string_view name);

}  // namespace squirrelkit
