#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "squirrelkit/ast.h"

namespace squirrelkit {

enum class TokenKind {
  kKeyword,
  kIdentifier,
  kInteger,
  kFloat,
  kString,
  kBlob,
  kVariable,
  kPunct,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  // Keywords are stored upper-cased; everything else keeps its lexeme.
  std::string text;
  std::size_t offset = 0;
};

struct SyntaxError {
  std::size_t offset = 0;
  std::string expected;
  std::string message;
};

// Tokenizes SQLite-dialect SQL. Comments and whitespace are dropped.
std::variant<std::vector<Token>, SyntaxError> tokenize(std::string_view sql);

bool is_keyword(std::string_view upper_word);

// Parses a semicolon-separated sequence of statements. The empty program
// (no statements) is a valid result.
std::variant<AstProgram, SyntaxError> parse(std::string_view sql);

// Raised when an AST contains a data leaf at a position the annotation rule
// table does not cover.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Assigns a refined DataType to every identifier/literal leaf, determined by
// the leaf's (parent production, child slot).
void annotate(AstProgram& program);

// Verifies the annotation table: every entry is a declared triple, every
// data-leaf kind is covered, literal kinds map to literal types. Throws
// InternalError describing the first violation.
void check_annotation_rules();

// Token-level equality with whitespace ignored and keywords compared
// case-insensitively.
bool tokens_equal(std::string_view a, std::string_view b);

// Appends one fragment to rendered SQL, inserting a single space unless the
// boundary involves punctuation: no space before , ) . ; and none after ( .
void append_fragment(std::string& out, std::string_view fragment);

}  // namespace squirrelkit
