#include <algorithm>
#include <array>
#include <cctype>

#include "squirrelkit/grammar.h"

namespace squirrelkit {
namespace {

constexpr std::string_view kKeywords[] = {
    "ABORT",      "ACTION",       "ADD",          "AFTER",        "ALL",
    "ALTER",      "ALWAYS",       "ANALYZE",      "AND",          "AS",
    "ASC",        "ATTACH",       "AUTOINCREMENT", "BEFORE",      "BEGIN",
    "BETWEEN",    "BY",           "CASCADE",      "CASE",         "CAST",
    "CHECK",      "COLLATE",      "COLUMN",       "COMMIT",       "CONFLICT",
    "CONSTRAINT", "CREATE",       "CROSS",        "CURRENT",      "CURRENT_DATE",
    "CURRENT_TIME", "CURRENT_TIMESTAMP", "DATABASE", "DEFAULT",    "DEFERRABLE",
    "DEFERRED",   "DELETE",       "DESC",         "DETACH",       "DISTINCT",
    "DO",         "DROP",         "EACH",         "ELSE",         "END",
    "ESCAPE",     "EXCEPT",       "EXCLUDE",      "EXCLUSIVE",    "EXISTS",
    "EXPLAIN",    "FAIL",         "FALSE",        "FILTER",       "FIRST",
    "FOLLOWING",  "FOR",          "FOREIGN",      "FROM",         "FULL",
    "GENERATED",  "GLOB",         "GROUP",        "GROUPS",       "HAVING",
    "IF",         "IGNORE",       "IMMEDIATE",    "IN",           "INDEX",
    "INDEXED",    "INITIALLY",    "INNER",        "INSERT",       "INSTEAD",
    "INTERSECT",  "INTO",         "IS",           "ISNULL",       "JOIN",
    "KEY",        "LAST",         "LEFT",         "LIKE",         "LIMIT",
    "MATCH",      "MATERIALIZED", "NATURAL",      "NO",           "NOT",
    "NOTHING",    "NOTNULL",      "NULL",         "NULLS",        "OF",
    "OFFSET",     "ON",           "OR",           "ORDER",        "OTHERS",
    "OUTER",      "OVER",         "PARTITION",    "PLAN",         "PRAGMA",
    "PRECEDING",  "PRIMARY",      "QUERY",        "RAISE",        "RANGE",
    "RECURSIVE",  "REFERENCES",   "REGEXP",       "REINDEX",      "RELEASE",
    "RENAME",     "REPLACE",      "RESTRICT",     "RETURNING",    "RIGHT",
    "ROLLBACK",   "ROW",          "ROWS",         "SAVEPOINT",    "SELECT",
    "SET",        "TABLE",        "TEMP",         "TEMPORARY",    "THEN",
    "TIES",       "TO",           "TRANSACTION",  "TRIGGER",      "TRUE",
    "UNBOUNDED",  "UNION",        "UNIQUE",       "UPDATE",       "USING",
    "VACUUM",     "VALUES",       "VIEW",         "VIRTUAL",      "WHEN",
    "WHERE",      "WINDOW",       "WITH",         "WITHOUT",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80);
}
bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '$';
}

}  // namespace

bool is_keyword(std::string_view upper_word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), upper_word) != std::end(kKeywords);
}

std::variant<std::vector<Token>, SyntaxError> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  auto fail = [&](std::size_t at, std::string msg) {
    return SyntaxError{at, "token", std::move(msg)};
  };
  while (i < n) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      std::size_t end = sql.find("*/", i + 2);
      i = end == std::string_view::npos ? n : end + 2;
      continue;
    }
    Token tok;
    tok.offset = i;
    if ((c == 'x' || c == 'X') && i + 1 < n && sql[i + 1] == '\'') {
      std::size_t j = i + 2;
      while (j < n && std::isxdigit(static_cast<unsigned char>(sql[j]))) ++j;
      if (j >= n || sql[j] != '\'' || (j - i - 2) % 2 != 0)
        return fail(i, "unrecognized token");
      tok.kind = TokenKind::kBlob;
      tok.text = std::string(sql.substr(i, j + 1 - i));
      i = j + 1;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(sql[j])) ++j;
      std::string word(sql.substr(i, j - i));
      std::string up = upper(word);
      if (is_keyword(up)) {
        tok.kind = TokenKind::kKeyword;
        tok.text = std::move(up);
      } else {
        tok.kind = TokenKind::kIdentifier;
        tok.text = std::move(word);
      }
      i = j;
    } else if (c == '"' || c == '`' || c == '[') {
      const char close = c == '[' ? ']' : c;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= n) return fail(i, "unrecognized token");
        if (sql[j] == close) {
          if (close != ']' && j + 1 < n && sql[j + 1] == close) {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      tok.kind = TokenKind::kIdentifier;
      tok.text = std::string(sql.substr(i, j + 1 - i));
      i = j + 1;
    } else if (c == '\'') {
      std::size_t j = i + 1;
      for (;;) {
        if (j >= n) return fail(i, "unrecognized token");
        if (sql[j] == '\'') {
          if (j + 1 < n && sql[j + 1] == '\'') {
            j += 2;
            continue;
          }
          break;
        }
        ++j;
      }
      tok.kind = TokenKind::kString;
      tok.text = std::string(sql.substr(i, j + 1 - i));
      i = j + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      std::size_t j = i;
      bool is_float = false;
      if (c == '0' && i + 1 < n && (sql[i + 1] == 'x' || sql[i + 1] == 'X')) {
        j = i + 2;
        while (j < n && std::isxdigit(static_cast<unsigned char>(sql[j]))) ++j;
        if (j == i + 2) return fail(i, "unrecognized token");
      } else {
        while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
        if (j < n && sql[j] == '.') {
          is_float = true;
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
        }
        if (j < n && (sql[j] == 'e' || sql[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < n && (sql[k] == '+' || sql[k] == '-')) ++k;
          if (k < n && std::isdigit(static_cast<unsigned char>(sql[k]))) {
            is_float = true;
            j = k;
            while (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) ++j;
          }
        }
      }
      if (j < n && ident_char(sql[j])) return fail(i, "unrecognized token");
      tok.kind = is_float ? TokenKind::kFloat : TokenKind::kInteger;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else if (c == '?' || c == ':' || c == '@' || c == '$') {
      std::size_t j = i + 1;
      while (j < n && ident_char(sql[j])) ++j;
      if (c != '?' && j == i + 1) return fail(i, "unrecognized token");
      tok.kind = TokenKind::kVariable;
      tok.text = std::string(sql.substr(i, j - i));
      i = j;
    } else {
      static constexpr std::array<std::string_view, 10> kMulti = {
          "->>", "||", "<<", ">>", "<=", ">=", "==", "!=", "<>", "->"};
      tok.kind = TokenKind::kPunct;
      for (std::string_view op : kMulti) {
        if (sql.substr(i, op.size()) == op) {
          tok.text = std::string(op);
          break;
        }
      }
      if (tok.text.empty()) {
        static constexpr std::string_view kSingle = "(),.;+-*/%&|~<>=";
        if (kSingle.find(c) == std::string_view::npos) return fail(i, "unrecognized token");
        tok.text = std::string(1, c);
      }
      i += tok.text.size();
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.offset = n;
  tokens.push_back(end);
  return tokens;
}

bool tokens_equal(std::string_view a, std::string_view b) {
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  if (ta.index() != 0 || tb.index() != 0) return false;
  const auto& va = std::get<0>(ta);
  const auto& vb = std::get<0>(tb);
  if (va.size() != vb.size()) return false;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i].kind != vb[i].kind || va[i].text != vb[i].text) return false;
  }
  return true;
}

namespace {

// True when the text ends in a bare numeric literal such as "12" (so a
// following '.' belongs to the number rather than acting as a qualifier).
bool ends_with_number(std::string_view text) {
  std::size_t i = text.size();
  bool digits_only = true;
  while (i > 0) {
    const unsigned char c = static_cast<unsigned char>(text[i - 1]);
    if (!std::isalnum(c) && c != '_' && c != '$') break;
    if (!std::isdigit(c)) digits_only = false;
    --i;
  }
  return i < text.size() && digits_only;
}

}  // namespace

void append_fragment(std::string& out, std::string_view fragment) {
  if (fragment.empty()) return;
  if (!out.empty()) {
    const char last = out.back();
    const char first = fragment.front();
    const bool dot_op = fragment.size() == 1 || !std::isdigit(static_cast<unsigned char>(fragment[1]));
    const bool after_dot_op = last == '.' && !ends_with_number(std::string_view(out).substr(0, out.size() - 1));
    const bool tight = first == ',' || first == ')' || first == ';' || (first == '.' && dot_op) ||
                       last == '(' || after_dot_op;
    if (!tight) out.push_back(' ');
  }
  out.append(fragment);
}

}  // namespace squirrelkit
