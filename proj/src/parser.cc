#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>

#include "squirrelkit/grammar.h"

namespace squirrelkit {
namespace {

struct ParseFailure {
  SyntaxError error;
};

AstPtr make(NodeKind kind, std::vector<AstPtr> children, std::vector<std::string> keywords) {
  auto node = std::make_unique<AstNode>();
  node->kind = kind;
  node->children = std::move(children);
  node->keywords = std::move(keywords);
  node->keywords.resize(node->children.size() + 1);
  return node;
}

// Variadic convenience: make_node(kind, {kw...}, child...)
template <typename... Children>
AstPtr node(NodeKind kind, std::vector<std::string> keywords, Children&&... children) {
  std::vector<AstPtr> slots;
  (slots.push_back(std::forward<Children>(children)), ...);
  return make(kind, std::move(slots), std::move(keywords));
}

AstPtr keyword_leaf(NodeKind kind, std::string text) {
  return make(kind, {}, {std::move(text)});
}

AstPtr data_leaf(NodeKind kind, std::string text) {
  auto leaf = make(kind, {}, {""});
  leaf->token_text = std::move(text);
  return leaf;
}

// Builds a keyword string token by token with the rendering spacing rules.
class Words {
 public:
  Words() = default;
  explicit Words(std::string_view first) { add(first); }
  Words& add(std::string_view w) {
    append_fragment(text_, w);
    return *this;
  }
  const std::string& str() const { return text_; }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

constexpr std::array<std::string_view, 6> kTablePragmas = {
    "table_info", "table_xinfo", "index_list", "foreign_key_list", "index_xinfo", "index_info"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  AstProgram program() {
    AstProgram prog;
    while (!at_end()) {
      if (accept_punct(";")) continue;
      prog.statements.push_back(statement());
      if (!at_end() && !accept_punct(";")) fail("';'");
    }
    return prog;
  }

 private:
  // ---- token helpers -------------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::kEnd; }
  bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kKeyword && t.text == kw;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::kPunct && t.text == p;
  }
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == TokenKind::kIdentifier; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept_kw(std::string_view kw) {
    if (!is_kw(kw)) return false;
    advance();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(std::string expected) const {
    const Token& t = peek();
    std::string near = t.kind == TokenKind::kEnd ? "end of input" : "\"" + t.text + "\"";
    throw ParseFailure{SyntaxError{t.offset, expected, "near " + near + ": expected " + expected}};
  }
  std::string expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail(std::string(kw));
    return std::string(kw);
  }
  std::string expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("'" + std::string(p) + "'");
    return std::string(p);
  }
  std::string expect_ident(std::string_view what) {
    if (!is_ident()) fail(std::string(what));
    return advance().text;
  }
  AstPtr ident_leaf(NodeKind kind, std::string_view what) {
    return data_leaf(kind, expect_ident(what));
  }

  // ---- statements ----------------------------------------------------------
  AstPtr statement() {
    if (is_kw("EXPLAIN")) {
      Words w(advance().text);
      if (accept_kw("QUERY")) {
        w.add("QUERY").add(expect_kw("PLAN"));
      }
      if (is_kw("EXPLAIN")) fail("statement");
      return node(NodeKind::kExplainStmt, {w.take(), ""}, statement());
    }
    if (is_kw("SELECT") || is_kw("WITH")) return query();
    if (is_kw("CREATE")) return create_statement();
    if (is_kw("INSERT") || is_kw("REPLACE")) return insert_statement();
    if (is_kw("UPDATE")) return update_statement();
    if (is_kw("DELETE")) return delete_statement();
    if (is_kw("DROP")) return drop_statement();
    if (is_kw("ALTER")) return alter_statement();
    if (is_kw("PRAGMA")) return pragma_statement();
    if (is_kw("BEGIN") || is_kw("COMMIT") || is_kw("END") || is_kw("ROLLBACK"))
      return transaction_statement();
    fail("statement");
  }

  AstPtr transaction_statement() {
    Words w;
    if (accept_kw("BEGIN")) {
      w.add("BEGIN");
      for (auto mode : {"DEFERRED", "IMMEDIATE", "EXCLUSIVE"})
        if (accept_kw(mode)) {
          w.add(mode);
          break;
        }
    } else if (accept_kw("COMMIT")) {
      w.add("COMMIT");
    } else if (accept_kw("END")) {
      w.add("END");
    } else {
      w.add(expect_kw("ROLLBACK"));
    }
    if (accept_kw("TRANSACTION")) w.add("TRANSACTION");
    return keyword_leaf(NodeKind::kTransactionStmt, w.take());
  }

  std::string if_not_exists(Words& w) {
    if (accept_kw("IF")) {
      w.add("IF").add(expect_kw("NOT")).add(expect_kw("EXISTS"));
    }
    return {};
  }

  AstPtr create_statement() {
    Words w(expect_kw("CREATE"));
    bool temp = false;
    if (accept_kw("TEMP")) {
      w.add("TEMP");
      temp = true;
    } else if (accept_kw("TEMPORARY")) {
      w.add("TEMPORARY");
      temp = true;
    }
    if (accept_kw("TABLE")) {
      w.add("TABLE");
      if_not_exists(w);
      auto name = ident_leaf(NodeKind::kTable, "table name");
      if (accept_kw("AS")) {
        return node(NodeKind::kCreateTableAsStmt, {w.take(), "AS", ""}, std::move(name), query());
      }
      return node(NodeKind::kCreateTableStmt, {w.take(), "", ""}, std::move(name), table_body());
    }
    if (accept_kw("VIEW")) {
      w.add("VIEW");
      if_not_exists(w);
      auto name = ident_leaf(NodeKind::kView, "view name");
      AstPtr columns;
      if (accept_punct("(")) {
        auto list = ident_list(NodeKind::kViewColumnList, NodeKind::kColumn);
        expect_punct(")");
        columns = node(NodeKind::kViewColumns, {"(", ")"}, std::move(list));
      }
      expect_kw("AS");
      return node(NodeKind::kCreateViewStmt, {w.take(), "", "AS", ""}, std::move(name), std::move(columns),
                  query());
    }
    if (!temp && (is_kw("UNIQUE") || is_kw("INDEX"))) {
      if (accept_kw("UNIQUE")) w.add("UNIQUE");
      w.add(expect_kw("INDEX"));
      if_not_exists(w);
      auto name = ident_leaf(NodeKind::kIndex, "index name");
      expect_kw("ON");
      auto table = ident_leaf(NodeKind::kTable, "table name");
      expect_punct("(");
      auto cols = indexed_columns();
      expect_punct(")");
      AstPtr where;
      if (is_kw("WHERE")) where = where_clause();
      return node(NodeKind::kCreateIndexStmt, {w.take(), "ON", "(", ")", ""}, std::move(name),
                  std::move(table), std::move(cols), std::move(where));
    }
    if (accept_kw("TRIGGER")) {
      w.add("TRIGGER");
      if_not_exists(w);
      auto name = ident_leaf(NodeKind::kTrigger, "trigger name");
      Words event;
      if (accept_kw("BEFORE")) event.add("BEFORE");
      else if (accept_kw("AFTER")) event.add("AFTER");
      else if (accept_kw("INSTEAD")) event.add("INSTEAD").add(expect_kw("OF"));
      if (accept_kw("DELETE")) event.add("DELETE");
      else if (accept_kw("INSERT")) event.add("INSERT");
      else event.add(expect_kw("UPDATE"));
      event.add(expect_kw("ON"));
      auto table = ident_leaf(NodeKind::kTable, "table name");
      Words each;
      if (accept_kw("FOR")) each.add("FOR").add(expect_kw("EACH")).add(expect_kw("ROW"));
      AstPtr when;
      if (accept_kw("WHEN")) when = node(NodeKind::kWhenClause, {"WHEN", ""}, expr());
      expect_kw("BEGIN");
      std::vector<AstPtr> body;
      std::vector<std::string> kws{""};
      in_trigger_ = true;
      do {
        if (is_kw("INSERT") || is_kw("REPLACE")) body.push_back(insert_statement());
        else if (is_kw("UPDATE")) body.push_back(update_statement());
        else if (is_kw("DELETE")) body.push_back(delete_statement());
        else if (is_kw("SELECT") || is_kw("WITH")) body.push_back(query());
        else fail("trigger body statement");
        kws.push_back(expect_punct(";"));
      } while (!is_kw("END"));
      in_trigger_ = false;
      advance();
      return node(NodeKind::kCreateTriggerStmt, {w.take(), event.take(), each.take(), "BEGIN", "END"},
                  std::move(name), std::move(table), std::move(when),
                  make(NodeKind::kTriggerBody, std::move(body), std::move(kws)));
    }
    if (!temp && accept_kw("VIRTUAL")) {
      w.add("VIRTUAL").add(expect_kw("TABLE"));
      if_not_exists(w);
      auto name = ident_leaf(NodeKind::kTable, "table name");
      Words using_words(expect_kw("USING"));
      using_words.add(expect_ident("module name"));
      if (!accept_punct("(")) {
        return node(NodeKind::kCreateVirtualTableStmt, {w.take(), using_words.take(), ""}, std::move(name),
                    AstPtr{});
      }
      using_words.add("(");
      std::vector<AstPtr> args;
      std::vector<std::string> kws{""};
      do {
        auto col = ident_leaf(NodeKind::kColumn, "module argument");
        Words rest;
        int depth = 0;
        while (!at_end() && !(depth == 0 && (is_punct(",") || is_punct(")")))) {
          if (is_punct("(")) ++depth;
          if (is_punct(")")) --depth;
          if (peek().kind == TokenKind::kString) fail("module argument");
          rest.add(advance().text);
        }
        args.push_back(node(NodeKind::kModuleArg, {"", rest.take()}, std::move(col)));
        kws.push_back(is_punct(",") ? "," : "");
      } while (accept_punct(","));
      expect_punct(")");
      return node(NodeKind::kCreateVirtualTableStmt, {w.take(), using_words.take(), ")"}, std::move(name),
                  make(NodeKind::kModuleArgList, std::move(args), std::move(kws)));
    }
    fail("TABLE, VIEW, INDEX, TRIGGER or VIRTUAL");
  }

  AstPtr table_body() {
    expect_punct("(");
    std::vector<AstPtr> defs;
    std::vector<std::string> def_kws{""};
    defs.push_back(column_def());
    AstPtr constraints;
    bool comma_before_constraints = false;
    while (accept_punct(",")) {
      if (starts_table_constraint()) {
        comma_before_constraints = true;
        break;
      }
      def_kws.push_back(",");
      defs.push_back(column_def());
    }
    if (comma_before_constraints) {
      std::vector<AstPtr> cons;
      std::vector<std::string> kws{""};
      cons.push_back(table_constraint());
      while (accept_punct(",")) {
        kws.push_back(",");
        cons.push_back(table_constraint());
      }
      constraints = make(NodeKind::kTableConstraintList, std::move(cons), std::move(kws));
    }
    expect_punct(")");
    Words tail(")");
    while (true) {
      if (accept_kw("WITHOUT")) {
        tail.add("WITHOUT");
        if (!is_ident() || !iequals(peek().text, "ROWID")) fail("ROWID");
        tail.add(advance().text);
      } else if (is_ident() && iequals(peek().text, "STRICT")) {
        tail.add(advance().text);
      } else {
        break;
      }
      if (!accept_punct(",")) break;
      tail.add(",");
    }
    return node(NodeKind::kTableBody, {"(", comma_before_constraints ? "," : "", tail.take()},
                make(NodeKind::kColumnDefList, std::move(defs), std::move(def_kws)), std::move(constraints));
  }

  static bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
           });
  }

  bool starts_table_constraint() const {
    return is_kw("PRIMARY") || is_kw("UNIQUE") || is_kw("CHECK") || is_kw("FOREIGN");
  }

  std::string type_name() {
    Words w;
    while (is_ident()) w.add(advance().text);
    if (!w.str().empty() && accept_punct("(")) {
      w.add("(").add(signed_number());
      if (accept_punct(",")) w.add(",").add(signed_number());
      w.add(expect_punct(")"));
    }
    return w.take();
  }

  std::string signed_number() {
    Words w;
    if (is_punct("+") || is_punct("-")) w.add(advance().text);
    if (peek().kind != TokenKind::kInteger && peek().kind != TokenKind::kFloat) fail("number");
    w.add(advance().text);
    return w.take();
  }

  AstPtr column_def() {
    auto name = ident_leaf(NodeKind::kColumn, "column name");
    std::string type = type_name();
    std::vector<AstPtr> cons;
    std::vector<std::string> kws{""};
    while (auto c = column_constraint()) {
      if (!cons.empty()) kws.push_back("");
      cons.push_back(std::move(c));
    }
    AstPtr list;
    if (!cons.empty()) list = make(NodeKind::kColumnConstraintList, std::move(cons), std::move(kws));
    return node(NodeKind::kColumnDef, {"", type, ""}, std::move(name), std::move(list));
  }

  void conflict_clause(Words& w) {
    if (is_kw("ON") && is_kw("CONFLICT", 1)) {
      advance();
      advance();
      w.add("ON").add("CONFLICT");
      for (auto r : {"ROLLBACK", "ABORT", "FAIL", "IGNORE", "REPLACE"})
        if (accept_kw(r)) {
          w.add(r);
          return;
        }
      fail("conflict resolution");
    }
  }

  AstPtr column_constraint() {
    if (accept_kw("PRIMARY")) {
      Words w("PRIMARY");
      w.add(expect_kw("KEY"));
      if (accept_kw("ASC")) w.add("ASC");
      else if (accept_kw("DESC")) w.add("DESC");
      conflict_clause(w);
      if (accept_kw("AUTOINCREMENT")) w.add("AUTOINCREMENT");
      return keyword_leaf(NodeKind::kColumnConstraint, w.take());
    }
    if (accept_kw("NOT")) {
      Words w("NOT");
      w.add(expect_kw("NULL"));
      conflict_clause(w);
      return keyword_leaf(NodeKind::kColumnConstraint, w.take());
    }
    if (accept_kw("UNIQUE")) {
      Words w("UNIQUE");
      conflict_clause(w);
      return keyword_leaf(NodeKind::kColumnConstraint, w.take());
    }
    if (accept_kw("CHECK")) {
      expect_punct("(");
      auto e = expr();
      expect_punct(")");
      return node(NodeKind::kColumnConstraint, {"CHECK (", ")"}, std::move(e));
    }
    if (accept_kw("DEFAULT")) {
      return node(NodeKind::kColumnConstraint, {"DEFAULT", ""}, default_value());
    }
    if (accept_kw("COLLATE")) {
      Words w("COLLATE");
      w.add(expect_ident("collation name"));
      return keyword_leaf(NodeKind::kColumnConstraint, w.take());
    }
    if (is_kw("REFERENCES")) {
      return node(NodeKind::kColumnConstraint, {"", ""}, foreign_ref());
    }
    if (is_kw("GENERATED") || is_kw("AS")) {
      Words w;
      if (accept_kw("GENERATED")) w.add("GENERATED").add(expect_kw("ALWAYS"));
      w.add(expect_kw("AS")).add(expect_punct("("));
      auto e = expr();
      Words tail(expect_punct(")"));
      if (is_ident() && (iequals(peek().text, "STORED") || iequals(peek().text, "VIRTUAL")))
        tail.add(advance().text);
      else if (accept_kw("VIRTUAL"))
        tail.add("VIRTUAL");
      return node(NodeKind::kColumnConstraint, {w.take(), tail.take()}, std::move(e));
    }
    return nullptr;
  }

  AstPtr default_value() {
    if (is_punct("(")) {
      advance();
      auto e = expr();
      expect_punct(")");
      return node(NodeKind::kExpr, {"(", ")"}, std::move(e));
    }
    if (is_punct("-") || is_punct("+")) {
      std::string sign = advance().text;
      if (peek().kind != TokenKind::kInteger && peek().kind != TokenKind::kFloat) fail("number");
      return node(NodeKind::kExpr, {sign, ""}, literal_expr());
    }
    const Token& t = peek();
    if (t.kind == TokenKind::kInteger || t.kind == TokenKind::kFloat || t.kind == TokenKind::kString ||
        t.kind == TokenKind::kBlob || is_kw("NULL") || is_kw("TRUE") || is_kw("FALSE") ||
        is_kw("CURRENT_TIME") || is_kw("CURRENT_DATE") || is_kw("CURRENT_TIMESTAMP"))
      return literal_expr();
    fail("default value");
  }

  AstPtr foreign_ref() {
    expect_kw("REFERENCES");
    auto table = ident_leaf(NodeKind::kTable, "table name");
    AstPtr cols;
    if (accept_punct("(")) {
      auto list = ident_list(NodeKind::kRefColumnList, NodeKind::kColumn);
      expect_punct(")");
      cols = node(NodeKind::kRefColumns, {"(", ")"}, std::move(list));
    }
    Words tail;
    while (true) {
      if (is_kw("ON") && (is_kw("DELETE", 1) || is_kw("UPDATE", 1))) {
        tail.add(advance().text).add(advance().text);
        if (accept_kw("CASCADE")) tail.add("CASCADE");
        else if (accept_kw("RESTRICT")) tail.add("RESTRICT");
        else if (accept_kw("NO")) tail.add("NO").add(expect_kw("ACTION"));
        else if (accept_kw("SET")) {
          tail.add("SET");
          if (accept_kw("NULL")) tail.add("NULL");
          else tail.add(expect_kw("DEFAULT"));
        } else fail("foreign key action");
      } else if (is_kw("DEFERRABLE") || (is_kw("NOT") && is_kw("DEFERRABLE", 1))) {
        if (accept_kw("NOT")) tail.add("NOT");
        tail.add(expect_kw("DEFERRABLE"));
        if (accept_kw("INITIALLY")) {
          tail.add("INITIALLY");
          if (accept_kw("DEFERRED")) tail.add("DEFERRED");
          else tail.add(expect_kw("IMMEDIATE"));
        }
      } else {
        break;
      }
    }
    return node(NodeKind::kForeignRef, {"REFERENCES", "", tail.take()}, std::move(table), std::move(cols));
  }

  AstPtr table_constraint() {
    if (accept_kw("PRIMARY")) {
      expect_kw("KEY");
      expect_punct("(");
      auto cols = ident_list(NodeKind::kConstraintColumnList, NodeKind::kColumn);
      Words tail(expect_punct(")"));
      conflict_clause(tail);
      return node(NodeKind::kTableConstraint, {"PRIMARY KEY (", tail.take()}, std::move(cols));
    }
    if (accept_kw("UNIQUE")) {
      expect_punct("(");
      auto cols = ident_list(NodeKind::kConstraintColumnList, NodeKind::kColumn);
      Words tail(expect_punct(")"));
      conflict_clause(tail);
      return node(NodeKind::kTableConstraint, {"UNIQUE (", tail.take()}, std::move(cols));
    }
    if (accept_kw("CHECK")) {
      expect_punct("(");
      auto e = expr();
      expect_punct(")");
      return node(NodeKind::kTableConstraint, {"CHECK (", ")"}, std::move(e));
    }
    expect_kw("FOREIGN");
    expect_kw("KEY");
    expect_punct("(");
    auto cols = ident_list(NodeKind::kConstraintColumnList, NodeKind::kColumn);
    expect_punct(")");
    return node(NodeKind::kTableConstraint, {"FOREIGN KEY (", ")", ""}, std::move(cols), foreign_ref());
  }

  AstPtr ident_list(NodeKind list_kind, NodeKind leaf_kind) {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    items.push_back(ident_leaf(leaf_kind, "name"));
    while (accept_punct(",")) {
      kws.push_back(",");
      items.push_back(ident_leaf(leaf_kind, "name"));
    }
    return make(list_kind, std::move(items), std::move(kws));
  }

  AstPtr indexed_columns() {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    items.push_back(ordering_term());
    while (accept_punct(",")) {
      kws.push_back(",");
      items.push_back(ordering_term());
    }
    return make(NodeKind::kIndexedColumnList, std::move(items), std::move(kws));
  }

  AstPtr ordering_term() {
    auto e = expr();
    Words dir;
    if (accept_kw("ASC")) dir.add("ASC");
    else if (accept_kw("DESC")) dir.add("DESC");
    if (accept_kw("NULLS")) {
      dir.add("NULLS");
      if (accept_kw("FIRST")) dir.add("FIRST");
      else dir.add(expect_kw("LAST"));
    }
    if (dir.str().empty()) return e;
    return node(NodeKind::kOrderTerm, {"", dir.take()}, std::move(e));
  }

  AstPtr insert_statement() {
    Words w;
    if (accept_kw("REPLACE")) {
      w.add("REPLACE");
    } else {
      w.add(expect_kw("INSERT"));
      if (accept_kw("OR")) {
        w.add("OR");
        bool ok = false;
        for (auto r : {"ROLLBACK", "ABORT", "FAIL", "IGNORE", "REPLACE"})
          if (accept_kw(r)) {
            w.add(r);
            ok = true;
            break;
          }
        if (!ok) fail("conflict resolution");
      }
    }
    w.add(expect_kw("INTO"));
    auto table = ident_leaf(NodeKind::kTable, "table name");
    AstPtr columns;
    if (accept_punct("(")) {
      auto list = ident_list(NodeKind::kInsertColumnList, NodeKind::kColumn);
      expect_punct(")");
      columns = node(NodeKind::kInsertColumns, {"(", ")"}, std::move(list));
    }
    AstPtr source;
    if (accept_kw("DEFAULT")) {
      expect_kw("VALUES");
      source = keyword_leaf(NodeKind::kDefaultValues, "DEFAULT VALUES");
    } else if (accept_kw("VALUES")) {
      std::vector<AstPtr> rows;
      std::vector<std::string> kws{""};
      do {
        if (!rows.empty()) kws.push_back(",");
        expect_punct("(");
        auto list = expr_list();
        expect_punct(")");
        rows.push_back(node(NodeKind::kValueRow, {"(", ")"}, std::move(list)));
      } while (accept_punct(","));
      source = node(NodeKind::kValuesClause, {"VALUES", ""},
                    make(NodeKind::kValueRowList, std::move(rows), std::move(kws)));
    } else if (is_kw("SELECT") || is_kw("WITH")) {
      source = query();
    } else {
      fail("VALUES, SELECT or DEFAULT VALUES");
    }
    AstPtr upsert;
    if (is_kw("ON") && is_kw("CONFLICT", 1)) {
      advance();
      advance();
      AstPtr target;
      if (accept_punct("(")) {
        auto cols = indexed_columns();
        expect_punct(")");
        AstPtr where;
        if (is_kw("WHERE")) where = where_clause();
        target = node(NodeKind::kConflictTarget, {"(", ")", ""}, std::move(cols), std::move(where));
      }
      expect_kw("DO");
      AstPtr action;
      if (accept_kw("NOTHING")) {
        action = keyword_leaf(NodeKind::kUpsertAction, "NOTHING");
      } else {
        expect_kw("UPDATE");
        expect_kw("SET");
        auto sets = set_list();
        AstPtr where;
        if (is_kw("WHERE")) where = where_clause();
        action = node(NodeKind::kUpsertAction, {"UPDATE SET", "", ""}, std::move(sets), std::move(where));
      }
      upsert = node(NodeKind::kUpsert, {"ON CONFLICT", "DO", ""}, std::move(target), std::move(action));
    }
    return node(NodeKind::kInsertStmt, {w.take(), "", "", "", ""}, std::move(table), std::move(columns),
                std::move(source), std::move(upsert));
  }

  AstPtr set_list() {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    do {
      if (!items.empty()) kws.push_back(",");
      auto col = ident_leaf(NodeKind::kColumn, "column name");
      expect_punct("=");
      items.push_back(node(NodeKind::kSetItem, {"", "=", ""}, std::move(col), expr()));
    } while (accept_punct(","));
    return make(NodeKind::kSetList, std::move(items), std::move(kws));
  }

  AstPtr update_statement() {
    Words w(expect_kw("UPDATE"));
    if (accept_kw("OR")) {
      w.add("OR");
      bool ok = false;
      for (auto r : {"ROLLBACK", "ABORT", "FAIL", "IGNORE", "REPLACE"})
        if (accept_kw(r)) {
          w.add(r);
          ok = true;
          break;
        }
      if (!ok) fail("conflict resolution");
    }
    auto table = ident_leaf(NodeKind::kTable, "table name");
    expect_kw("SET");
    auto sets = set_list();
    AstPtr where;
    if (is_kw("WHERE")) where = where_clause();
    return node(NodeKind::kUpdateStmt, {w.take(), "SET", "", ""}, std::move(table), std::move(sets),
                std::move(where));
  }

  AstPtr delete_statement() {
    expect_kw("DELETE");
    expect_kw("FROM");
    auto table = ident_leaf(NodeKind::kTable, "table name");
    AstPtr where;
    if (is_kw("WHERE")) where = where_clause();
    return node(NodeKind::kDeleteStmt, {"DELETE FROM", "", ""}, std::move(table), std::move(where));
  }

  AstPtr drop_statement() {
    Words w(expect_kw("DROP"));
    NodeKind stmt, leaf;
    if (accept_kw("TABLE")) {
      w.add("TABLE");
      stmt = NodeKind::kDropTableStmt;
      leaf = NodeKind::kTable;
    } else if (accept_kw("VIEW")) {
      w.add("VIEW");
      stmt = NodeKind::kDropViewStmt;
      leaf = NodeKind::kView;
    } else if (accept_kw("INDEX")) {
      w.add("INDEX");
      stmt = NodeKind::kDropIndexStmt;
      leaf = NodeKind::kIndex;
    } else {
      w.add(expect_kw("TRIGGER"));
      stmt = NodeKind::kDropTriggerStmt;
      leaf = NodeKind::kTrigger;
    }
    if (accept_kw("IF")) w.add("IF").add(expect_kw("EXISTS"));
    return node(stmt, {w.take(), ""}, ident_leaf(leaf, "name"));
  }

  AstPtr alter_statement() {
    expect_kw("ALTER");
    expect_kw("TABLE");
    auto table = ident_leaf(NodeKind::kTable, "table name");
    expect_kw("ADD");
    Words w("ADD");
    if (accept_kw("COLUMN")) w.add("COLUMN");
    return node(NodeKind::kAlterTableStmt, {"ALTER TABLE", "", ""}, std::move(table),
                node(NodeKind::kAddColumn, {w.take(), ""}, column_def()));
  }

  AstPtr pragma_statement() {
    Words w(expect_kw("PRAGMA"));
    std::string name = expect_ident("pragma name");
    w.add(name);
    const bool table_arg = std::any_of(kTablePragmas.begin(), kTablePragmas.end(),
                                       [&](std::string_view p) { return iequals(p, name); });
    auto value = [&]() -> AstPtr {
      if (table_arg && is_ident()) return ident_leaf(NodeKind::kTable, "table name");
      if (is_ident() || is_kw("ON") || is_kw("NO") || is_kw("FULL"))
        return keyword_leaf(NodeKind::kKeywordLiteral, advance().text);
      if (is_punct("-") || is_punct("+")) {
        std::string sign = advance().text;
        if (peek().kind != TokenKind::kInteger && peek().kind != TokenKind::kFloat) fail("number");
        return node(NodeKind::kExpr, {sign, ""}, literal_expr());
      }
      if (peek().kind == TokenKind::kInteger || peek().kind == TokenKind::kFloat ||
          peek().kind == TokenKind::kString)
        return literal_expr();
      fail("pragma value");
    };
    if (accept_punct("=")) {
      w.add("=");
      return node(NodeKind::kPragmaStmt, {w.take(), ""}, value());
    }
    if (accept_punct("(")) {
      w.add("(");
      auto v = value();
      expect_punct(")");
      return node(NodeKind::kPragmaStmt, {w.take(), ")"}, std::move(v));
    }
    return node(NodeKind::kPragmaStmt, {w.take(), ""}, AstPtr{});
  }

  // ---- queries -------------------------------------------------------------
  AstPtr query() {
    if (accept_kw("WITH")) {
      Words w("WITH");
      if (accept_kw("RECURSIVE")) w.add("RECURSIVE");
      std::vector<AstPtr> ctes;
      std::vector<std::string> kws{""};
      do {
        if (!ctes.empty()) kws.push_back(",");
        auto name = ident_leaf(NodeKind::kAlias, "common table name");
        AstPtr cols;
        if (accept_punct("(")) {
          auto list = ident_list(NodeKind::kCteColumnList, NodeKind::kAlias);
          expect_punct(")");
          cols = node(NodeKind::kCteColumns, {"(", ")"}, std::move(list));
        }
        expect_kw("AS");
        Words as("AS");
        if (accept_kw("NOT")) as.add("NOT").add(expect_kw("MATERIALIZED"));
        else if (accept_kw("MATERIALIZED")) as.add("MATERIALIZED");
        as.add(expect_punct("("));
        auto body = query();
        expect_punct(")");
        ctes.push_back(node(NodeKind::kCte, {"", "", as.take(), ")"}, std::move(name), std::move(cols),
                            std::move(body)));
      } while (accept_punct(","));
      auto with = node(NodeKind::kWithClause, {w.take(), ""},
                       make(NodeKind::kCteList, std::move(ctes), std::move(kws)));
      if (!is_kw("SELECT")) fail("SELECT");
      return node(NodeKind::kWithSelect, {"", "", ""}, std::move(with), compound());
    }
    return compound();
  }

  AstPtr compound() {
    bool tail_has_order = false;
    auto left = select_core(tail_has_order);
    while (is_kw("UNION") || is_kw("INTERSECT") || is_kw("EXCEPT")) {
      if (tail_has_order) fail("end of statement (ORDER BY/LIMIT must follow the last compound term)");
      Words op(advance().text);
      if (op.str() == "UNION" && accept_kw("ALL")) op.add("ALL");
      auto right = select_core(tail_has_order);
      left = node(NodeKind::kCompoundSelect, {"", op.take(), ""}, std::move(left), std::move(right));
    }
    return left;
  }

  AstPtr select_core(bool& tail_has_order) {
    expect_kw("SELECT");
    AstPtr distinct;
    if (accept_kw("DISTINCT")) distinct = keyword_leaf(NodeKind::kDistinctOpt, "DISTINCT");
    else if (accept_kw("ALL")) distinct = keyword_leaf(NodeKind::kDistinctOpt, "ALL");
    auto clause = node(NodeKind::kSelectClause, {"SELECT", "", ""}, std::move(distinct), select_list());
    AstPtr from;
    if (accept_kw("FROM")) from = node(NodeKind::kFromClause, {"FROM", ""}, join_source());
    AstPtr where;
    if (is_kw("WHERE")) where = where_clause();
    AstPtr group, order, limit;
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      auto list = expr_list();
      AstPtr having;
      if (accept_kw("HAVING")) having = node(NodeKind::kHavingClause, {"HAVING", ""}, expr());
      group = node(NodeKind::kGroupByClause, {"GROUP BY", "", ""}, std::move(list), std::move(having));
    }
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      std::vector<AstPtr> terms;
      std::vector<std::string> kws{""};
      terms.push_back(ordering_term());
      while (accept_punct(",")) {
        kws.push_back(",");
        terms.push_back(ordering_term());
      }
      order = node(NodeKind::kOrderByClause, {"ORDER BY", ""},
                   make(NodeKind::kOrderList, std::move(terms), std::move(kws)));
    }
    if (accept_kw("LIMIT")) {
      auto first = expr();
      AstPtr second;
      std::string mid;
      if (accept_kw("OFFSET")) {
        mid = "OFFSET";
        second = expr();
      } else if (accept_punct(",")) {
        mid = ",";
        second = expr();
      }
      limit = node(NodeKind::kLimitClause, {"LIMIT", mid, ""}, std::move(first), std::move(second));
    }
    tail_has_order = order || limit;
    AstPtr tail;
    if (group || order || limit)
      tail = node(NodeKind::kSelectTail, {"", "", "", ""}, std::move(group), std::move(order), std::move(limit));
    return node(NodeKind::kSelectStmt, {"", "", "", "", ""}, std::move(clause), std::move(from),
                std::move(where), std::move(tail));
  }

  AstPtr where_clause() {
    expect_kw("WHERE");
    return node(NodeKind::kWhereClause, {"WHERE", ""}, expr());
  }

  AstPtr select_list() {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    do {
      if (!items.empty()) kws.push_back(",");
      items.push_back(result_column());
    } while (accept_punct(","));
    return make(NodeKind::kSelectList, std::move(items), std::move(kws));
  }

  AstPtr result_column() {
    if (accept_punct("*")) return keyword_leaf(NodeKind::kStar, "*");
    if (is_ident() && is_punct(".", 1) && is_punct("*", 2)) {
      auto table = ident_leaf(NodeKind::kTable, "table name");
      advance();
      advance();
      return node(NodeKind::kTableStar, {"", ".*"}, std::move(table));
    }
    auto e = expr();
    if (accept_kw("AS")) {
      return node(NodeKind::kResultColumn, {"", "AS", ""}, std::move(e), ident_leaf(NodeKind::kAlias, "alias"));
    }
    if (is_ident()) {
      return node(NodeKind::kResultColumn, {"", "", ""}, std::move(e), ident_leaf(NodeKind::kAlias, "alias"));
    }
    return e;
  }

  std::string join_operator() {
    if (accept_punct(",")) return ",";
    Words w;
    if (accept_kw("NATURAL")) w.add("NATURAL");
    if (accept_kw("LEFT") || (is_kw("RIGHT") && accept_kw("RIGHT")) || (is_kw("FULL") && accept_kw("FULL"))) {
      w.add(toks_[pos_ - 1].text);
      if (accept_kw("OUTER")) w.add("OUTER");
    } else if (accept_kw("INNER")) {
      w.add("INNER");
    } else if (accept_kw("CROSS")) {
      w.add("CROSS");
    }
    if (accept_kw("JOIN")) {
      w.add("JOIN");
      return w.take();
    }
    if (!w.str().empty()) fail("JOIN");
    return {};
  }

  AstPtr join_source() {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    items.push_back(table_ref());
    for (;;) {
      std::string op = join_operator();
      if (op.empty()) break;
      kws.push_back(op);
      auto item = table_ref();
      AstPtr constraint;
      if (op != ",") {
        if (accept_kw("ON")) {
          constraint = node(NodeKind::kOnClause, {"ON", ""}, expr());
        } else if (accept_kw("USING")) {
          expect_punct("(");
          auto cols = ident_list(NodeKind::kUsingColumnList, NodeKind::kColumn);
          expect_punct(")");
          constraint = node(NodeKind::kUsingClause, {"USING (", ")"}, std::move(cols));
        }
      }
      if (constraint) item = node(NodeKind::kJoinedRef, {"", "", ""}, std::move(item), std::move(constraint));
      items.push_back(std::move(item));
    }
    return make(NodeKind::kJoinSource, std::move(items), std::move(kws));
  }

  AstPtr table_ref() {
    if (accept_punct("(")) {
      if (!is_kw("SELECT") && !is_kw("WITH")) fail("SELECT");
      auto q = query();
      expect_punct(")");
      AstPtr alias;
      std::string mid = ")";
      if (accept_kw("AS")) {
        mid = ") AS";
        alias = ident_leaf(NodeKind::kAlias, "alias");
      } else if (is_ident()) {
        alias = ident_leaf(NodeKind::kAlias, "alias");
      }
      return node(NodeKind::kSubqueryRef, {"(", mid, ""}, std::move(q), std::move(alias));
    }
    auto table = ident_leaf(NodeKind::kTable, "table name");
    AstPtr alias;
    std::string mid;
    if (accept_kw("AS")) {
      mid = "AS";
      alias = ident_leaf(NodeKind::kAlias, "alias");
    } else if (is_ident()) {
      alias = ident_leaf(NodeKind::kAlias, "alias");
    }
    auto ref = node(NodeKind::kTableRef, {"", mid, ""}, std::move(table), std::move(alias));
    if (accept_kw("INDEXED")) {
      expect_kw("BY");
      return node(NodeKind::kIndexedRef, {"", "INDEXED BY", ""}, std::move(ref),
                  ident_leaf(NodeKind::kIndex, "index name"));
    }
    if (is_kw("NOT") && is_kw("INDEXED", 1)) {
      advance();
      advance();
      return node(NodeKind::kIndexedRef, {"", "NOT INDEXED", ""}, std::move(ref), AstPtr{});
    }
    return ref;
  }

  // ---- expressions ---------------------------------------------------------
  AstPtr expr_list() {
    std::vector<AstPtr> items;
    std::vector<std::string> kws{""};
    items.push_back(expr());
    while (accept_punct(",")) {
      kws.push_back(",");
      items.push_back(expr());
    }
    return make(NodeKind::kExprList, std::move(items), std::move(kws));
  }

  AstPtr binary(AstPtr l, std::string op, AstPtr r) {
    return node(NodeKind::kExpr, {"", std::move(op), ""}, std::move(l), std::move(r));
  }

  AstPtr expr() {
    if (++depth_ > 200) fail("shallower expression");
    auto e = or_expr();
    --depth_;
    return e;
  }

  AstPtr or_expr() {
    auto l = and_expr();
    while (accept_kw("OR")) l = binary(std::move(l), "OR", and_expr());
    return l;
  }

  AstPtr and_expr() {
    auto l = not_expr();
    while (accept_kw("AND")) l = binary(std::move(l), "AND", not_expr());
    return l;
  }

  AstPtr not_expr() {
    if (accept_kw("NOT")) return node(NodeKind::kExpr, {"NOT", ""}, not_expr());
    return equality_expr();
  }

  AstPtr equality_expr() {
    auto l = relational_expr();
    for (;;) {
      if (is_punct("=") || is_punct("==") || is_punct("!=") || is_punct("<>")) {
        std::string op = advance().text;
        l = binary(std::move(l), op, relational_expr());
        continue;
      }
      if (accept_kw("IS")) {
        Words op("IS");
        if (accept_kw("NOT")) op.add("NOT");
        if (accept_kw("DISTINCT")) op.add("DISTINCT").add(expect_kw("FROM"));
        l = binary(std::move(l), op.take(), relational_expr());
        continue;
      }
      if (accept_kw("ISNULL")) {
        l = node(NodeKind::kExpr, {"", "ISNULL"}, std::move(l));
        continue;
      }
      if (accept_kw("NOTNULL")) {
        l = node(NodeKind::kExpr, {"", "NOTNULL"}, std::move(l));
        continue;
      }
      const bool negated = is_kw("NOT") && (is_kw("NULL", 1) || is_kw("IN", 1) || is_kw("LIKE", 1) ||
                                            is_kw("GLOB", 1) || is_kw("MATCH", 1) || is_kw("REGEXP", 1) ||
                                            is_kw("BETWEEN", 1));
      if (negated) advance();
      Words op;
      if (negated) op.add("NOT");
      if (negated && accept_kw("NULL")) {
        l = node(NodeKind::kExpr, {"", "NOT NULL"}, std::move(l));
        continue;
      }
      if (accept_kw("IN")) {
        op.add("IN").add(expect_punct("("));
        AstPtr rhs;
        if (is_kw("SELECT") || is_kw("WITH")) rhs = query();
        else if (!is_punct(")")) rhs = expr_list();
        expect_punct(")");
        l = node(NodeKind::kExpr, {"", op.take(), ")"}, std::move(l), std::move(rhs));
        continue;
      }
      if (is_kw("LIKE") || is_kw("GLOB") || is_kw("MATCH") || is_kw("REGEXP")) {
        op.add(advance().text);
        l = binary(std::move(l), op.take(), relational_expr());
        continue;
      }
      if (accept_kw("BETWEEN")) {
        op.add("BETWEEN");
        auto lo = relational_expr();
        expect_kw("AND");
        auto hi = relational_expr();
        l = node(NodeKind::kExpr, {"", op.take(), "AND", ""}, std::move(l), std::move(lo), std::move(hi));
        continue;
      }
      if (negated) fail("IN, LIKE, GLOB, MATCH, REGEXP, BETWEEN or NULL");
      return l;
    }
  }

  AstPtr relational_expr() {
    auto l = bit_expr();
    while (is_punct("<") || is_punct("<=") || is_punct(">") || is_punct(">=")) {
      std::string op = advance().text;
      l = binary(std::move(l), op, bit_expr());
    }
    return l;
  }

  AstPtr bit_expr() {
    auto l = add_expr();
    while (is_punct("&") || is_punct("|") || is_punct("<<") || is_punct(">>")) {
      std::string op = advance().text;
      l = binary(std::move(l), op, add_expr());
    }
    return l;
  }

  AstPtr add_expr() {
    auto l = mul_expr();
    while (is_punct("+") || is_punct("-")) {
      std::string op = advance().text;
      l = binary(std::move(l), op, mul_expr());
    }
    return l;
  }

  AstPtr mul_expr() {
    auto l = concat_expr();
    while (is_punct("*") || is_punct("/") || is_punct("%")) {
      std::string op = advance().text;
      l = binary(std::move(l), op, concat_expr());
    }
    return l;
  }

  AstPtr concat_expr() {
    auto l = unary_expr();
    while (is_punct("||") || is_punct("->") || is_punct("->>")) {
      std::string op = advance().text;
      l = binary(std::move(l), op, unary_expr());
    }
    return l;
  }

  AstPtr unary_expr() {
    if (is_punct("-") || is_punct("+") || is_punct("~")) {
      std::string op = advance().text;
      if (++depth_ > 200) fail("shallower expression");
      auto e = node(NodeKind::kExpr, {op, ""}, unary_expr());
      --depth_;
      return e;
    }
    auto e = primary_expr();
    while (accept_kw("COLLATE")) {
      Words w("COLLATE");
      w.add(expect_ident("collation name"));
      e = node(NodeKind::kExpr, {"", w.take()}, std::move(e));
    }
    return e;
  }

  AstPtr literal_expr() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::kInteger:
        return node(NodeKind::kExpr, {"", ""}, data_leaf(NodeKind::kIntLiteral, advance().text));
      case TokenKind::kFloat:
        return node(NodeKind::kExpr, {"", ""}, data_leaf(NodeKind::kFloatLiteral, advance().text));
      case TokenKind::kString:
        return node(NodeKind::kExpr, {"", ""}, data_leaf(NodeKind::kStringLiteral, advance().text));
      case TokenKind::kBlob:
      case TokenKind::kVariable:
        return node(NodeKind::kExpr, {"", ""}, keyword_leaf(NodeKind::kKeywordLiteral, advance().text));
      default:
        break;
    }
    if (is_kw("NULL") || is_kw("TRUE") || is_kw("FALSE") || is_kw("CURRENT_TIME") || is_kw("CURRENT_DATE") ||
        is_kw("CURRENT_TIMESTAMP"))
      return node(NodeKind::kExpr, {"", ""}, keyword_leaf(NodeKind::kKeywordLiteral, advance().text));
    fail("literal");
  }

  bool function_keyword() const {
    return (is_kw("REPLACE") || is_kw("LIKE") || is_kw("GLOB")) && is_punct("(", 1);
  }

  AstPtr primary_expr() {
    const Token& t = peek();
    if (t.kind == TokenKind::kInteger || t.kind == TokenKind::kFloat || t.kind == TokenKind::kString ||
        t.kind == TokenKind::kBlob || t.kind == TokenKind::kVariable || is_kw("NULL") || is_kw("TRUE") ||
        is_kw("FALSE") || is_kw("CURRENT_TIME") || is_kw("CURRENT_DATE") || is_kw("CURRENT_TIMESTAMP"))
      return literal_expr();
    if (accept_punct("(")) {
      if (is_kw("SELECT") || is_kw("WITH")) {
        auto q = query();
        expect_punct(")");
        return node(NodeKind::kExpr, {"(", ")"}, std::move(q));
      }
      auto list = expr_list();
      expect_punct(")");
      if (list->children.size() == 1) return node(NodeKind::kExpr, {"(", ")"}, std::move(list->children[0]));
      return node(NodeKind::kExpr, {"(", ")"}, std::move(list));
    }
    if (accept_kw("CAST")) {
      expect_punct("(");
      auto e = expr();
      expect_kw("AS");
      Words tail("AS");
      std::string type = type_name();
      if (type.empty()) fail("type name");
      tail.add(type).add(expect_punct(")"));
      return node(NodeKind::kExpr, {"CAST (", tail.take()}, std::move(e));
    }
    if (accept_kw("EXISTS")) {
      expect_punct("(");
      auto q = query();
      expect_punct(")");
      return node(NodeKind::kExpr, {"EXISTS (", ")"}, std::move(q));
    }
    if (accept_kw("CASE")) {
      AstPtr operand;
      if (!is_kw("WHEN")) operand = expr();
      std::vector<AstPtr> whens;
      std::vector<std::string> kws{""};
      while (accept_kw("WHEN")) {
        if (!whens.empty()) kws.push_back("");
        auto cond = expr();
        expect_kw("THEN");
        whens.push_back(node(NodeKind::kWhenThen, {"WHEN", "THEN", ""}, std::move(cond), expr()));
      }
      if (whens.empty()) fail("WHEN");
      AstPtr otherwise;
      if (accept_kw("ELSE")) otherwise = node(NodeKind::kElseClause, {"ELSE", ""}, expr());
      expect_kw("END");
      return node(NodeKind::kExpr, {"", ""},
                  node(NodeKind::kCaseExpr, {"CASE", "", "", "END"}, std::move(operand),
                       make(NodeKind::kWhenList, std::move(whens), std::move(kws)), std::move(otherwise)));
    }
    if (function_keyword() || (is_ident() && is_punct("(", 1))) {
      return node(NodeKind::kExpr, {"", ""}, function_call());
    }
    if (is_ident()) {
      if (in_trigger_ && is_punct(".", 1) && (iequals(peek().text, "new") || iequals(peek().text, "old"))) {
        Words w(advance().text);
        w.add(".");
        advance();
        return node(NodeKind::kExpr, {"", ""},
                    node(NodeKind::kRowColumnRef, {w.take(), ""}, ident_leaf(NodeKind::kColumn, "column name")));
      }
      if (is_punct(".", 1)) {
        auto table = ident_leaf(NodeKind::kTable, "table name");
        advance();
        auto column = ident_leaf(NodeKind::kColumn, "column name");
        return node(NodeKind::kExpr, {"", ""},
                    node(NodeKind::kQualifiedColumnRef, {"", ".", ""}, std::move(table), std::move(column)));
      }
      return node(NodeKind::kExpr, {"", ""},
                  node(NodeKind::kColumnRef, {"", ""}, ident_leaf(NodeKind::kColumn, "column name")));
    }
    fail("expression");
  }

  AstPtr function_call() {
    std::string name = advance().text;
    auto fn = data_leaf(NodeKind::kFunction, name);
    expect_punct("(");
    Words open("(");
    AstPtr args;
    if (accept_punct("*")) {
      args = keyword_leaf(NodeKind::kStar, "*");
    } else if (!is_punct(")")) {
      if (accept_kw("DISTINCT")) open.add("DISTINCT");
      args = expr_list();
    }
    expect_punct(")");
    auto call = node(NodeKind::kFunctionCall, {"", open.take(), ")"}, std::move(fn), std::move(args));
    if (accept_kw("FILTER")) fail("expression without FILTER");
    if (accept_kw("OVER")) {
      expect_punct("(");
      AstPtr partition, order;
      if (accept_kw("PARTITION")) {
        expect_kw("BY");
        partition = node(NodeKind::kPartitionBy, {"PARTITION BY", ""}, expr_list());
      }
      if (accept_kw("ORDER")) {
        expect_kw("BY");
        std::vector<AstPtr> terms;
        std::vector<std::string> kws{""};
        terms.push_back(ordering_term());
        while (accept_punct(",")) {
          kws.push_back(",");
          terms.push_back(ordering_term());
        }
        order = node(NodeKind::kOrderByClause, {"ORDER BY", ""},
                     make(NodeKind::kOrderList, std::move(terms), std::move(kws)));
      }
      expect_punct(")");
      AstPtr spec;
      if (partition || order)
        spec = node(NodeKind::kWindowSpec, {"", "", ""}, std::move(partition), std::move(order));
      return node(NodeKind::kWindowCall, {"", "OVER (", ")"}, std::move(call), std::move(spec));
    }
    return call;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  bool in_trigger_ = false;
};

}  // namespace

std::variant<AstProgram, SyntaxError> parse(std::string_view sql) {
  auto lexed = tokenize(sql);
  if (auto* err = std::get_if<SyntaxError>(&lexed)) return *err;
  Parser parser(std::move(std::get<std::vector<Token>>(lexed)));
  try {
    return parser.program();
  } catch (const ParseFailure& failure) {
    return failure.error;
  }
}

}  // namespace squirrelkit
