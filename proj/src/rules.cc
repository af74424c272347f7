#include <fstream>
#include <sstream>
#include <stdexcept>

#include "squirrelkit/instantiator.h"

namespace squirrelkit {
namespace {

constexpr std::string_view kDefaultRules = R"(# Relation rules: target(s)  source  relation  scope  choice
# A source-typed datum depends on one earlier target-typed datum.
CreateTable|CreateView   UseAnyTable       isA          interStmt  any
UseAnyTable              UseFromTable      isA          intraStmt  any
UseFromTable             UseTableColumn    isAnElement  intraStmt  nearest
UseAnyTable|CreateTable  UseAnyColumn      isAnElement  intraStmt  any
CreateTable              CreateColumn      isAnElement  intraStmt  nearest
CreateIndex              UseAnyIndex       isA          interStmt  any
CreateTable              DropTable         isA          interStmt  any
CreateView               CreateViewColumn  isAnElement  intraStmt  nearest

# SQLite: PRAGMA table_info(t) and friends
CreateTable|CreateView   UsePragmaTable    isA          interStmt  any

# Drops of the remaining schema objects
CreateView               DropView          isA          interStmt  any
CreateIndex              DropIndex         isA          interStmt  any
CreateTrigger            DropTrigger       isA          interStmt  any
)";

DataType type_or_throw(std::string_view name, std::size_t line) {
  auto t = data_type_from_name(name);
  if (!t) throw std::invalid_argument("rules line " + std::to_string(line) + ": unknown data type " + std::string(name));
  return *t;
}

}  // namespace

RuleSet parse_rules(std::string_view text) {
  RuleSet rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string alpha, beta, gamma, scope, choice, extra;
    if (!(fields >> alpha)) continue;
    if (!(fields >> beta >> gamma >> scope >> choice) || (fields >> extra)) {
      throw std::invalid_argument("rules line " + std::to_string(line_no) + ": expected 5 fields");
    }
    RelationRule rule;
    std::size_t start = 0;
    while (start <= alpha.size()) {
      auto bar = alpha.find('|', start);
      auto part = alpha.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      rule.alpha.push_back(type_or_throw(part, line_no));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    rule.beta = type_or_throw(beta, line_no);
    for (const auto& a : rule.alpha) {
      if (a == rule.beta) throw std::invalid_argument("rules line " + std::to_string(line_no) + ": self relation");
    }
    if (gamma == "isA") rule.gamma = Relation::kIsA;
    else if (gamma == "isAnElement") rule.gamma = Relation::kIsAnElement;
    else throw std::invalid_argument("rules line " + std::to_string(line_no) + ": bad relation " + gamma);
    if (scope == "intraStmt") rule.scope = RuleScope::kIntraStmt;
    else if (scope == "interStmt") rule.scope = RuleScope::kInterStmt;
    else throw std::invalid_argument("rules line " + std::to_string(line_no) + ": bad scope " + scope);
    if (choice == "any") rule.choice = RuleChoice::kAny;
    else if (choice == "nearest") rule.choice = RuleChoice::kNearest;
    else throw std::invalid_argument("rules line " + std::to_string(line_no) + ": bad choice " + choice);
    rules.push_back(std::move(rule));
  }
  return rules;
}

RuleSet load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rules file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_rules(buffer.str());
}

std::string_view default_rules_text() { return kDefaultRules; }

const RuleSet& default_rules() {
  static const RuleSet rules = parse_rules(kDefaultRules);
  return rules;
}

}  // namespace squirrelkit
