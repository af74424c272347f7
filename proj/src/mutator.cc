#include "squirrelkit/mutator.h"

#include <stdexcept>

namespace squirrelkit {
namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

struct Walker {
  const IrLibrary& lib;
  const MutationConfig& cfg;
  Rng& rng;

  void visit(IrPtr& slot, IrNode* parent, bool right) {
    if (!slot) return;
    if (parent && rng.chance(cfg.p_delete) && mutate_delete_operand(*parent, right, lib, rng)) return;
    if (rng.chance(cfg.p_replace)) {
      const IrNode* before = slot.get();
      const IrNode* left = slot->left.get();
      const IrNode* right_child = slot->right.get();
      if (mutate_replace(slot, lib, rng)) {
        // Grafted content is not walked again.
        if (slot.get() != before || slot->left.get() != left || slot->right.get() != right_child) return;
      }
    }
    const IrNode* left = slot->left.get();
    const IrNode* right_child = slot->right.get();
    if (rng.chance(cfg.p_insert)) mutate_insert(*slot, lib, rng);
    IrNode* self = slot.get();
    if (self->left && self->left.get() == left) visit(self->left, self, false);
    if (self->right && self->right.get() == right_child) visit(self->right, self, true);
  }
};

void mutate_statements(IrProgram& program, const IrLibrary& lib, const MutationConfig& cfg, Rng& rng) {
  auto& stmts = program.statements;
  if (rng.chance(0.5)) {
    if (stmts.size() >= cfg.max_statements) return;
    auto stmt = lib.sample_statement(rng);
    if (!stmt) return;
    stmts.insert(stmts.begin() + static_cast<std::ptrdiff_t>(rng.below(stmts.size() + 1)), std::move(stmt));
  } else if (stmts.size() > 1) {
    stmts.erase(stmts.begin() + static_cast<std::ptrdiff_t>(rng.below(stmts.size())));
  }
}

}  // namespace

void MutationConfig::check() const {
  check_probability(p_insert, "p_insert");
  check_probability(p_replace, "p_replace");
  check_probability(p_delete, "p_delete");
  check_probability(p_statement, "p_statement");
  if (max_candidates_per_input < 1) throw std::invalid_argument("max_candidates_per_input must be >= 1");
  if (max_statements < 1) throw std::invalid_argument("max_statements must be >= 1");
  if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
}

bool mutate_insert(IrNode& node, const IrLibrary& lib, Rng& rng) {
  if (node.is_data()) return false;
  bool grafted = false;
  if (!node.left) {
    if (auto donor = lib.sample(node.ir_type, rng); donor && donor->left) {
      node.left = std::move(donor->left);
      grafted = true;
    }
  }
  if (!node.right) {
    if (auto donor = lib.sample(node.ir_type, rng); donor && donor->right) {
      node.right = std::move(donor->right);
      // Operands such as a LIMIT offset need the separator that introduced them.
      if (node.op_mid.empty()) node.op_mid = donor->op_mid;
      grafted = true;
    }
  }
  return grafted;
}

bool mutate_replace(IrPtr& slot, const IrLibrary& lib, Rng& rng) {
  if (!slot || slot->is_data()) return false;
  auto donor = lib.sample(slot->ir_type, rng);
  if (!donor) return false;
  if (rng.chance(0.5)) {
    slot = std::move(donor);
  } else {
    slot->left = std::move(donor->left);
    slot->right = std::move(donor->right);
    slot->op_prefix = std::move(donor->op_prefix);
    slot->op_mid = std::move(donor->op_mid);
    slot->op_suffix = std::move(donor->op_suffix);
  }
  return true;
}

bool mutate_delete(IrPtr& slot) {
  if (!slot) return false;
  slot.reset();
  return true;
}

bool mutate_delete_operand(IrNode& parent, bool right, const IrLibrary& lib, Rng& rng) {
  IrPtr& slot = right ? parent.right : parent.left;
  if (!slot) return false;
  const IrNode* shape = lib.sample_with_empty_operand(parent.ir_type, right, rng);
  if (!shape) return false;
  mutate_delete(slot);
  parent.op_prefix = shape->op_prefix;
  parent.op_mid = shape->op_mid;
  parent.op_suffix = shape->op_suffix;
  return true;
}

std::optional<IrProgram> normalize(const IrProgram& skeleton) {
  auto translated = sql_to_ir(ir_to_sql(skeleton));
  if (std::holds_alternative<SyntaxError>(translated)) return std::nullopt;
  return strip_data(std::get<IrProgram>(translated));
}

bool validate(const IrProgram& skeleton) { return std::holds_alternative<AstProgram>(parse(ir_to_sql(skeleton))); }

std::vector<IrProgram> generate(const IrProgram& skeleton, const IrLibrary& lib, const MutationConfig& cfg, Rng& rng,
                                GenerateStats* stats) {
  cfg.check();
  std::vector<IrProgram> out;
  for (std::size_t attempt = 0; attempt < cfg.max_candidates_per_input; ++attempt) {
    IrProgram candidate = deep_copy(skeleton);
    if (rng.chance(cfg.p_statement)) mutate_statements(candidate, lib, cfg, rng);
    Walker walker{lib, cfg, rng};
    for (auto& stmt : candidate.statements) walker.visit(stmt, nullptr, false);
    if (node_count(candidate) > cfg.max_nodes) {
      if (stats) ++stats->oversized;
      continue;
    }
    if (stats) ++stats->attempted;
    auto normalized = normalize(candidate);
    if (!normalized || normalized->statements.empty()) continue;
    if (stats) ++stats->passed;
    out.push_back(std::move(*normalized));
  }
  return out;
}

}  // namespace squirrelkit
