#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "squirrelkit/ir.h"
#include "squirrelkit/library.h"
#include "squirrelkit/rng.h"

namespace squirrelkit {

struct MutationConfig {
  double p_insert = 0.05;
  double p_replace = 0.05;
  double p_delete = 0.05;
  std::size_t max_candidates_per_input = 8;
  std::size_t max_statements = 16;
  double p_statement = 0.1;
  // Candidates with more IR nodes than this are discarded before validation.
  // Without a bound, novelty keeps favouring ever larger queries.
  std::size_t max_nodes = 500;
  std::uint64_t rng_seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void check() const;
};

// Fills an empty operand of node from a same-typed library entry's operand.
bool mutate_insert(IrNode& node, const IrLibrary& lib, Rng& rng);

// Swaps the node in slot for a same-typed library entry, or copies that entry's
// operands (and operator parts) into it. Data leaves are left alone.
bool mutate_replace(IrPtr& slot, const IrLibrary& lib, Rng& rng);

// Empties the slot.
bool mutate_delete(IrPtr& slot);

// Deletion as applied during generate: empties parent's left or right operand
// only if the library holds a same-typed entry with that operand empty, and
// gives parent that entry's operator parts.
bool mutate_delete_operand(IrNode& parent, bool right, const IrLibrary& lib, Rng& rng);

// True iff the rendered program parses.
bool validate(const IrProgram& skeleton);

// Renders, parses, annotates, translates and strips. Returns nullopt when the
// rendering does not parse.
std::optional<IrProgram> normalize(const IrProgram& skeleton);

struct GenerateStats {
  std::size_t attempted = 0;  // candidates that went through validation
  std::size_t passed = 0;
  std::size_t oversized = 0;  // discarded by max_nodes, not counted as attempted
};

// Returns up to max_candidates_per_input mutated skeletons that passed
// validation, each in normalized form.
std::vector<IrProgram> generate(const IrProgram& skeleton, const IrLibrary& lib, const MutationConfig& cfg,
                                Rng& rng, GenerateStats* stats = nullptr);

}  // namespace squirrelkit
