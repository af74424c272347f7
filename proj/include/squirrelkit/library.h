#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "squirrelkit/ir.h"
#include "squirrelkit/rng.h"

namespace squirrelkit {

inline constexpr const char* kSemanticPlaceholder = "x";
inline constexpr const char* kIntPlaceholder = "1";
inline constexpr const char* kFloatPlaceholder = "1.0";
inline constexpr const char* kStringPlaceholder = "'a'";

// Replaces every data value by its placeholder. Types and operators are kept.
IrPtr strip_data(const IrNode& node);
IrProgram strip_data(const IrProgram& program);

// Digest over type, operators, data placeholder class and child digests.
std::uint64_t fingerprint(const IrNode& node);

class IrLibrary {
 public:
  static constexpr std::size_t kDefaultCap = 4096;

  explicit IrLibrary(std::size_t cap = kDefaultCap, std::uint64_t eviction_seed = 0);

  // Offers every subtree of every statement to its type bucket. Returns the
  // number of new entries.
  std::size_t insert(const IrProgram& skeleton);
  std::size_t insert_tree(const IrNode& root);

  // Deep copy of a uniformly chosen entry, or null when the bucket is empty.
  IrPtr sample(NodeKind type, Rng& rng) const;
  // A whole statement skeleton drawn from a random populated statement type.
  IrPtr sample_statement(Rng& rng) const;
  // A uniformly chosen entry of `type` whose left (or right) operand is empty,
  // or null. The pointer stays valid until the next insert.
  const IrNode* sample_with_empty_operand(NodeKind type, bool right, Rng& rng) const;

  std::size_t size() const { return total_; }
  std::size_t cap() const { return cap_; }
  std::size_t bucket_size(NodeKind type) const;
  std::vector<NodeKind> types() const;
  bool contains(const IrNode& node) const;

  // Visits (type, entry) pairs in bucket order.
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [type, bucket] : buckets_)
      for (const auto& entry : bucket) f(type, *entry.node);
  }

  // Writes library/<Type>.sql (rendered entries) and library/entries.jsonl
  // under dir.
  void save(const std::filesystem::path& dir) const;
  // Reloads from the entries file written by save.
  static IrLibrary load(const std::filesystem::path& dir, std::size_t cap = kDefaultCap,
                        std::uint64_t eviction_seed = 0);

 private:
  struct Entry {
    IrPtr node;
    std::uint64_t digest;
  };

  bool offer(const IrNode& node);
  void evict_one();

  std::size_t cap_;
  std::size_t total_ = 0;
  std::map<NodeKind, std::vector<Entry>> buckets_;
  std::set<std::pair<NodeKind, std::uint64_t>> digests_;
  Rng eviction_rng_;
};

}  // namespace squirrelkit
