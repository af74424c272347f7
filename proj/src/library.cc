#include "squirrelkit/library.h"

#include <fstream>
#include <stdexcept>
#include <string>

namespace squirrelkit {
namespace {

const char* placeholder_for(const DataType& type) {
  switch (type.kind) {
    case DataKind::kLiteralInt:
      return kIntPlaceholder;
    case DataKind::kLiteralFloat:
      return kFloatPlaceholder;
    case DataKind::kLiteralString:
      return kStringPlaceholder;
    default:
      return kSemanticPlaceholder;
  }
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::string_view s) {
  h = mix(h, static_cast<std::uint64_t>(s.size()));
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

IrPtr strip_data(const IrNode& node) {
  auto copy = deep_copy(node);
  for_each_preorder(*copy, [](IrNode& n) {
    if (!n.data_value) return;
    n.data_value = n.data_type ? placeholder_for(*n.data_type) : kSemanticPlaceholder;
  });
  return copy;
}

IrProgram strip_data(const IrProgram& program) {
  IrProgram out;
  for (const auto& stmt : program.statements) out.statements.push_back(strip_data(*stmt));
  return out;
}

std::uint64_t fingerprint(const IrNode& node) {
  std::uint64_t h = mix(kFnvOffset, static_cast<std::uint64_t>(node.ir_type));
  if (node.data_value) {
    h = mix(h, std::string_view(node.data_type ? placeholder_for(*node.data_type) : kSemanticPlaceholder));
    if (node.data_type) h = mix(h, node.data_type->name());
    return h;
  }
  h = mix(h, node.op_prefix);
  h = mix(h, node.op_mid);
  h = mix(h, node.op_suffix);
  h = mix(h, node.left ? fingerprint(*node.left) : 0x9e3779b97f4a7c15ULL);
  h = mix(h, node.right ? fingerprint(*node.right) : 0x7f4a7c159e3779b9ULL);
  return h;
}

IrLibrary::IrLibrary(std::size_t cap, std::uint64_t eviction_seed) : cap_(cap), eviction_rng_(eviction_seed) {
  if (cap_ == 0) throw std::invalid_argument("library cap must be positive");
}

std::size_t IrLibrary::insert(const IrProgram& skeleton) {
  std::size_t added = 0;
  for (const auto& stmt : skeleton.statements) added += insert_tree(*stmt);
  return added;
}

std::size_t IrLibrary::insert_tree(const IrNode& root) {
  std::size_t added = 0;
  for_each_postorder(root, [&](const IrNode& n) { added += offer(n) ? 1 : 0; });
  return added;
}

bool IrLibrary::offer(const IrNode& node) {
  const std::uint64_t digest = fingerprint(node);
  if (digests_.count({node.ir_type, digest})) return false;
  if (total_ >= cap_) evict_one();
  buckets_[node.ir_type].push_back(Entry{strip_data(node), digest});
  digests_.insert({node.ir_type, digest});
  ++total_;
  return true;
}

void IrLibrary::evict_one() {
  std::size_t victim = eviction_rng_.below(total_);
  for (auto it = buckets_.begin(); it != buckets_.end(); ++it) {
    auto& bucket = it->second;
    if (victim < bucket.size()) {
      digests_.erase({it->first, bucket[victim].digest});
      bucket[victim] = std::move(bucket.back());
      bucket.pop_back();
      --total_;
      if (bucket.empty()) buckets_.erase(it);
      return;
    }
    victim -= bucket.size();
  }
}

IrPtr IrLibrary::sample(NodeKind type, Rng& rng) const {
  auto it = buckets_.find(type);
  if (it == buckets_.end() || it->second.empty()) return nullptr;
  return deep_copy(*it->second[rng.below(it->second.size())].node);
}

IrPtr IrLibrary::sample_statement(Rng& rng) const {
  std::vector<NodeKind> kinds;
  for (const auto& [type, bucket] : buckets_)
    if (is_statement_kind(type) && !bucket.empty()) kinds.push_back(type);
  if (kinds.empty()) return nullptr;
  return sample(kinds[rng.below(kinds.size())], rng);
}

const IrNode* IrLibrary::sample_with_empty_operand(NodeKind type, bool right, Rng& rng) const {
  auto it = buckets_.find(type);
  if (it == buckets_.end()) return nullptr;
  std::vector<const IrNode*> matches;
  for (const auto& entry : it->second) {
    if (entry.node->is_data()) continue;
    if ((right ? entry.node->right : entry.node->left) == nullptr) matches.push_back(entry.node.get());
  }
  if (matches.empty()) return nullptr;
  return matches[rng.below(matches.size())];
}

std::size_t IrLibrary::bucket_size(NodeKind type) const {
  auto it = buckets_.find(type);
  return it == buckets_.end() ? 0 : it->second.size();
}

std::vector<NodeKind> IrLibrary::types() const {
  std::vector<NodeKind> out;
  for (const auto& [type, bucket] : buckets_)
    if (!bucket.empty()) out.push_back(type);
  return out;
}

bool IrLibrary::contains(const IrNode& node) const { return digests_.count({node.ir_type, fingerprint(node)}) > 0; }

void IrLibrary::save(const std::filesystem::path& dir) const {
  const auto lib_dir = dir / "library";
  std::filesystem::create_directories(lib_dir);
  for (const auto& entry : std::filesystem::directory_iterator(lib_dir)) {
    if (entry.path().extension() == ".sql") std::filesystem::remove(entry.path());
  }
  std::ofstream entries(lib_dir / "entries.jsonl");
  for (const auto& [type, bucket] : buckets_) {
    std::ofstream rendered(lib_dir / (std::string(kind_name(type)) + ".sql"));
    for (const auto& entry : bucket) {
      rendered << ir_to_sql(*entry.node) << '\n';
      entries << serialize_ir(*entry.node) << '\n';
    }
  }
}

IrLibrary IrLibrary::load(const std::filesystem::path& dir, std::size_t cap, std::uint64_t eviction_seed) {
  IrLibrary lib(cap, eviction_seed);
  std::ifstream in(dir / "library" / "entries.jsonl");
  if (!in) throw std::runtime_error("cannot open " + (dir / "library" / "entries.jsonl").string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    lib.offer(*deserialize_ir(line));
  }
  return lib;
}

}  // namespace squirrelkit
