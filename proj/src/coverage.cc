#include "squirrelkit/coverage.h"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace squirrelkit {
namespace {

constexpr std::array<std::uint8_t, 256> make_bucket_table() {
  std::array<std::uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) {
    std::uint8_t b = 0;
    if (i == 0) b = 0;
    else if (i == 1) b = 1;
    else if (i == 2) b = 2;
    else if (i == 3) b = 4;
    else if (i <= 7) b = 8;
    else if (i <= 15) b = 16;
    else if (i <= 31) b = 32;
    else if (i <= 127) b = 64;
    else b = 128;
    t[static_cast<std::size_t>(i)] = b;
  }
  return t;
}

constexpr auto kBuckets = make_bucket_table();

}  // namespace

std::uint8_t bucket_bit(std::uint8_t hits) { return kBuckets[hits]; }

void CoverageBitmap::clear() { std::fill(bytes_.begin(), bytes_.end(), 0); }

std::size_t CoverageBitmap::count_nonzero() const {
  return static_cast<std::size_t>(std::count_if(bytes_.begin(), bytes_.end(), [](std::uint8_t b) { return b != 0; }));
}

bool has_new_coverage(const CoverageBitmap& exec, CoverageBitmap& global) {
  if (exec.size() != global.size()) throw std::invalid_argument("coverage map length mismatch");
  bool fresh = false;
  const std::uint8_t* e = exec.data();
  std::uint8_t* g = global.data();
  for (std::size_t i = 0; i < exec.size(); ++i) {
    if (!e[i]) continue;
    const std::uint8_t bit = kBuckets[e[i]];
    if (!(g[i] & bit)) {
      fresh = true;
      g[i] |= bit;
    }
  }
  return fresh;
}

std::uint64_t coverage_signature(const CoverageBitmap& exec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::uint8_t* e = exec.data();
  for (std::size_t i = 0; i < exec.size(); ++i) {
    if (!e[i]) continue;
    const std::uint64_t word = (static_cast<std::uint64_t>(i) << 8) | kBuckets[e[i]];
    for (int k = 0; k < 5; ++k) {
      h ^= (word >> (k * 8)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace squirrelkit
