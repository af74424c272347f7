#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace squirrelkit {

inline constexpr std::size_t kDefaultBitmapSize = 262144;

// Maps a raw hit count to its logarithmic bucket bit:
// 1, 2, 3, 4-7, 8-15, 16-31, 32-127, 128+.
std::uint8_t bucket_bit(std::uint8_t hits);

class CoverageBitmap {
 public:
  explicit CoverageBitmap(std::size_t size = kDefaultBitmapSize) : bytes_(size, 0) {}

  std::size_t size() const { return bytes_.size(); }
  std::uint8_t* data() { return bytes_.data(); }
  const std::uint8_t* data() const { return bytes_.data(); }
  std::span<std::uint8_t> span() { return bytes_; }
  std::span<const std::uint8_t> span() const { return bytes_; }
  std::uint8_t& operator[](std::size_t i) { return bytes_[i]; }
  std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }

  void clear();
  // Number of non-zero bytes.
  std::size_t count_nonzero() const;

 private:
  std::vector<std::uint8_t> bytes_;
};

// Global maps hold OR-ed bucket bits. Returns true (and absorbs the new bits)
// iff exec contributes a bucket bit absent from global. Throws
// std::invalid_argument on a length mismatch.
bool has_new_coverage(const CoverageBitmap& exec, CoverageBitmap& global);

// Hash of the bucketized map, used as the crash signature.
std::uint64_t coverage_signature(const CoverageBitmap& exec);

}  // namespace squirrelkit
