#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace flyclient {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

struct Hash32 {
  std::array<std::uint8_t, 32> bytes{};

  static constexpr std::size_t kSize = 32;

  static Hash32 from_span(ByteSpan data);
  static Hash32 from_hex(std::string_view hex);

  bool is_zero() const;
  std::string hex() const;
  ByteSpan span() const { return {bytes.data(), bytes.size()}; }

  auto operator<=>(const Hash32&) const = default;
};

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

// Number of bytes CompactSize needs for `value`: 1, 3, 5 or 9.
std::size_t compact_size_length(std::uint64_t value);

class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16le(std::uint16_t v);
  void u24le(std::uint32_t v);
  void u32le(std::uint32_t v);
  void u64le(std::uint64_t v);
  void compact_size(std::uint64_t v);
  void bytes(ByteSpan data);
  void hash(const Hash32& h) { bytes(h.span()); }

  std::size_t size() const { return out_.size(); }
  const Bytes& view() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked little-endian reader; every failure is a DecodeError.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16le();
  std::uint32_t u24le();
  std::uint32_t u32le();
  std::uint64_t u64le();
  std::uint64_t compact_size();
  ByteSpan bytes(std::size_t n);
  Hash32 hash();

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_done(const char* what) const;

 private:
  void need(std::size_t n) const;

  ByteSpan data_;
  std::size_t pos_ = 0;
};

}  // namespace flyclient
