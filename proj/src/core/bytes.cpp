#include "flyclient/core/bytes.hpp"

#include <algorithm>

#include "flyclient/core/error.hpp"

namespace flyclient {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Hash32 Hash32::from_span(ByteSpan data) {
  if (data.size() != kSize) {
    throw DecodeError("hash must be 32 bytes, got " + std::to_string(data.size()));
  }
  Hash32 h;
  std::copy(data.begin(), data.end(), h.bytes.begin());
  return h;
}

Hash32 Hash32::from_hex(std::string_view hex) {
  const Bytes raw = flyclient::from_hex(hex);
  return from_span(raw);
}

bool Hash32::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

std::string Hash32::hex() const { return to_hex(span()); }

std::string to_hex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.resize(data.size() * 2);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[2 * i] = kDigits[data[i] >> 4];
    out[2 * i + 1] = kDigits[data[i] & 0x0f];
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw DecodeError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::size_t compact_size_length(std::uint64_t value) {
  if (value < 253) return 1;
  if (value <= 0xffff) return 3;
  if (value <= 0xffffffffULL) return 5;
  return 9;
}

void ByteWriter::u16le(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v));
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u24le(std::uint32_t v) {
  for (int i = 0; i < 3; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u32le(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64le(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::compact_size(std::uint64_t v) {
  if (v < 253) {
    u8(static_cast<std::uint8_t>(v));
  } else if (v <= 0xffff) {
    u8(253);
    u16le(static_cast<std::uint16_t>(v));
  } else if (v <= 0xffffffffULL) {
    u8(254);
    u32le(static_cast<std::uint32_t>(v));
  } else {
    u8(255);
    u64le(v);
  }
}

void ByteWriter::bytes(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }

void ByteReader::need(std::size_t n) const {
  if (remaining() < n) {
    throw DecodeError("truncated input: need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ", have " + std::to_string(remaining()));
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint16_t ByteReader::u16le() {
  need(2);
  const std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u24le() {
  need(3);
  std::uint32_t v = 0;
  for (int i = 0; i < 3; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 3;
  return v;
}

std::uint32_t ByteReader::u32le() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64le() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

std::uint64_t ByteReader::compact_size() {
  const std::uint8_t tag = u8();
  std::uint64_t v = tag;
  if (tag == 253) {
    v = u16le();
    if (v < 253) throw DecodeError("non-canonical compact size");
  } else if (tag == 254) {
    v = u32le();
    if (v <= 0xffff) throw DecodeError("non-canonical compact size");
  } else if (tag == 255) {
    v = u64le();
    if (v <= 0xffffffffULL) throw DecodeError("non-canonical compact size");
  }
  return v;
}

ByteSpan ByteReader::bytes(std::size_t n) {
  need(n);
  ByteSpan out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Hash32 ByteReader::hash() { return Hash32::from_span(bytes(Hash32::kSize)); }

void ByteReader::expect_done(const char* what) const {
  if (!done()) {
    throw DecodeError(std::string(what) + ": " + std::to_string(remaining()) + " trailing bytes");
  }
}

}  // namespace flyclient
