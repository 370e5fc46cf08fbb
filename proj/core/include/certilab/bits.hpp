#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace certilab {

/// Finite bit string. Bit 0 is the first bit written; hex rendering packs bits
/// most-significant first within each nibble.
class Bits {
 public:
  Bits() = default;

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }
  [[nodiscard]] bool operator[](std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U;
  }
  void push_back(bool bit);
  void flip(std::size_t i) { bytes_[i >> 3] ^= static_cast<std::uint8_t>(1U << (7 - (i & 7))); }
  void append(const Bits& other);

  /// Low `width` bits of `value`, most significant first.
  static Bits from_uint(std::uint64_t value, unsigned width);

  [[nodiscard]] std::string to_hex() const;
  /// Inverse of to_hex given the bit length; throws ParseError on bad input.
  static Bits from_hex(std::string_view hex, std::size_t nbits);
  [[nodiscard]] std::string to_string() const;  // '0'/'1' characters
  static Bits from_string(std::string_view binary);

  friend bool operator==(const Bits&, const Bits&) = default;
  friend std::strong_ordering operator<=>(const Bits& a, const Bits& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) {
      return c;
    }
    return a.bytes_ <=> b.bytes_;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

/// Appends fixed-width and self-delimiting integers to a bit string.
class BitWriter {
 public:
  void bit(bool b) { out_.push_back(b); }
  /// Low `width` bits of `value`, most significant first.
  void uint(std::uint64_t value, unsigned width);
  /// Elias gamma code of value + 1 (so zero is encodable): 2*floor(log2(v+1))+1 bits.
  void gamma(std::uint64_t value);
  void bits(const Bits& b) { out_.append(b); }

  [[nodiscard]] const Bits& peek() const { return out_; }
  [[nodiscard]] Bits finish() { return std::move(out_); }

 private:
  Bits out_;
};

/// Sequential reader with a sticky failure flag: once a read runs past the end
/// or hits a malformed code, every subsequent read yields zero and ok() is false.
/// Decoders check ok() (and usually at_end()) once at the end.
class BitReader {
 public:
  explicit BitReader(const Bits& in) : in_(&in) {}

  bool bit();
  std::uint64_t uint(unsigned width);
  std::uint64_t gamma();

  [[nodiscard]] bool ok() const { return ok_; }
  [[nodiscard]] bool at_end() const { return pos_ == in_->size(); }
  [[nodiscard]] std::size_t remaining() const { return ok_ ? in_->size() - pos_ : 0; }
  /// Marks the stream as failed; used by decoders for semantic violations.
  void fail() { ok_ = false; }

 private:
  const Bits* in_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

/// Number of bits needed to write any value in [0, max_value]; at least 1.
unsigned bit_width_for(std::uint64_t max_value);

}  // namespace certilab
