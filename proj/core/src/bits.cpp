#include "certilab/bits.hpp"

#include <bit>

#include "certilab/errors.hpp"

namespace certilab {

void Bits::push_back(bool bit) {
  if ((size_ & 7) == 0) {
    bytes_.push_back(0);
  }
  if (bit) {
    bytes_.back() |= static_cast<std::uint8_t>(1U << (7 - (size_ & 7)));
  }
  ++size_;
}

void Bits::append(const Bits& other) {
  for (std::size_t i = 0; i < other.size(); ++i) {
    push_back(other[i]);
  }
}

Bits Bits::from_uint(std::uint64_t value, unsigned width) {
  BitWriter w;
  w.uint(value, width);
  return w.finish();
}

std::string Bits::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < size_; i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (i + j < size_ && (*this)[i + j]) {
        nibble |= 1U;
      }
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

Bits Bits::from_hex(std::string_view hex, std::size_t nbits) {
  if (hex.size() != (nbits + 3) / 4) {
    throw ParseError("hex payload length does not match its bit length");
  }
  Bits out;
  for (std::size_t i = 0; i < nbits; ++i) {
    char c = hex[i / 4];
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw ParseError("invalid hex digit in payload");
    }
    out.push_back(((nibble >> (3 - i % 4)) & 1U) != 0);
  }
  return out;
}

std::string Bits::to_string() const {
  std::string out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) {
    out.push_back((*this)[i] ? '1' : '0');
  }
  return out;
}

Bits Bits::from_string(std::string_view binary) {
  Bits out;
  for (char c : binary) {
    if (c != '0' && c != '1') {
      throw ParseError("bit strings may only contain '0' and '1'");
    }
    out.push_back(c == '1');
  }
  return out;
}

void BitWriter::uint(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) {
    out_.push_back(((value >> i) & 1U) != 0);
  }
}

void BitWriter::gamma(std::uint64_t value) {
  // value + 1 overflows only for the maximum, which no certificate field uses.
  std::uint64_t v = value + 1;
  unsigned len = static_cast<unsigned>(std::bit_width(v));
  for (unsigned i = 1; i < len; ++i) {
    out_.push_back(false);
  }
  uint(v, len);
}

bool BitReader::bit() {
  if (!ok_ || pos_ >= in_->size()) {
    ok_ = false;
    return false;
  }
  return (*in_)[pos_++];
}

std::uint64_t BitReader::uint(unsigned width) {
  if (!ok_ || width > 64 || in_->size() - pos_ < width) {
    ok_ = false;
    return 0;
  }
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) {
    v = (v << 1) | ((*in_)[pos_++] ? 1U : 0U);
  }
  return v;
}

std::uint64_t BitReader::gamma() {
  unsigned zeros = 0;
  while (ok_ && pos_ < in_->size() && !(*in_)[pos_]) {
    ++zeros;
    ++pos_;
  }
  if (zeros > 63) {
    ok_ = false;
    return 0;
  }
  std::uint64_t v = uint(zeros + 1);
  if (!ok_) {
    return 0;
  }
  return v - 1;
}

unsigned bit_width_for(std::uint64_t max_value) {
  return max_value == 0 ? 1U : static_cast<unsigned>(std::bit_width(max_value));
}

}  // namespace certilab
