#pragma once

// Length-prefixed bit sequences shared by every codec. Bits are packed
// MSB-first within each byte; the serialized form is
//   [u32 little-endian bit length][ceil(length / 8) payload bytes]
// with the padding bits of the final byte zero.

#include <cstdint>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mslab/bigcount.hpp"
#include "mslab/error.hpp"

namespace mslab {

class Bitstream {
 public:
  Bitstream() = default;

  std::size_t size() const noexcept { return bit_length_; }
  bool empty() const noexcept { return bit_length_ == 0; }
  std::span<const std::uint8_t> payload() const noexcept { return bytes_; }

  bool operator[](std::size_t i) const {
    if (i >= bit_length_) throw invalid_argument("Bitstream: bit index out of range");
    return (bytes_[i / 8] >> (7 - i % 8)) & 1u;
  }

  void push_back(bool bit) {
    if (bit_length_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - bit_length_ % 8));
    ++bit_length_;
  }

  /// Appends the low `width` bits of value, most significant first.
  void append_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) push_back((value >> i) & 1u);
  }

  /// Appends x as exactly `width` bits, most significant first.
  void append_big(const BigCount& x, std::uint64_t width) {
    for (std::uint64_t i = width; i-- > 0;) push_back(boost::multiprecision::bit_test(x, i));
  }

  void append(const Bitstream& other) {
    for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
  }

  /// "0101..." rendering of the bits.
  std::string to_string() const {
    std::string s;
    s.reserve(bit_length_);
    for (std::size_t i = 0; i < bit_length_; ++i) s.push_back((*this)[i] ? '1' : '0');
    return s;
  }

  static Bitstream from_string(std::string_view bits) {
    Bitstream b;
    for (char c : bits) {
      if (c == '0' || c == '1')
        b.push_back(c == '1');
      else
        throw decode_error(std::string("Bitstream: unexpected character '") + c + "'");
    }
    return b;
  }

  std::vector<std::uint8_t> serialize() const {
    if (bit_length_ > 0xFFFFFFFFull) throw invalid_argument("Bitstream: longer than 2^32-1 bits");
    std::vector<std::uint8_t> out;
    out.reserve(4 + bytes_.size());
    const auto len = static_cast<std::uint32_t>(bit_length_);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    out.insert(out.end(), bytes_.begin(), bytes_.end());
    return out;
  }

  static Bitstream deserialize(std::span<const std::uint8_t> data) {
    if (data.size() < 4) throw decode_error("Bitstream: missing 32-bit length header");
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(data[i]) << (8 * i);
    const std::size_t nbytes = (static_cast<std::size_t>(len) + 7) / 8;
    if (data.size() - 4 != nbytes)
      throw decode_error("Bitstream: payload holds " + std::to_string(data.size() - 4) +
                         " bytes, header implies " + std::to_string(nbytes));
    Bitstream b;
    b.bit_length_ = len;
    b.bytes_.assign(data.begin() + 4, data.end());
    if (len % 8 != 0) {
      const std::uint8_t pad_mask = static_cast<std::uint8_t>((1u << (8 - len % 8)) - 1u);
      if (b.bytes_.back() & pad_mask) throw decode_error("Bitstream: nonzero padding bits");
    }
    return b;
  }

  void write(std::ostream& out) const {
    const auto bytes = serialize();
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }

  static Bitstream read(std::istream& in) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
  }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;

 private:
  std::size_t bit_length_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Sequential reader over a Bitstream; reading past the end is a decode_error.
class BitReader {
 public:
  explicit BitReader(const Bitstream& bits) : bits_(&bits) {}

  bool read_bit() {
    if (pos_ >= bits_->size()) throw decode_error("BitReader: unexpected end of stream");
    return (*bits_)[pos_++];
  }

  std::uint64_t read_bits(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(read_bit());
    return v;
  }

  BigCount read_big(std::uint64_t width) {
    BigCount v = 0;
    for (std::uint64_t i = 0; i < width; ++i) {
      v <<= 1;
      if (read_bit()) v |= 1;
    }
    return v;
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bits_->size() - pos_; }
  bool at_end() const noexcept { return pos_ == bits_->size(); }

 private:
  const Bitstream* bits_;
  std::size_t pos_ = 0;
};

}  // namespace mslab
