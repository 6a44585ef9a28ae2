#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "congest/graph.hpp"

namespace congest {

inline constexpr std::size_t kMaxFields = 4;

// Up to four integer fields plus a small tag. A field holds
// ceil(log2 n) + 8 bits; -1 is the reserved all-ones value.
struct Message {
  std::uint8_t tag = 0;
  std::uint8_t size = 0;
  std::array<std::int64_t, kMaxFields> f{};

  static Message make(std::uint8_t tag, std::initializer_list<std::int64_t> fields);
  std::int64_t operator[](std::size_t i) const { return f[i]; }
  bool operator==(const Message& o) const;
  bool operator<(const Message& o) const;
};

struct Delivery {
  NodeId from;
  Message msg;
  bool operator==(const Delivery& o) const { return from == o.from && msg == o.msg; }
  bool operator<(const Delivery& o) const { return from != o.from ? from < o.from : msg < o.msg; }
};

using State = std::vector<std::int64_t>;
using Record = std::vector<std::int64_t>;

std::uint32_t field_bits(std::size_t n);
// Bits in one full message payload.
inline std::uint64_t word_bits(std::size_t n) { return kMaxFields * field_bits(n); }
bool fits_field(std::int64_t x, std::size_t n);
// Throws PayloadError when a field is out of budget.
void check_payload(const Message& m, std::size_t n, NodeId node, std::uint64_t round);

// Encoded size of a set of deliveries in message words: each delivery costs
// one field for the sender plus its payload fields, four fields per word.
std::size_t encoded_words(std::span<const Delivery> ds);
inline std::size_t words_for_fields(std::size_t fields) { return (fields + kMaxFields - 1) / kMaxFields; }

// Sorts by sender and removes exact duplicates.
void canonicalize(std::vector<Delivery>& ds);

}  // namespace congest
