#include "congest/message.hpp"

#include <algorithm>

#include "congest/errors.hpp"

namespace congest {

Message Message::make(std::uint8_t tag, std::initializer_list<std::int64_t> fields) {
  if (fields.size() > kMaxFields) throw InvalidArgument("message has more than 4 fields");
  Message m;
  m.tag = tag;
  m.size = static_cast<std::uint8_t>(fields.size());
  std::size_t i = 0;
  for (auto x : fields) m.f[i++] = x;
  return m;
}

bool Message::operator==(const Message& o) const {
  if (tag != o.tag || size != o.size) return false;
  for (std::size_t i = 0; i < size; ++i)
    if (f[i] != o.f[i]) return false;
  return true;
}

bool Message::operator<(const Message& o) const {
  if (tag != o.tag) return tag < o.tag;
  if (size != o.size) return size < o.size;
  for (std::size_t i = 0; i < size; ++i)
    if (f[i] != o.f[i]) return f[i] < o.f[i];
  return false;
}

std::uint32_t field_bits(std::size_t n) { return ceil_log2(n) + 8; }

bool fits_field(std::int64_t x, std::size_t n) {
  const std::int64_t cap = (std::int64_t{1} << field_bits(n)) - 1;
  return x >= -1 && x < cap;
}

void check_payload(const Message& m, std::size_t n, NodeId node, std::uint64_t round) {
  if (m.size > kMaxFields) throw PayloadError(node, round, "more than 4 fields");
  for (std::size_t i = 0; i < m.size; ++i)
    if (!fits_field(m.f[i], n))
      throw PayloadError(node, round,
                         "field " + std::to_string(i) + " value " + std::to_string(m.f[i]) + " exceeds " +
                             std::to_string(field_bits(n)) + "-bit budget");
}

std::size_t encoded_words(std::span<const Delivery> ds) {
  std::size_t fields = 0;
  for (const auto& d : ds) fields += 1 + d.msg.size;
  return words_for_fields(fields);
}

void canonicalize(std::vector<Delivery>& ds) {
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
}

}  // namespace congest
