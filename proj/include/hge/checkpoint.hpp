#pragma once

// Binary model checkpoints.
//
// Layout (little-endian):
//   8 bytes   magic "HGECKPT1"
//   u32       format version
//   u64 x 4   dim, entities, relations, times
//   u32       variant
//   u64       seed
//   u8        conjugate_object
//   f64[]     entity, rel_static, rel_dynamic, rel_weight, time tables
//
// Doubles are written as raw IEEE-754 bytes, so a write/read round trip is
// bit-exact.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "hge/errors.hpp"
#include "hge/model.hpp"

namespace hge {

namespace detail {

inline constexpr std::array<char, 8> kCheckpointMagic = {'H', 'G', 'E', 'C', 'K', 'P', 'T', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <class T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("truncated checkpoint");
  return value;
}

}  // namespace detail

inline void write_checkpoint(std::ostream& out, const ModelState& m) {
  const ModelConfig& c = m.config();
  out.write(detail::kCheckpointMagic.data(), detail::kCheckpointMagic.size());
  detail::write_pod<std::uint32_t>(out, detail::kCheckpointVersion);
  detail::write_pod<std::uint64_t>(out, c.dim);
  detail::write_pod<std::uint64_t>(out, c.entities);
  detail::write_pod<std::uint64_t>(out, c.relations);
  detail::write_pod<std::uint64_t>(out, c.times);
  detail::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(c.variant));
  detail::write_pod<std::uint64_t>(out, c.seed);
  detail::write_pod<std::uint8_t>(out, c.conjugate_object ? 1 : 0);
  for (const EmbeddingTable* t : {&m.entity, &m.rel_static, &m.rel_dynamic, &m.rel_weight, &m.time}) {
    const auto data = t->data();
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
  }
  if (!out) throw DataError("failed to write checkpoint");
}

inline ModelState read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != detail::kCheckpointMagic) throw DataError("not an HGE checkpoint");
  const auto version = detail::read_pod<std::uint32_t>(in);
  if (version != detail::kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  ModelConfig c;
  c.dim = detail::read_pod<std::uint64_t>(in);
  c.entities = detail::read_pod<std::uint64_t>(in);
  c.relations = detail::read_pod<std::uint64_t>(in);
  c.times = detail::read_pod<std::uint64_t>(in);
  const auto variant = detail::read_pod<std::uint32_t>(in);
  if (variant >= kAllVariants.size()) throw DataError("bad variant tag in checkpoint");
  c.variant = static_cast<Variant>(variant);
  c.seed = detail::read_pod<std::uint64_t>(in);
  c.conjugate_object = detail::read_pod<std::uint8_t>(in) != 0;
  ModelState m(c);
  for (EmbeddingTable* t : {&m.entity, &m.rel_static, &m.rel_dynamic, &m.rel_weight, &m.time}) {
    auto data = t->data();
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
    if (!in) throw DataError("truncated checkpoint tables");
  }
  return m;
}

inline void save_checkpoint(const std::string& path, const ModelState& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_checkpoint(out, m);
}

inline ModelState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace hge
