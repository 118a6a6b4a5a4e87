// SPDX-License-Identifier: Apache-2.0

#include "ckgru/core/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace ckgru {

namespace {

constexpr char kMagic[] = "CKGRU1";
constexpr std::size_t kMagicLen = sizeof(kMagic) - 1;

template <typename U> void put_le(std::ostream &out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename U> bool get_le(std::istream &in, U &value) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    return false;
  value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    value |= static_cast<U>(bytes[i]) << (8 * i);
  return true;
}

template <typename U> U require_le(std::istream &in, const char *what) {
  U value{};
  if (!get_le(in, value))
    throw CheckpointError(std::string("checkpoint: truncated ") + what);
  return value;
}

} // namespace

void write_params(std::ostream &out, const ParamSet &params) {
  out.write(kMagic, kMagicLen);
  for (const auto &e : params.entries()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(e.value.rank()));
    for (std::size_t d : e.value.shape)
      put_le<std::uint64_t>(out, d);
    for (double v : e.value.values)
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out)
    throw CheckpointError("checkpoint: write failed");
}

ParamSet read_params(std::istream &in) {
  char magic[kMagicLen];
  in.read(magic, kMagicLen);
  if (in.gcount() != static_cast<std::streamsize>(kMagicLen) ||
      std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw CheckpointError("checkpoint: bad magic, expected CKGRU1");

  ParamSet params;
  for (;;) {
    std::uint32_t name_len = 0;
    if (!get_le(in, name_len)) {
      if (in.gcount() == 0)
        break;
      throw CheckpointError("checkpoint: truncated name length");
    }
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (in.gcount() != static_cast<std::streamsize>(name_len))
      throw CheckpointError("checkpoint: truncated name");
    const auto rank = require_le<std::uint32_t>(in, "rank");
    if (rank > Shape::kMaxRank)
      throw CheckpointError("checkpoint: parameter '" + name + "' has rank " +
                            std::to_string(rank));
    Shape shape(rank);
    for (auto &d : shape)
      d = static_cast<std::size_t>(require_le<std::uint64_t>(in, "shape"));
    std::vector<double> values(shape_size(shape));
    for (double &v : values)
      v = std::bit_cast<double>(require_le<std::uint64_t>(in, "values"));
    params.add(name, Tensor(std::move(shape), std::move(values)));
  }
  return params;
}

} // namespace ckgru
