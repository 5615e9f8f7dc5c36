// Copyright 2026 The hetpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetpred/checkpoint.hpp"

#include "hetpred/errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace hetpred
{

namespace
{

constexpr std::string_view kMagic = "HOLIGRAPH1";

template <typename U>
void put_le(std::ostream & out, U value)
{
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream & in, const char * what)
{
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw LoadError(std::string("checkpoint truncated while reading ") + what);
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return value;
}

}  // namespace

void write_checkpoint(std::ostream & out, const ParameterStore & params)
{
  out.write(kMagic.data(), kMagic.size());
  for (const auto & [path, tensor] : params) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(path.size()));
    out.write(path.data(), static_cast<std::streamsize>(path.size()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.rank()));
    for (auto extent : tensor.shape().dims()) {
      put_le<std::uint64_t>(out, extent);
    }
    for (double v : tensor.values()) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
}

ParameterStore read_checkpoint(std::istream & in)
{
  std::string magic(kMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (in.gcount() != static_cast<std::streamsize>(kMagic.size()) || magic != kMagic) {
    throw LoadError("not a checkpoint: missing HOLIGRAPH1 header");
  }
  ParameterStore params;
  while (in.peek() != std::char_traits<char>::eof()) {
    const auto len = get_le<std::uint32_t>(in, "path length");
    std::string path(len, '\0');
    in.read(path.data(), len);
    if (in.gcount() != static_cast<std::streamsize>(len)) {
      throw LoadError("checkpoint truncated while reading a path");
    }
    const auto rank = get_le<std::uint32_t>(in, "rank");
    if (rank > 4) {
      throw LoadError("parameter '" + path + "' has rank " + std::to_string(rank));
    }
    std::vector<std::size_t> dims(rank);
    for (auto & d : dims) {
      d = static_cast<std::size_t>(get_le<std::uint64_t>(in, "extent"));
    }
    Shape shape(std::move(dims));
    std::vector<double> values(shape.numel());
    for (auto & v : values) {
      v = std::bit_cast<double>(get_le<std::uint64_t>(in, path.c_str()));
    }
    params.insert(path, Tensor(std::move(shape), std::move(values), true));
  }
  return params;
}

void save_checkpoint(const std::filesystem::path & path, const ParameterStore & params)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write checkpoint " + path.string());
  }
  write_checkpoint(out, params);
  if (!out) {
    throw Error("write failed for checkpoint " + path.string());
  }
}

ParameterStore load_checkpoint(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("cannot open checkpoint " + path.string());
  }
  return read_checkpoint(in);
}

}  // namespace hetpred
