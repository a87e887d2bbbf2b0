// Copyright 2026 The bevlift Authors
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

#include "bevlift/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "bevlift/error.hpp"

namespace bevlift
{
namespace
{

constexpr std::array<char, 4> kMagic = {'L', 'X', 'T', '1'};
constexpr std::uint32_t kMaxRank = 16;

void put_u32(std::ostream & os, std::uint32_t v)
{
  const char bytes[4] = {
    static_cast<char>(v & 0xffu), static_cast<char>((v >> 8) & 0xffu),
    static_cast<char>((v >> 16) & 0xffu), static_cast<char>((v >> 24) & 0xffu)};
  os.write(bytes, 4);
}

std::uint32_t get_u32(std::istream & is)
{
  unsigned char bytes[4];
  if (!is.read(reinterpret_cast<char *>(bytes), 4)) {
    throw DataError("LXT: truncated header");
  }
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void write_lxt(std::ostream & os, const Tensor & tensor)
{
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, static_cast<std::uint32_t>(tensor.rank()));
  for (auto d : tensor.shape()) put_u32(os, static_cast<std::uint32_t>(d));
  std::vector<char> buffer(tensor.size() * 4);
  for (std::size_t i = 0; i < tensor.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(tensor[i]);
    buffer[4 * i + 0] = static_cast<char>(bits & 0xffu);
    buffer[4 * i + 1] = static_cast<char>((bits >> 8) & 0xffu);
    buffer[4 * i + 2] = static_cast<char>((bits >> 16) & 0xffu);
    buffer[4 * i + 3] = static_cast<char>((bits >> 24) & 0xffu);
  }
  os.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!os) throw DataError("LXT: write failed");
}

Tensor read_lxt(std::istream & is)
{
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("LXT: bad magic, expected LXT1");
  }
  const std::uint32_t rank = get_u32(is);
  if (rank > kMaxRank) throw DataError("LXT: rank " + std::to_string(rank) + " too large");
  Shape shape(rank);
  for (auto & d : shape) d = get_u32(is);
  const std::size_t count = element_count(shape);
  std::vector<unsigned char> buffer(count * 4);
  if (!is.read(reinterpret_cast<char *>(buffer.data()), static_cast<std::streamsize>(buffer.size()))) {
    throw DataError("LXT: truncated payload for shape " + shape_to_string(shape));
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(buffer[4 * i]) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 2]) << 16) |
                               (static_cast<std::uint32_t>(buffer[4 * i + 3]) << 24);
    values[i] = std::bit_cast<float>(bits);
  }
  return Tensor(std::move(shape), std::move(values));
}

void save_lxt(const std::filesystem::path & path, const Tensor & tensor)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_lxt(os, tensor);
}

Tensor load_lxt(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  try {
    return read_lxt(is);
  } catch (const DataError & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_archive(std::ostream & os, const TensorArchive & archive)
{
  std::vector<std::string> blobs;
  blobs.reserve(archive.size());
  os << "LXTA1\n";
  for (const auto & [name, tensor] : archive) {
    if (name.empty() || name.find_first_of(" \t\n\r") != std::string::npos) {
      throw InvalidArgument("LXTA: invalid tensor name '" + name + "'");
    }
    std::ostringstream blob(std::ios::binary);
    write_lxt(blob, tensor);
    blobs.push_back(blob.str());
    os << name << ' ' << blobs.back().size() << '\n';
  }
  os << "END\n";
  for (const auto & blob : blobs) os.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!os) throw DataError("LXTA: write failed");
}

TensorArchive read_archive(std::istream & is)
{
  std::string line;
  if (!std::getline(is, line) || line != "LXTA1") throw DataError("LXTA: bad magic");
  std::vector<std::pair<std::string, std::size_t>> index;
  while (true) {
    if (!std::getline(is, line)) throw DataError("LXTA: index not terminated by END");
    if (line == "END") break;
    std::istringstream fields(line);
    std::string name;
    std::size_t bytes = 0;
    std::string extra;
    if (!(fields >> name >> bytes) || (fields >> extra)) {
      throw DataError("LXTA: malformed index line '" + line + "'");
    }
    index.emplace_back(name, bytes);
  }
  TensorArchive archive;
  for (const auto & [name, bytes] : index) {
    std::string blob(bytes, '\0');
    if (!is.read(blob.data(), static_cast<std::streamsize>(bytes))) {
      throw DataError("LXTA: truncated blob for '" + name + "'");
    }
    std::istringstream blob_stream(blob, std::ios::binary);
    Tensor tensor = read_lxt(blob_stream);
    if (blob_stream.peek() != std::char_traits<char>::eof()) {
      throw DataError("LXTA: blob size mismatch for '" + name + "'");
    }
    if (!archive.emplace(name, std::move(tensor)).second) {
      throw DataError("LXTA: duplicate tensor name '" + name + "'");
    }
  }
  return archive;
}

void save_archive(const std::filesystem::path & path, const TensorArchive & archive)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path.string() + " for writing");
  write_archive(os, archive);
}

TensorArchive load_archive(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  try {
    return read_archive(is);
  } catch (const DataError & e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

const Tensor & archive_get(const TensorArchive & archive, const std::string & key)
{
  const auto it = archive.find(key);
  if (it == archive.end()) throw DataError("archive has no tensor named '" + key + "'");
  return it->second;
}

}  // namespace bevlift
