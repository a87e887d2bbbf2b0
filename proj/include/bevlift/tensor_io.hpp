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

#ifndef BEVLIFT__TENSOR_IO_HPP_
#define BEVLIFT__TENSOR_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "bevlift/tensor.hpp"

namespace bevlift
{

// LXT single-tensor layout:
//   "LXT1" | u32 rank | u32 dims[rank] | f32 values[prod(dims)]
// All integers and reals little-endian, values row-major.
//
// LXTA named archive layout:
//   "LXTA1\n"
//   one "<name> <byte_count>\n" line per tensor
//   "END\n"
//   the LXT blobs concatenated in index order
// Names may not contain whitespace.

void write_lxt(std::ostream & os, const Tensor & tensor);
Tensor read_lxt(std::istream & is);

void save_lxt(const std::filesystem::path & path, const Tensor & tensor);
Tensor load_lxt(const std::filesystem::path & path);

using TensorArchive = std::map<std::string, Tensor>;

void write_archive(std::ostream & os, const TensorArchive & archive);
TensorArchive read_archive(std::istream & is);

void save_archive(const std::filesystem::path & path, const TensorArchive & archive);
TensorArchive load_archive(const std::filesystem::path & path);

/// Lookup that reports the missing key instead of throwing std::out_of_range.
const Tensor & archive_get(const TensorArchive & archive, const std::string & key);

}  // namespace bevlift

#endif  // BEVLIFT__TENSOR_IO_HPP_
