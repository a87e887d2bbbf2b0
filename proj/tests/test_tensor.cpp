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


#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "bevlift/error.hpp"
#include "bevlift/tensor.hpp"
#include "bevlift/tensor_io.hpp"

using bevlift::Shape;
using bevlift::Tensor;

TEST(Tensor, ShapeAndRowMajorOffsets)
{
  Tensor t({2, 3, 4});
  EXPECT_EQ(t.size(), 24u);
  EXPECT_EQ(t.rank(), 3u);
  EXPECT_EQ(t.offset({1, 2, 3}), 23u);
  EXPECT_EQ(t.offset({1, 0, 0}), 12u);
  t.at(1, 2, 3) = 5.0f;
  EXPECT_EQ(t[23], 5.0f);
}

TEST(Tensor, RejectsMismatchedValueCount)
{
  EXPECT_THROW(Tensor({2, 2}, std::vector<float>(3)), bevlift::InvalidArgument);
  EXPECT_THROW(Tensor({2, 2}).reshaped({3}), bevlift::InvalidArgument);
}

TEST(Tensor, ReshapeKeepsData)
{
  Tensor t({2, 3}, {0, 1, 2, 3, 4, 5});
  const Tensor r = t.reshaped({3, 2});
  EXPECT_EQ(r.shape(), (Shape{3, 2}));
  EXPECT_EQ(r.at(2, 1), 5.0f);
}

TEST(Tensor, FiniteCheckAndMaxAbsDiff)
{
  Tensor a({3}, {1, 2, 3});
  Tensor b({3}, {1, 2.5f, 3});
  EXPECT_TRUE(a.all_finite());
  EXPECT_DOUBLE_EQ(bevlift::max_abs_diff(a, b), 0.5);
  b[0] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_FALSE(b.all_finite());
  EXPECT_THROW(bevlift::max_abs_diff(a, Tensor({4})), bevlift::InvalidArgument);
}

TEST(TensorIo, LxtByteLayout)
{
  std::ostringstream os;
  bevlift::write_lxt(os, Tensor({2}, {1.0f, -2.0f}));
  const std::string bytes = os.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 8u);
  EXPECT_EQ(bytes.substr(0, 4), "LXT1");
  EXPECT_EQ(bytes[4], 1);  // rank, little endian
  EXPECT_EQ(bytes[8], 2);  // dim 0
  // 1.0f = 0x3F800000 little endian.
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 0x00);
  EXPECT_EQ(static_cast<unsigned char>(bytes[15]), 0x3F);
}

TEST(TensorIo, LxtRoundTrip)
{
  Tensor t({2, 3, 1}, {0.5f, -1, 2, 3.25f, 1e-20f, 7});
  std::stringstream ss;
  bevlift::write_lxt(ss, t);
  EXPECT_EQ(bevlift::read_lxt(ss), t);
}

TEST(TensorIo, LxtRejectsBadInput)
{
  std::istringstream bad_magic("LXT2\x01\x00\x00\x00");
  EXPECT_THROW(bevlift::read_lxt(bad_magic), bevlift::DataError);
  std::stringstream ss;
  bevlift::write_lxt(ss, Tensor({4}, 1.0f));
  std::string truncated = ss.str();
  truncated.resize(truncated.size() - 2);
  std::istringstream is(truncated);
  EXPECT_THROW(bevlift::read_lxt(is), bevlift::DataError);
}

TEST(TensorIo, ArchiveRoundTrip)
{
  bevlift::TensorArchive a;
  a["occ.weight"] = Tensor({2, 3}, 0.25f);
  a["occ.bias"] = Tensor({2}, {1, -1});
  a["empty"] = Tensor({0, 4});
  std::stringstream ss;
  bevlift::write_archive(ss, a);
  EXPECT_EQ(ss.str().substr(0, 6), "LXTA1\n");
  const auto b = bevlift::read_archive(ss);
  EXPECT_EQ(a, b);
  EXPECT_THROW(bevlift::archive_get(b, "missing"), bevlift::DataError);
}

TEST(TensorIo, ArchiveRejectsDuplicatesAndTruncation)
{
  bevlift::TensorArchive a;
  a["x"] = Tensor({3}, 2.0f);
  std::stringstream ss;
  bevlift::write_archive(ss, a);
  std::string text = ss.str();
  std::istringstream truncated(text.substr(0, text.size() - 3));
  EXPECT_THROW(bevlift::read_archive(truncated), bevlift::DataError);

  // Same entry listed twice in the index.
  const auto end = text.find("END\n");
  const std::string index_line = text.substr(6, end - 6);
  const std::string blob = text.substr(end + 4);
  std::istringstream dup("LXTA1\n" + index_line + index_line + "END\n" + blob + blob);
  EXPECT_THROW(bevlift::read_archive(dup), bevlift::DataError);
}
