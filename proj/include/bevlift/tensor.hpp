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

#ifndef BEVLIFT__TENSOR_HPP_
#define BEVLIFT__TENSOR_HPP_

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace bevlift
{

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape & shape);

/// Dense row-major array of 32-bit reals.
///
/// The single carrier type for features, distributions and grids. Indexing
/// through `at()` is bounds-checked in debug builds only; hot loops should
/// compute flat offsets once and use `operator[]`.
class Tensor
{
public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> values);

  const Shape & shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }
  float * data() noexcept { return data_.data(); }
  const float * data() const noexcept { return data_.data(); }

  float & operator[](std::size_t flat) noexcept { return data_[flat]; }
  float operator[](std::size_t flat) const noexcept { return data_[flat]; }

  template <typename... Idx>
  float & at(Idx... idx)
  {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <typename... Idx>
  float at(Idx... idx) const
  {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  std::size_t offset(std::initializer_list<std::size_t> idx) const;

  /// Same data, new shape with equal element count.
  Tensor reshaped(Shape shape) const;

  void fill(float value);

  bool all_finite() const noexcept;

  bool operator==(const Tensor & other) const = default;

private:
  Shape shape_;
  std::vector<float> data_;
};

std::size_t element_count(const Shape & shape);

/// Maximum absolute element-wise difference; shapes must agree.
double max_abs_diff(const Tensor & a, const Tensor & b);

}  // namespace bevlift

#endif  // BEVLIFT__TENSOR_HPP_
