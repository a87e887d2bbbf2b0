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

#include "bevlift/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "bevlift/error.hpp"

namespace bevlift
{

std::string shape_to_string(const Shape & shape)
{
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ')';
  return os.str();
}

std::size_t element_count(const Shape & shape)
{
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, float fill)
: shape_(std::move(shape)), data_(element_count(shape_), fill)
{
}

Tensor::Tensor(Shape shape, std::vector<float> values)
: shape_(std::move(shape)), data_(std::move(values))
{
  if (data_.size() != element_count(shape_)) {
    throw InvalidArgument(
      "tensor data has " + std::to_string(data_.size()) + " values, shape " +
      shape_to_string(shape_) + " needs " + std::to_string(element_count(shape_)));
  }
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const
{
  assert(idx.size() == shape_.size());
  std::size_t flat = 0;
  std::size_t axis = 0;
  for (auto i : idx) {
    assert(i < shape_[axis]);
    flat = flat * shape_[axis] + i;
    ++axis;
  }
  return flat;
}

Tensor Tensor::reshaped(Shape shape) const
{
  if (element_count(shape) != data_.size()) {
    throw InvalidArgument(
      "cannot reshape " + shape_to_string(shape_) + " to " + shape_to_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(float value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const noexcept
{
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

double max_abs_diff(const Tensor & a, const Tensor & b)
{
  if (a.shape() != b.shape()) {
    throw InvalidArgument(
      "shape mismatch " + shape_to_string(a.shape()) + " vs " + shape_to_string(b.shape()));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  }
  return worst;
}

}  // namespace bevlift
