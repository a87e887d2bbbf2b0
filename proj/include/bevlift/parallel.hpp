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

#ifndef BEVLIFT__PARALLEL_HPP_
#define BEVLIFT__PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace bevlift
{

/// Worker count used by parallel_for. 0 selects hardware concurrency.
void set_num_threads(std::size_t n);
std::size_t num_threads();

/// Runs body(i) for i in [begin, end) split into contiguous static chunks.
///
/// Every index is visited exactly once, and callers only write to slots owned
/// by their index, so results do not depend on the worker count. Nested calls
/// from inside a worker run inline.
void parallel_for(
  std::size_t begin, std::size_t end, const std::function<void(std::size_t)> & body);

}  // namespace bevlift

#endif  // BEVLIFT__PARALLEL_HPP_
