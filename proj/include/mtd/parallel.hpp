/*
* Copyright (C) 2026 The mtd Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef MTD_PARALLEL_HPP
#define MTD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mtd
{

/// Worker count used by parallel_for; defaults to 1.
void set_thread_count(int threads);
int thread_count();

/**
 * Run body(i) for i in [0, n) over contiguous chunks. Each index is handled
 * by exactly one worker, so results written to index-owned slots are
 * independent of the thread count. The first exception thrown (lowest
 * chunk) is rethrown after all workers join.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace mtd

#endif // MTD_PARALLEL_HPP
