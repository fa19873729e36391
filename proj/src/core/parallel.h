// Copyright 2026 The MemAudit Authors.
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

#ifndef MEMAUDIT_CORE_PARALLEL_H_
#define MEMAUDIT_CORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace memaudit {

// Default worker cap: MEMAUDIT_THREADS if set and positive, else the
// hardware concurrency (at least 1). Overridable process-wide.
std::size_t DefaultThreads();
void SetDefaultThreads(std::size_t n);  // 0 restores the environment default

// Runs fn(chunk) for chunk in [0, chunks) on up to `threads` workers
// (0 = DefaultThreads()). Chunks are claimed dynamically, so fn must only
// write to state owned by its chunk. The first exception is rethrown after
// all workers join.
void ParallelFor(std::size_t chunks, std::size_t threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace memaudit

#endif  // MEMAUDIT_CORE_PARALLEL_H_
