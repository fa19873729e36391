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

#ifndef MEMAUDIT_CONTRASTIVE_POOLING_H_
#define MEMAUDIT_CONTRASTIVE_POOLING_H_

#include <cstddef>
#include <vector>

#include "core/tensor.h"

namespace memaudit::contrastive {

// Mean-pools `img` over a regular partition into `grid` cells (same rank as
// the image; cell k along an axis of extent n spans [k*n/g, (k+1)*n/g)) and
// flattens row-major. Output length is product(grid).
std::vector<float> PoolFeatures(const ImageTensor& img,
                                const std::vector<std::size_t>& grid);

}  // namespace memaudit::contrastive

#endif  // MEMAUDIT_CONTRASTIVE_POOLING_H_
