// src/base/parallel.h

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LIDKIT_BASE_PARALLEL_H_
#define LIDKIT_BASE_PARALLEL_H_

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lid {

// Every parallel kernel in this codebase writes disjoint outputs per index,
// so results are bitwise identical for any thread count. Reductions go
// through PairwiseSum below, never through floating-point omp reductions.

int MaxThreads();
void SetThreads(int n);

template <typename F>
void ParallelFor(std::int64_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; i++) f(i);
#else
  for (std::int64_t i = 0; i < n; i++) f(i);
#endif
}

// Fixed-shape pairwise summation: the reduction tree depends only on n, so
// the result is independent of thread count and identical across runs.
double PairwiseSum(const double* x, std::int64_t n);
double PairwiseSum(const std::vector<double>& x);

}  // namespace lid

#endif  // LIDKIT_BASE_PARALLEL_H_
