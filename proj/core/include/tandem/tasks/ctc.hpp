// core/include/tandem/tasks/ctc.hpp

// Copyright 2026  Tandem Authors

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

#ifndef TANDEM_TASKS_CTC_HPP_
#define TANDEM_TASKS_CTC_HPP_

#include <vector>

#include "tandem/nn/variable.hpp"

namespace tandem::tasks {

// Symbol id 0 is the blank throughout.
inline constexpr int kCtcBlank = 0;

// Frames needed for any valid alignment: one per token plus a separating
// blank between equal neighbours.
int ctc_min_frames(const std::vector<int>& target);

// Negative log alignment probability of `target` under the logits, summed
// over all blank-collapse-compatible paths. Logits are laid out
// [symbols x frames] with a softmax taken per frame; the recursion runs in
// log space. Throws InfeasibleTarget when frames < ctc_min_frames and
// InvalidInput on malformed targets or shapes.
nn::Variable ctc_loss_op(const nn::Variable& logits,
                         const std::vector<int>& target);

// Per-frame argmax followed by the collapse rule: merge repeats, then drop
// blanks. Input layout [symbols x frames].
std::vector<int> ctc_greedy_decode(const nn::Tensor& logits);

// The collapse rule alone, for already-chosen per-frame symbols.
std::vector<int> ctc_collapse(const std::vector<int>& path);

}  // namespace tandem::tasks

#endif  // TANDEM_TASKS_CTC_HPP_
