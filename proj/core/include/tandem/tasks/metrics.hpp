// core/include/tandem/tasks/metrics.hpp

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

#ifndef TANDEM_TASKS_METRICS_HPP_
#define TANDEM_TASKS_METRICS_HPP_

#include <string>
#include <vector>

namespace tandem::tasks {

// Whitespace tokenization for WER.
std::vector<std::string> split_words(const std::string& text);

// (substitutions + insertions + deletions) / |reference| by minimal edit
// distance; may exceed 1. Throws DegenerateInput on an empty reference.
double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis);

// Fraction of positions where prediction equals label. Throws InvalidInput
// on length mismatch or empty input.
double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels);

// Unweighted average recall over classes 0..n_classes-1. Throws
// DegenerateInput when some class never occurs in the labels.
double uar(const std::vector<int>& predictions, const std::vector<int>& labels,
           int n_classes);

}  // namespace tandem::tasks

#endif  // TANDEM_TASKS_METRICS_HPP_
