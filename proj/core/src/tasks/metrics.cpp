// core/src/tasks/metrics.cpp

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

#include "tandem/tasks/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "tandem/common/error.hpp"

namespace tandem::tasks {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

double wer(const std::vector<std::string>& reference,
           const std::vector<std::string>& hypothesis) {
  if (reference.empty())
    throw DegenerateInput("wer: empty reference");
  const std::size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub =
          prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(n);
}

double accuracy(const std::vector<int>& predictions,
                const std::vector<int>& labels) {
  if (predictions.size() != labels.size() || labels.empty())
    throw InvalidInput("accuracy: need equal-length non-empty inputs");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (predictions[i] == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double uar(const std::vector<int>& predictions, const std::vector<int>& labels,
           int n_classes) {
  if (predictions.size() != labels.size() || labels.empty())
    throw InvalidInput("uar: need equal-length non-empty inputs");
  if (n_classes < 1) throw InvalidInput("uar: need at least one class");
  std::vector<std::size_t> total(static_cast<std::size_t>(n_classes), 0);
  std::vector<std::size_t> hit(static_cast<std::size_t>(n_classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= n_classes)
      throw InvalidInput("uar: label " + std::to_string(c) + " outside [0, " +
                         std::to_string(n_classes) + ")");
    ++total[static_cast<std::size_t>(c)];
    if (predictions[i] == c) ++hit[static_cast<std::size_t>(c)];
  }
  double sum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    if (total[static_cast<std::size_t>(c)] == 0)
      throw DegenerateInput("uar: class " + std::to_string(c) +
                            " absent from labels");
    sum += static_cast<double>(hit[static_cast<std::size_t>(c)]) /
           static_cast<double>(total[static_cast<std::size_t>(c)]);
  }
  return sum / n_classes;
}

}  // namespace tandem::tasks
