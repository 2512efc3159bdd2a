// core/include/tandem/enhancer/checkpoint.hpp

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

#ifndef TANDEM_ENHANCER_CHECKPOINT_HPP_
#define TANDEM_ENHANCER_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tandem/nn/layers.hpp"

namespace tandem::enhancer {

// Self-describing model snapshot: kind tag, config echo (raw JSON), build
// seed, and every tensor (parameters and state buffers) keyed by its stable
// collected name. Shared by the enhancer and the task models.
struct Checkpoint {
  std::string kind;
  std::string config_json = "{}";
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, nn::Tensor>> tensors;

  const nn::Tensor* find(const std::string& name) const;
};

// Snapshot from live collections. Buffer tensors are copied as-is.
Checkpoint snapshot(const std::string& kind, const std::string& config_json,
                    std::uint64_t seed,
                    const std::vector<nn::NamedParam>& params,
                    const std::vector<nn::NamedBuffer>& buffers);

// Writes tensors back into a live model. Throws DataError when a collected
// name is missing from the checkpoint or shapes disagree.
void restore(const Checkpoint& ckpt, std::vector<nn::NamedParam>& params,
             std::vector<nn::NamedBuffer>& buffers);

// Binary container: magic, format-version integer, JSON manifest, raw
// little-endian doubles in manifest order.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);  // DataError

}  // namespace tandem::enhancer

#endif  // TANDEM_ENHANCER_CHECKPOINT_HPP_
