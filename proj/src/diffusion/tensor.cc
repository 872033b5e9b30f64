// Copyright 2026 The scenefoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenefoa/diffusion/tensor.h"

namespace scenefoa::diffusion {

size_t ParamSet::Add(const std::string& name, std::vector<int> shape, bool decay) {
  size_t count = 1;
  for (int d : shape) count *= static_cast<size_t>(d);
  ParamSpec spec{name, std::move(shape), values_.size(), count, decay};
  values_.resize(values_.size() + count, 0.0);
  specs_.push_back(std::move(spec));
  return specs_.back().offset;
}

const ParamSpec* ParamSet::Find(const std::string& name) const {
  for (const auto& s : specs_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void ParamSet::SetLearningRateScale(const std::string& name, double scale) {
  for (auto& s : specs_) {
    if (s.name == name) s.lr_scale = scale;
  }
}

}  // namespace scenefoa::diffusion
