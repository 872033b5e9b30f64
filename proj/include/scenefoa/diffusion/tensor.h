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

#ifndef SCENEFOA_DIFFUSION_TENSOR_H_
#define SCENEFOA_DIFFUSION_TENSOR_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace scenefoa::diffusion {

// Storage aligned for the widest vector unit, so vectorized reductions over
// it peel identically on every run.
using Buffer = std::vector<double, Eigen::aligned_allocator<double>>;

// Dense channels x rows x cols array, row-major within a channel. Rows are
// latent frames and cols frequency bins.
struct Tensor {
  int channels = 0;
  int rows = 0;
  int cols = 0;
  Buffer data;

  Tensor() = default;
  Tensor(int c, int r, int w, double fill = 0.0)
      : channels(c), rows(r), cols(w), data(static_cast<size_t>(c) * r * w, fill) {}

  size_t size() const { return data.size(); }
  int plane() const { return rows * cols; }
  double& at(int c, int r, int w) { return data[(static_cast<size_t>(c) * rows + r) * cols + w]; }
  double at(int c, int r, int w) const { return data[(static_cast<size_t>(c) * rows + r) * cols + w]; }
  bool SameShape(const Tensor& o) const {
    return channels == o.channels && rows == o.rows && cols == o.cols;
  }

  // channels x (rows * cols) view.
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> matrix() {
    return {data.data(), channels, plane()};
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> matrix() const {
    return {data.data(), channels, plane()};
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ParamSpec {
  std::string name;
  std::vector<int> shape;
  size_t offset = 0;
  size_t size = 0;
  bool decay = true;  // subject to weight decay
  double lr_scale = 1.0;
};

// Flat parameter vector with named slices.
class ParamSet {
 public:
  size_t Add(const std::string& name, std::vector<int> shape, bool decay = true);
  const std::vector<ParamSpec>& specs() const { return specs_; }
  const ParamSpec* Find(const std::string& name) const;
  void SetLearningRateScale(const std::string& name, double scale);
  Buffer& values() { return values_; }
  const Buffer& values() const { return values_; }
  size_t size() const { return values_.size(); }

 private:
  std::vector<ParamSpec> specs_;
  Buffer values_;
};

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_TENSOR_H_
