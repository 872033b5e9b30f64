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

#include "scenefoa/metrics/distribution.h"

#include <algorithm>
#include <cmath>

#include "scenefoa/core/error.h"
#include "scenefoa/core/random.h"
#include "scenefoa/dsp/band_bank.h"

namespace scenefoa::metrics {

namespace {

constexpr uint64_t kExtractorSeed = 0x5eedf0a;
constexpr double kRidge = 1e-4;
constexpr double kShrinkage = 0.1;

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

const Eigen::MatrixXd& Projection() {
  static const Eigen::MatrixXd p = [] {
    Rng rng(kExtractorSeed, "fd-extractor");
    Eigen::MatrixXd m(kEmbeddingDims, kRawFeatureDims);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) m(i, j) = rng.Normal() / std::sqrt(kRawFeatureDims);
    }
    return m;
  }();
  return p;
}

}  // namespace

std::array<double, kBandEnergyDims> BandLogEnergy(const foa::FoaClip& clip) {
  std::array<double, kBandEnergyDims> out{};
  const auto& bank = dsp::OctaveBandBank::ForRate(clip.sample_rate());
  for (int c = 0; c < 4; ++c) {
    const auto bands = bank.Split(clip.channels()[c]);
    for (int b = 0; b < dsp::kBandCount; ++b) {
      double e = 0.0;
      for (double v : bands[b]) e += v * v;
      e /= std::max<size_t>(1, bands[b].size());
      out[c * dsp::kBandCount + b] = 10.0 * std::log10(e + 1e-12);
    }
  }
  return out;
}

std::array<double, kRawFeatureDims> RawFeatures(const foa::FoaClip& clip) {
  return RawFeatures(clip, BandLogEnergy(clip));
}

std::array<double, kRawFeatureDims> RawFeatures(const foa::FoaClip& clip,
                                                const std::array<double, kBandEnergyDims>& energy) {
  std::array<double, kRawFeatureDims> out{};
  for (int i = 0; i < kBandEnergyDims; ++i) out[i] = energy[i] / 10.0;
  const auto& ch = clip.channels();
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  double mean_norm = 0.0;
  for (size_t n = 0; n < clip.frames(); ++n) {
    const Eigen::Vector3d i(ch[0][n] * ch[1][n], ch[0][n] * ch[2][n], ch[0][n] * ch[3][n]);
    mean += i;
    mean_norm += i.norm();
  }
  const double norm = mean.norm();
  if (norm > 0.0) {
    for (int k = 0; k < 3; ++k) out[kBandEnergyDims + k] = mean[k] / norm;
  }
  out[kBandEnergyDims + 3] = mean_norm > 0.0 ? norm / mean_norm : 0.0;
  return out;
}

Eigen::VectorXd Embed(const std::array<double, kRawFeatureDims>& raw) {
  return Projection() * Eigen::Map<const Eigen::VectorXd>(raw.data(), kRawFeatureDims);
}

double KlDivergence(const std::vector<std::array<double, kBandEnergyDims>>& ref,
                    const std::vector<std::array<double, kBandEnergyDims>>& gen) {
  const double width = (kLogEnergyCeilDb - kLogEnergyFloorDb) / kHistogramBins;
  auto bin = [&](double v) {
    const int b = static_cast<int>(std::floor((v - kLogEnergyFloorDb) / width));
    return std::clamp(b, 0, kHistogramBins - 1);
  };
  double kl = 0.0;
  for (int d = 0; d < kBandEnergyDims; ++d) {
    std::array<double, kHistogramBins> p{}, q{};
    for (const auto& f : ref) p[bin(f[d])] += 1.0;
    for (const auto& f : gen) q[bin(f[d])] += 1.0;
    const double np = static_cast<double>(ref.size()) + kHistogramBins;
    const double nq = static_cast<double>(gen.size()) + kHistogramBins;
    for (int b = 0; b < kHistogramBins; ++b) {
      const double pb = (p[b] + 1.0) / np;
      const double qb = (q[b] + 1.0) / nq;
      kl += pb * std::log(pb / qb);
    }
  }
  return std::max(kl, 0.0);
}

double FrechetDistance(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& cov1,
                       const Eigen::VectorXd& mu2, const Eigen::MatrixXd& cov2) {
  const Eigen::MatrixXd s1 = SymmetricSqrt(cov1);
  Eigen::MatrixXd m = s1 * cov2 * s1;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double trace_sqrt = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double fd = (mu1 - mu2).squaredNorm() + cov1.trace() + cov2.trace() - 2.0 * trace_sqrt;
  return std::max(fd, 0.0);
}

void FitGaussian(const std::vector<Eigen::VectorXd>& rows, Eigen::VectorXd& mean,
                 Eigen::MatrixXd& cov) {
  if (rows.size() < 2) throw Error(ErrorCode::kUndefinedMetric, "FD needs at least 2 clips per corpus");
  const auto dims = rows[0].size();
  mean = Eigen::VectorXd::Zero(dims);
  for (const auto& r : rows) mean += r;
  mean /= static_cast<double>(rows.size());
  cov = Eigen::MatrixXd::Zero(dims, dims);
  for (const auto& r : rows) cov += (r - mean) * (r - mean).transpose();
  cov /= static_cast<double>(rows.size() - 1);
  const double scale = cov.trace() / dims;
  const auto eye = Eigen::MatrixXd::Identity(dims, dims);
  if (rows.size() < static_cast<size_t>(dims) + 1) cov = (1.0 - kShrinkage) * cov + kShrinkage * scale * eye;
  cov += kRidge * scale * eye;
}

double CorpusFrechetDistance(const std::vector<Eigen::VectorXd>& ref,
                             const std::vector<Eigen::VectorXd>& gen) {
  Eigen::VectorXd m1, m2;
  Eigen::MatrixXd c1, c2;
  FitGaussian(ref, m1, c1);
  FitGaussian(gen, m2, c2);
  return FrechetDistance(m1, c1, m2, c2);
}

}  // namespace scenefoa::metrics
