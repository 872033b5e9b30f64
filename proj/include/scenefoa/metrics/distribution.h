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

#ifndef SCENEFOA_METRICS_DISTRIBUTION_H_
#define SCENEFOA_METRICS_DISTRIBUTION_H_

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "scenefoa/foa/types.h"

namespace scenefoa::metrics {

inline constexpr int kBandEnergyDims = 28;  // 7 bands x 4 channels
inline constexpr int kRawFeatureDims = 32;
inline constexpr int kEmbeddingDims = 32;
inline constexpr int kHistogramBins = 64;
inline constexpr double kLogEnergyFloorDb = -120.0;
inline constexpr double kLogEnergyCeilDb = 20.0;

// Mean band energy per (channel, band) in dB, channel-major.
std::array<double, kBandEnergyDims> BandLogEnergy(const foa::FoaClip& clip);

// Band log-energies (in bels) plus pseudo-intensity statistics: mean unit
// intensity direction (3) and intensity coherence |mean I| / mean |I|.
std::array<double, kRawFeatureDims> RawFeatures(const foa::FoaClip& clip);
std::array<double, kRawFeatureDims> RawFeatures(const foa::FoaClip& clip,
                                                const std::array<double, kBandEnergyDims>& energy);

// Fixed seeded random projection of RawFeatures to kEmbeddingDims.
Eigen::VectorXd Embed(const std::array<double, kRawFeatureDims>& raw);

// Sum over dimensions of KL(ref || gen) between Laplace-smoothed 64-bin
// histograms on a fixed [-120, 20] dB grid.
double KlDivergence(const std::vector<std::array<double, kBandEnergyDims>>& ref,
                    const std::vector<std::array<double, kBandEnergyDims>>& gen);

// Frechet distance between Gaussians, trace term via the symmetric square
// root of S1^(1/2) S2 S1^(1/2).
double FrechetDistance(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& cov1,
                       const Eigen::VectorXd& mu2, const Eigen::MatrixXd& cov2);

// Gaussian fit of embedding rows: unbiased covariance plus a 1e-4 relative
// ridge; shrunk 10% towards a scaled identity when rows < dims + 1. Throws
// kUndefinedMetric for fewer than 2 rows.
void FitGaussian(const std::vector<Eigen::VectorXd>& rows, Eigen::VectorXd& mean,
                 Eigen::MatrixXd& cov);

double CorpusFrechetDistance(const std::vector<Eigen::VectorXd>& ref,
                             const std::vector<Eigen::VectorXd>& gen);

}  // namespace scenefoa::metrics

#endif  // SCENEFOA_METRICS_DISTRIBUTION_H_
