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

#ifndef SCENEFOA_ACOUSTICS_RENDER_H_
#define SCENEFOA_ACOUSTICS_RENDER_H_

#include "scenefoa/foa/types.h"
#include "scenefoa/scene/manifest.h"

namespace scenefoa::acoustics {

struct RenderOptions {
  double block_seconds = 0.010;  // cross-fade hop
  double reuse_distance = 0.01;  // metres; paths are kept below this motion
  int max_order = -1;            // -1 = DefaultOrder
  bool late_tail = true;
};

// Reference FOA rendering in the listener's head frame. Early paths are
// recomputed on a 10 ms grid and cross-faded with triangular windows; the
// late tail is applied once to the sum of the activity-gated dry signals.
// Sources render in parallel and are summed in fixed order.
foa::FoaClip RenderReference(const scene::SceneManifest& m, const RenderOptions& opts = {});
// Single-threaded reference of RenderReference.
foa::FoaClip RenderReferenceSerial(const scene::SceneManifest& m, const RenderOptions& opts = {});

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_RENDER_H_
