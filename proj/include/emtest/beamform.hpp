// Copyright 2026 The emtest Authors
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

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "emtest/analytic.hpp"
#include "emtest/geometry.hpp"
#include "emtest/record.hpp"
#include "emtest/wavefield.hpp"

namespace emtest {

// Sum over active mics (ascending id) of
//   weight * sensitivity * phasor_at(s, pos, f) * exp(-i 2 pi f delay).
Complex steady_response(const ArrayGeometry& g, const WaveSource& s, double f, const Medium& m);

struct PlaneStimulus {
  Vec3 direction;  // unit propagation direction
};

struct PointStimulus {
  Vec3 position;
};

using Stimulus = std::variant<PlaneStimulus, PointStimulus>;

// DC-normalized signed transfer value at one frequency (f >= 0). The
// response phasor is referenced to the phase it has in the f -> 0 limit,
// i.e. exp(-i 2 pi f tbar) with tbar the DC-weighted mean arrival time
// (propagation plus channel delay) over active mics. For a full sphere this
// is the wave phase at the center; for a shaded sphere it is the phase at
// the aperture's acoustic centroid.
double numeric_transfer_at(const ArrayGeometry& g, const Stimulus& stim, double f, const Medium& m);

// f_grid must be nonempty (EmptyGrid) and ascending (BadArgument).
TransferCurve numeric_transfer(const ArrayGeometry& g, const Stimulus& stim, std::span<const double> f_grid,
                               const Medium& m);

// Windowed-sinc fractional delay.
inline constexpr int kDelayTaps = 16;

// y[n] = x(n - delay_samples) with a 16-tap Blackman-windowed sinc, taps
// normalized to unit DC gain. Samples outside x are zero. Integer delays
// are exact.
std::vector<double> delay_series(std::span<const double> x, double delay_samples);

// Accumulates gain * x(n - delay_samples) into out (same length as x).
void accumulate_delayed(std::span<const double> x, double delay_samples, double gain, std::span<double> out);

// Tester total: sum over active mics of weight_i * channel_i(t - delay_i).
std::vector<double> time_output(const ArrayGeometry& g, const AcousticRecord& rec);

}  // namespace emtest
