// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "unitone/errors.hpp"

namespace unitone {

NoiseProfile estimate_profile(std::span<const Spectrum> noise_spectra,
                              Basis basis) {
  if (noise_spectra.empty()) {
    throw InvalidArgument("noise profile needs at least one spectrum");
  }
  const std::size_t bins = noise_spectra.front().size();
  NoiseProfile p{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0),
                 basis, noise_spectra.size()};
  for (const Spectrum& s : noise_spectra) {
    if (s.basis != basis) {
      throw InvalidArgument("noise spectra basis does not match requested basis");
    }
    if (s.size() != bins) {
      throw InvalidArgument("noise spectra have unequal lengths");
    }
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = std::abs(s.bins[k]);
      p.magnitude[k] += mag;
      p.psd[k] += std::norm(s.bins[k]);
    }
  }
  const double inv = 1.0 / static_cast<double>(noise_spectra.size());
  for (std::size_t k = 0; k < bins; ++k) {
    p.magnitude[k] *= inv;
    p.psd[k] *= inv;
  }
  return p;
}

std::vector<Spectrum> analyze(const Waveform& x, const FramingSpec& framing,
                              const Window& window, const TransformOperator& op,
                              std::size_t max_frames) {
  if (op.size() != framing.frame_length) {
    throw InvalidArgument("transform size does not match frame length");
  }
  const FrameMatrix frames = frame_signal(x, framing, window);
  const std::size_t count = std::min(frames.frames(), max_frames);
  std::vector<Spectrum> spectra;
  spectra.reserve(count);
  for (std::size_t m = 0; m < count; ++m) spectra.push_back(op.forward(frames.row(m)));
  return spectra;
}

NoiseProfile oracle_profile(const Waveform& noise, const FramingSpec& framing,
                            const Window& window, const TransformOperator& op) {
  if (noise.size() < framing.frame_length) {
    throw InvalidArgument("noise reference is shorter than one frame");
  }
  const auto spectra = analyze(noise, framing, window, op);
  return estimate_profile(spectra, op.basis());
}

NoiseProfile leading_frames_profile(const Waveform& noisy,
                                    const FramingSpec& framing,
                                    const Window& window,
                                    const TransformOperator& op,
                                    std::size_t frames) {
  if (frames == 0) throw InvalidArgument("leading frame count must be positive");
  framing.validate();
  const std::size_t available = frame_count(noisy.size(), framing);
  if (available < frames) {
    throw InvalidArgument("signal has " + std::to_string(available) +
                          " frames, fewer than the requested " +
                          std::to_string(frames) + " leading frames");
  }
  const auto spectra = analyze(noisy, framing, window, op, frames);
  return estimate_profile(spectra, op.basis());
}

}  // namespace unitone
