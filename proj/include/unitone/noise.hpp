// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unitone/signal.hpp"
#include "unitone/transform.hpp"

namespace unitone {

/// Per-bin noise statistics averaged over `frame_count` spectra:
/// magnitude(k) = mean |Y_m(k)| and psd(k) = mean |Y_m(k)|^2.
struct NoiseProfile {
  std::vector<double> magnitude;
  std::vector<double> psd;
  Basis basis;
  std::size_t frame_count;

  std::size_t size() const { return magnitude.size(); }
};

NoiseProfile estimate_profile(std::span<const Spectrum> noise_spectra,
                              Basis basis);

/// Profile from every frame of a known noise signal.
NoiseProfile oracle_profile(const Waveform& noise, const FramingSpec& framing,
                            const Window& window, const TransformOperator& op);

/// Profile from the first `frames` frames of a noisy signal, assumed
/// noise-only.
NoiseProfile leading_frames_profile(const Waveform& noisy,
                                    const FramingSpec& framing,
                                    const Window& window,
                                    const TransformOperator& op,
                                    std::size_t frames);

/// Frames, windows and transforms a signal; the shared front end of the
/// noise estimators and the denoiser.
std::vector<Spectrum> analyze(const Waveform& x, const FramingSpec& framing,
                              const Window& window, const TransformOperator& op,
                              std::size_t max_frames = static_cast<std::size_t>(-1));

}  // namespace unitone
