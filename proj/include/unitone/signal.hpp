// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unitone {

/// A mono real signal. Construction validates that the signal is nonempty,
/// every sample is finite and the sample rate is positive.
class Waveform {
 public:
  Waveform(std::vector<double> samples, double sample_rate);

  std::span<const double> samples() const { return samples_; }
  double sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  double sample_rate_;
};

struct FramingSpec {
  std::size_t frame_length = 128;
  std::size_t hop = 64;

  void validate() const;
};

enum class WindowKind { hann, hamming, rectangular };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

struct Window {
  WindowKind kind;
  std::vector<double> coefficients;

  std::size_t size() const { return coefficients.size(); }
};

/// Periodic windows: hann is 0.5 - 0.5 cos(2 pi n / L), hamming is
/// 0.54 - 0.46 cos(2 pi n / L). Throws InvalidArgument for L < 2.
Window make_window(WindowKind kind, std::size_t length);

/// Number of frames covering `signal_length` samples; the last frame may run
/// past the end and is zero-padded.
std::size_t frame_count(std::size_t signal_length, const FramingSpec& spec);

class FrameMatrix {
 public:
  FrameMatrix(std::size_t frames, const FramingSpec& spec,
              std::size_t original_length);

  std::size_t frames() const { return frames_; }
  std::size_t frame_length() const { return spec_.frame_length; }
  const FramingSpec& spec() const { return spec_; }
  std::size_t original_length() const { return original_length_; }

  std::span<double> row(std::size_t m) {
    return {data_.data() + m * spec_.frame_length, spec_.frame_length};
  }
  std::span<const double> row(std::size_t m) const {
    return {data_.data() + m * spec_.frame_length, spec_.frame_length};
  }

 private:
  std::size_t frames_;
  FramingSpec spec_;
  std::size_t original_length_;
  std::vector<double> data_;
};

/// Splits `x` into overlapping frames x[mH + n] and multiplies each by the
/// analysis window.
FrameMatrix frame_signal(const Waveform& x, const FramingSpec& spec,
                         const Window& window);

struct ColaProfile {
  /// sums[n] = sum_m w[n - mH] for n in one steady-state period [0, H).
  std::vector<double> sums;
  double mean = 0.0;
  /// max |sums[n] - mean|
  double deviation = 0.0;
};

ColaProfile cola_profile(const Window& window, std::size_t hop);

/// Per-sample window-overlap sum for a particular frame layout, including
/// the ramps at either end.
std::vector<double> overlap_weights(std::size_t frames, const FramingSpec& spec,
                                    const Window& window,
                                    std::size_t target_length);

/// Sums time-domain frames at their hop offsets and divides each sample by
/// its window-overlap sum, so unit gains reproduce the input. The result is
/// truncated (or zero-extended) to `target_length`.
Waveform overlap_add(const FrameMatrix& frames, const Window& window,
                     std::size_t target_length, double sample_rate);

}  // namespace unitone
