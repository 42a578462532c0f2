// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "unitone/errors.hpp"

namespace unitone {

namespace {
constexpr double kMinOverlapWeight = 1e-12;
}

Waveform::Waveform(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw InvalidArgument("waveform is empty");
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw InvalidArgument("sample rate must be positive");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidArgument("waveform sample " + std::to_string(i) +
                            " is not finite");
    }
  }
}

void FramingSpec::validate() const {
  if (hop < 1 || hop > frame_length) {
    throw InvalidArgument("hop must satisfy 1 <= hop <= frame length (hop=" +
                          std::to_string(hop) + ", frame length=" +
                          std::to_string(frame_length) + ")");
  }
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::hann:
      return "hann";
    case WindowKind::hamming:
      return "hamming";
    case WindowKind::rectangular:
      return "rectangular";
  }
  return "?";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hann") return WindowKind::hann;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "rectangular" || name == "rect") return WindowKind::rectangular;
  throw InvalidArgument("unknown window kind '" + std::string(name) + "'");
}

Window make_window(WindowKind kind, std::size_t length) {
  if (length < 2) throw InvalidArgument("window length must be at least 2");
  Window w{kind, std::vector<double>(length)};
  const double step = 2.0 * std::numbers::pi / static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(step * static_cast<double>(n));
    switch (kind) {
      case WindowKind::hann:
        w.coefficients[n] = 0.5 - 0.5 * c;
        break;
      case WindowKind::hamming:
        w.coefficients[n] = 0.54 - 0.46 * c;
        break;
      case WindowKind::rectangular:
        w.coefficients[n] = 1.0;
        break;
    }
  }
  // cos(0) is exact, but keep the hann endpoint pinned.
  if (kind == WindowKind::hann) w.coefficients[0] = 0.0;
  return w;
}

std::size_t frame_count(std::size_t signal_length, const FramingSpec& spec) {
  const std::size_t L = spec.frame_length;
  const std::size_t H = spec.hop;
  const std::size_t excess = signal_length > L ? signal_length - L : 0;
  return (excess + H - 1) / H + 1;
}

FrameMatrix::FrameMatrix(std::size_t frames, const FramingSpec& spec,
                         std::size_t original_length)
    : frames_(frames),
      spec_(spec),
      original_length_(original_length),
      data_(frames * spec.frame_length, 0.0) {}

FrameMatrix frame_signal(const Waveform& x, const FramingSpec& spec,
                         const Window& window) {
  spec.validate();
  if (window.size() != spec.frame_length) {
    throw InvalidArgument("window length does not match frame length");
  }
  const auto samples = x.samples();
  FrameMatrix out(frame_count(samples.size(), spec), spec, samples.size());
  for (std::size_t m = 0; m < out.frames(); ++m) {
    auto row = out.row(m);
    const std::size_t start = m * spec.hop;
    const std::size_t avail =
        std::min(spec.frame_length, samples.size() - start);
    for (std::size_t n = 0; n < avail; ++n) {
      row[n] = samples[start + n] * window.coefficients[n];
    }
  }
  return out;
}

ColaProfile cola_profile(const Window& window, std::size_t hop) {
  const std::size_t L = window.size();
  if (hop < 1 || hop > L) {
    throw InvalidArgument("hop must satisfy 1 <= hop <= window length");
  }
  ColaProfile p;
  p.sums.assign(hop, 0.0);
  for (std::size_t n = 0; n < hop; ++n) {
    for (std::size_t i = n; i < L; i += hop) p.sums[n] += window.coefficients[i];
  }
  double total = 0.0;
  for (double s : p.sums) total += s;
  p.mean = total / static_cast<double>(hop);
  for (double s : p.sums) p.deviation = std::max(p.deviation, std::abs(s - p.mean));
  return p;
}

std::vector<double> overlap_weights(std::size_t frames, const FramingSpec& spec,
                                    const Window& window,
                                    std::size_t target_length) {
  std::vector<double> weights(target_length, 0.0);
  for (std::size_t m = 0; m < frames; ++m) {
    const std::size_t start = m * spec.hop;
    for (std::size_t n = 0; n < spec.frame_length && start + n < target_length;
         ++n) {
      weights[start + n] += window.coefficients[n];
    }
  }
  return weights;
}

Waveform overlap_add(const FrameMatrix& frames, const Window& window,
                     std::size_t target_length, double sample_rate) {
  if (target_length == 0) throw InvalidArgument("target length must be positive");
  const FramingSpec& spec = frames.spec();
  if (window.size() != spec.frame_length) {
    throw InvalidArgument("window length does not match frame length");
  }
  std::vector<double> out(target_length, 0.0);
  for (std::size_t m = 0; m < frames.frames(); ++m) {
    const auto row = frames.row(m);
    const std::size_t start = m * spec.hop;
    for (std::size_t n = 0; n < spec.frame_length && start + n < target_length;
         ++n) {
      out[start + n] += row[n];
    }
  }
  const auto weights =
      overlap_weights(frames.frames(), spec, window, target_length);
  for (std::size_t i = 0; i < target_length; ++i) {
    out[i] = weights[i] > kMinOverlapWeight ? out[i] / weights[i] : 0.0;
  }
  return Waveform(std::move(out), sample_rate);
}

}  // namespace unitone
