// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitone/noise.hpp"
#include "unitone/signal.hpp"
#include "unitone/transform.hpp"

namespace unitone {

struct GainVector {
  std::vector<double> gains;

  std::size_t size() const { return gains.size(); }
};

enum class GainRule { wiener, spectral_subtraction };

std::string_view to_string(GainRule rule);
/// Accepts "wiener", "ss" and "spectral_subtraction".
GainRule parse_gain_rule(std::string_view name);

struct FilterConfig {
  GainRule rule = GainRule::wiener;
  double alpha = 1.5;  // over-subtraction, >= 1
  double beta = 0.02;  // gain floor, [0, 1)
  double epsilon = 1e-12;

  void validate() const;
};

struct NoiseMode {
  enum class Kind { oracle, leading_frames };
  Kind kind = Kind::oracle;
  std::size_t frames = 0;  // only for leading_frames

  static NoiseMode oracle() { return {}; }
  static NoiseMode leading(std::size_t k) { return {Kind::leading_frames, k}; }

  /// "oracle" or "leading:K"
  std::string to_string() const;
  static NoiseMode parse(std::string_view text);
};

struct PipelineConfig {
  FramingSpec framing;
  WindowKind window = WindowKind::hamming;
  Basis basis = Basis::dft;
  FilterConfig filter;
  NoiseMode noise_mode;
  // Diagnostic: skip the gain rule and pass every bin through unchanged.
  bool force_unity_gain = false;

  void validate() const;
};

/// Phi_S = max(|Y|^2 - Phi_N, 0); G = Phi_S / (Phi_S + Phi_N + eps).
GainVector wiener_gain(std::span<const double> noisy_power,
                       std::span<const double> noise_psd, double epsilon);

/// G = max(1 - alpha * N / (|Y| + eps), beta).
GainVector spectral_subtraction_gain(std::span<const double> noisy_magnitude,
                                     std::span<const double> noise_magnitude,
                                     double alpha, double beta, double epsilon);

/// Real per-bin scaling; bin phases are untouched.
Spectrum apply_gain(const Spectrum& spectrum, const GainVector& gains);

/// Gain for one frame under `cfg`, from its spectrum and a static profile.
GainVector compute_gain(const Spectrum& frame, const NoiseProfile& profile,
                        const FilterConfig& cfg);

/// Full pipeline: frame, window, transform, gain, inverse, overlap-add.
/// `noise_reference` is required for the oracle noise mode and ignored
/// otherwise.
Waveform denoise(const Waveform& noisy,
                 const std::optional<Waveform>& noise_reference,
                 const PipelineConfig& cfg);

/// Same pipeline with a caller-supplied operator and noise profile, so that
/// both can be reused across calls.
Waveform denoise(const Waveform& noisy, const NoiseProfile& profile,
                 const PipelineConfig& cfg, const TransformOperator& op);

/// Builds the operator for `cfg.basis` at the configured frame length.
TransformOperator make_operator(const PipelineConfig& cfg);

/// Noise profile as the pipeline would estimate it under `cfg.noise_mode`.
NoiseProfile pipeline_profile(const Waveform& noisy,
                              const std::optional<Waveform>& noise_reference,
                              const PipelineConfig& cfg,
                              const TransformOperator& op);

}  // namespace unitone
