// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/filters.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "unitone/errors.hpp"

namespace unitone {

namespace {

// Imaginary residue tolerated after the inverse transform, relative to the
// frame's peak input amplitude.
constexpr double kResidueTolerance = 1e-6;

void check_pair(std::span<const double> a, std::span<const double> b,
                const char* what) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(what) + ": input lengths differ");
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] >= 0.0) || !(b[k] >= 0.0)) {
      throw InvalidArgument(std::string(what) +
                            ": inputs must be nonnegative (bin " +
                            std::to_string(k) + ")");
    }
  }
}

}  // namespace

std::string_view to_string(GainRule rule) {
  return rule == GainRule::wiener ? "wiener" : "ss";
}

GainRule parse_gain_rule(std::string_view name) {
  if (name == "wiener") return GainRule::wiener;
  if (name == "ss" || name == "spectral_subtraction") {
    return GainRule::spectral_subtraction;
  }
  throw InvalidArgument("unknown gain rule '" + std::string(name) + "'");
}

void FilterConfig::validate() const {
  if (!(alpha >= 1.0)) throw InvalidArgument("alpha must be >= 1");
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("beta must be in [0, 1)");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
}

std::string NoiseMode::to_string() const {
  if (kind == Kind::oracle) return "oracle";
  return "leading:" + std::to_string(frames);
}

NoiseMode NoiseMode::parse(std::string_view text) {
  if (text == "oracle") return oracle();
  constexpr std::string_view prefix = "leading:";
  if (text.starts_with(prefix)) {
    const auto digits = text.substr(prefix.size());
    std::size_t k = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k > 0) {
      return leading(k);
    }
  }
  throw InvalidArgument("noise mode must be 'oracle' or 'leading:K' with K >= 1, got '" +
                        std::string(text) + "'");
}

void PipelineConfig::validate() const {
  framing.validate();
  if (framing.frame_length < 2) throw InvalidArgument("frame length must be >= 2");
  filter.validate();
  if (noise_mode.kind == NoiseMode::Kind::leading_frames && noise_mode.frames == 0) {
    throw InvalidArgument("leading noise mode needs K >= 1");
  }
}

GainVector wiener_gain(std::span<const double> noisy_power,
                       std::span<const double> noise_psd, double epsilon) {
  check_pair(noisy_power, noise_psd, "wiener_gain");
  GainVector g{std::vector<double>(noisy_power.size())};
  for (std::size_t k = 0; k < noisy_power.size(); ++k) {
    const double signal = std::max(noisy_power[k] - noise_psd[k], 0.0);
    g.gains[k] = signal / (signal + noise_psd[k] + epsilon);
  }
  return g;
}

GainVector spectral_subtraction_gain(std::span<const double> noisy_magnitude,
                                     std::span<const double> noise_magnitude,
                                     double alpha, double beta, double epsilon) {
  check_pair(noisy_magnitude, noise_magnitude, "spectral_subtraction_gain");
  if (!(alpha >= 1.0)) throw InvalidArgument("alpha must be >= 1");
  GainVector g{std::vector<double>(noisy_magnitude.size())};
  for (std::size_t k = 0; k < noisy_magnitude.size(); ++k) {
    const double raw =
        1.0 - alpha * noise_magnitude[k] / (noisy_magnitude[k] + epsilon);
    g.gains[k] = std::max(raw, beta);
  }
  return g;
}

Spectrum apply_gain(const Spectrum& spectrum, const GainVector& gains) {
  if (spectrum.size() != gains.size()) {
    throw InvalidArgument("gain vector length does not match spectrum");
  }
  Spectrum out = spectrum;
  for (std::size_t k = 0; k < out.size(); ++k) out.bins[k] *= gains.gains[k];
  return out;
}

GainVector compute_gain(const Spectrum& frame, const NoiseProfile& profile,
                        const FilterConfig& cfg) {
  if (frame.basis != profile.basis) {
    throw InvalidArgument("noise profile basis does not match spectrum basis");
  }
  if (frame.size() != profile.size()) {
    throw InvalidArgument("noise profile length does not match spectrum");
  }
  std::vector<double> level(frame.size());
  if (cfg.rule == GainRule::wiener) {
    for (std::size_t k = 0; k < level.size(); ++k) level[k] = std::norm(frame.bins[k]);
    return wiener_gain(level, profile.psd, cfg.epsilon);
  }
  for (std::size_t k = 0; k < level.size(); ++k) level[k] = std::abs(frame.bins[k]);
  return spectral_subtraction_gain(level, profile.magnitude, cfg.alpha, cfg.beta,
                                   cfg.epsilon);
}

TransformOperator make_operator(const PipelineConfig& cfg) {
  return cfg.basis == Basis::dft ? TransformOperator::dft(cfg.framing.frame_length)
                                 : TransformOperator::qft(cfg.framing.frame_length);
}

NoiseProfile pipeline_profile(const Waveform& noisy,
                              const std::optional<Waveform>& noise_reference,
                              const PipelineConfig& cfg,
                              const TransformOperator& op) {
  const Window window = make_window(cfg.window, cfg.framing.frame_length);
  if (cfg.noise_mode.kind == NoiseMode::Kind::oracle) {
    if (!noise_reference) {
      throw InvalidArgument("oracle noise mode requires a noise reference");
    }
    return oracle_profile(*noise_reference, cfg.framing, window, op);
  }
  return leading_frames_profile(noisy, cfg.framing, window, op,
                                cfg.noise_mode.frames);
}

Waveform denoise(const Waveform& noisy,
                 const std::optional<Waveform>& noise_reference,
                 const PipelineConfig& cfg) {
  cfg.validate();
  const TransformOperator op = make_operator(cfg);
  const NoiseProfile profile = pipeline_profile(noisy, noise_reference, cfg, op);
  return denoise(noisy, profile, cfg, op);
}

Waveform denoise(const Waveform& noisy, const NoiseProfile& profile,
                 const PipelineConfig& cfg, const TransformOperator& op) {
  cfg.validate();
  const std::size_t L = cfg.framing.frame_length;
  if (noisy.size() < L) {
    throw InvalidArgument("input has " + std::to_string(noisy.size()) +
                          " samples, fewer than one frame (" + std::to_string(L) +
                          ")");
  }
  if (op.size() != L || op.basis() != cfg.basis) {
    throw InvalidArgument("transform operator does not match pipeline config");
  }
  if (profile.basis != cfg.basis || profile.size() != L) {
    throw InvalidArgument("noise profile does not match pipeline config");
  }

  const Window window = make_window(cfg.window, L);
  FrameMatrix frames = frame_signal(noisy, cfg.framing, window);
  for (std::size_t m = 0; m < frames.frames(); ++m) {
    auto row = frames.row(m);
    Spectrum spectrum = op.forward(std::span<const double>(row));
    if (!cfg.force_unity_gain) {
      spectrum = apply_gain(spectrum, compute_gain(spectrum, profile, cfg.filter));
    }
    const std::vector<Complex> time = op.inverse(spectrum);

    double peak = 0.0, residue = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
      peak = std::max(peak, std::abs(row[n]));
      residue = std::max(residue, std::abs(time[n].imag()));
    }
    if (residue > kResidueTolerance * peak) {
      std::ostringstream msg;
      msg << "frame " << m << ": imaginary residue " << residue
          << " after inverse transform exceeds tolerance (frame peak " << peak
          << ")";
      throw NumericIntegrityError(msg.str());
    }
    for (std::size_t n = 0; n < L; ++n) row[n] = time[n].real();
  }
  return overlap_add(frames, window, noisy.size(), noisy.sample_rate());
}

}  // namespace unitone
