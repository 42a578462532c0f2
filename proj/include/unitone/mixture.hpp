// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "unitone/signal.hpp"

namespace unitone {

inline constexpr double kDefaultSampleRate = 16000.0;
inline constexpr double kDefaultDurationSeconds = 3.0;
inline const std::vector<double> kDefaultSnrGrid = {-10.0, -5.0, 0.0, 5.0, 10.0};
inline const std::vector<double> kToneFrequencies = {200.0, 440.0, 880.0};

/// a * sin(2 pi f t + phase), sampled at `sample_rate` for round(duration *
/// sample_rate) samples.
Waveform gen_sinusoid(double freq_hz, double duration_s, double sample_rate,
                      double amplitude = 1.0, double phase_rad = 0.0);

/// Unit-amplitude tones with phases uniform on [0, 2 pi) drawn from `seed`,
/// divided by the peak if it exceeds 1.
Waveform gen_sum_of_sinusoids(std::span<const double> freqs_hz,
                              std::uint64_t seed, double duration_s,
                              double sample_rate);

/// iid Gaussian samples scaled to unit peak.
Waveform gen_white_noise(std::uint64_t seed, double duration_s,
                         double sample_rate);

/// Voiced-speech stand-in: a harmonic series on a slowly drifting pitch with
/// formant-shaped amplitudes and a syllable-rate envelope that leaves short
/// pauses. Unit peak.
Waveform gen_speech_like(std::uint64_t seed, double duration_s,
                         double sample_rate);

double rms(std::span<const double> x);
inline double rms(const Waveform& x) { return rms(x.samples()); }

/// 10 log10(sum a^2 / sum b^2).
double power_ratio_db(std::span<const double> signal, std::span<const double> noise);

struct Mixture {
  Waveform noisy;
  Waveform clean;
  Waveform scaled_noise;
  double noise_scale;
  double achieved_snr_db;
};

/// Scales `noise` (truncated to the clean length) so the full-clip power
/// ratio hits `target_snr_db`, then adds it to `clean`.
Mixture mix_at_snr(const Waveform& clean, const Waveform& noise,
                   double target_snr_db);

struct SignalSource {
  std::string id;
  Waveform signal;
  std::uint64_t seed = 0;  // 0 for file-backed sources
};

struct MixtureSpec {
  std::string mixture_id;
  std::string clean_id;
  std::string noise_id;
  double target_snr_db;
  std::uint64_t seed;  // seed of the noise realization
  double noise_scale;
  double achieved_snr_db;
};

struct CorpusEntry {
  MixtureSpec spec;
  Mixture mixture;
};

struct CorpusConfig {
  std::uint64_t master_seed = 1234;
  double sample_rate = kDefaultSampleRate;
  double duration_s = kDefaultDurationSeconds;
  std::vector<double> snr_grid = kDefaultSnrGrid;
  /// When nonempty, these WAVs replace the synthetic speech stand-ins.
  std::vector<std::filesystem::path> clean_wavs;
  /// When nonempty, these WAVs replace the seeded white-noise sources.
  std::vector<std::filesystem::path> noise_wavs;
  std::size_t speech_standins = 6;
  std::size_t multitone_variants = 9;
  std::size_t noise_seeds = 3;
};

/// Deterministic clean inventory: speech (WAV or stand-ins), the three pure
/// tones, then the multitone variants.
std::vector<SignalSource> clean_sources(const CorpusConfig& cfg);
std::vector<SignalSource> noise_sources(const CorpusConfig& cfg,
                                        std::size_t min_length);

/// Clean source i is paired with noise source i mod |noises| and mixed at
/// every grid SNR. Mixtures that would exceed unit peak are rescaled (clean
/// and noise together) to unit peak.
std::vector<CorpusEntry> build_corpus(std::span<const SignalSource> cleans,
                                      std::span<const SignalSource> noises,
                                      std::span<const double> snr_grid);
std::vector<CorpusEntry> build_corpus(const CorpusConfig& cfg);

/// One CSV record per mixture: clean_id, noise_id, target_snr_db, seed,
/// noise_scale, achieved_snr_db (prefixed by mixture_id).
std::string manifest_csv(std::span<const CorpusEntry> corpus);

}  // namespace unitone
