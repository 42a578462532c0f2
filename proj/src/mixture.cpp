// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "unitone/audio_io.hpp"
#include "unitone/csv.hpp"
#include "unitone/errors.hpp"
#include "unitone/random.hpp"

namespace unitone {

namespace {

constexpr double kSnrTolerance = 0.01;

std::size_t sample_count(double duration_s, double sample_rate) {
  if (!(duration_s > 0.0)) throw InvalidArgument("duration must be positive");
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  if (n == 0) throw InvalidArgument("duration is shorter than one sample");
  return n;
}

void check_below_nyquist(double freq_hz, double sample_rate) {
  if (!(freq_hz > 0.0) || !(freq_hz < sample_rate / 2.0)) {
    std::ostringstream msg;
    msg << "frequency " << freq_hz << " Hz must lie in (0, " << sample_rate / 2.0
        << ") Hz";
    throw InvalidArgument(msg.str());
  }
}

double peak(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  return p;
}

void scale_to_unit_peak(std::vector<double>& x) {
  const double p = peak(x);
  if (p > 0.0) {
    for (double& v : x) v /= p;
  }
}

double energy(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

std::string padded(std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, value);
  return buf;
}

}  // namespace

Waveform gen_sinusoid(double freq_hz, double duration_s, double sample_rate,
                      double amplitude, double phase_rad) {
  check_below_nyquist(freq_hz, sample_rate);
  const std::size_t n = sample_count(duration_s, sample_rate);
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(w * static_cast<double>(i) + phase_rad);
  }
  return Waveform(std::move(x), sample_rate);
}

Waveform gen_sum_of_sinusoids(std::span<const double> freqs_hz,
                              std::uint64_t seed, double duration_s,
                              double sample_rate) {
  if (freqs_hz.empty()) throw InvalidArgument("frequency list is empty");
  for (double f : freqs_hz) check_below_nyquist(f, sample_rate);
  const std::size_t n = sample_count(duration_s, sample_rate);
  Rng rng(seed);
  std::vector<double> x(n, 0.0);
  for (double f : freqs_hz) {
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double w = 2.0 * std::numbers::pi * f / sample_rate;
    for (std::size_t i = 0; i < n; ++i) x[i] += std::sin(w * static_cast<double>(i) + phase);
  }
  if (peak(x) > 1.0) scale_to_unit_peak(x);
  return Waveform(std::move(x), sample_rate);
}

Waveform gen_white_noise(std::uint64_t seed, double duration_s,
                         double sample_rate) {
  const std::size_t n = sample_count(duration_s, sample_rate);
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  scale_to_unit_peak(x);
  return Waveform(std::move(x), sample_rate);
}

Waveform gen_speech_like(std::uint64_t seed, double duration_s,
                         double sample_rate) {
  const std::size_t n = sample_count(duration_s, sample_rate);
  Rng rng(seed);
  const double f0 = rng.uniform(100.0, 250.0);
  const double drift_rate = rng.uniform(0.3, 1.0);
  const double drift_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double syllable_rate = rng.uniform(3.0, 5.0);
  const double syllable_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double formants[3] = {rng.uniform(400.0, 800.0), rng.uniform(1000.0, 1800.0),
                              rng.uniform(2200.0, 3000.0)};
  const double nyquist_guard = std::min(4000.0, 0.45 * sample_rate);
  const auto harmonics =
      static_cast<std::size_t>(std::floor(nyquist_guard / (f0 * 1.1)));

  std::vector<double> amps(harmonics), phases(harmonics);
  for (std::size_t h = 0; h < harmonics; ++h) {
    const double fh = f0 * static_cast<double>(h + 1);
    double shape = 0.1;
    for (double fc : formants) {
      const double d = (fh - fc) / 200.0;
      shape += std::exp(-0.5 * d * d);
    }
    amps[h] = shape / static_cast<double>(h + 1);
    phases[h] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  std::vector<double> x(n, 0.0);
  double pitch_phase = 0.0;
  const double dt = 1.0 / sample_rate;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double f = f0 * (1.0 + 0.08 * std::sin(2.0 * std::numbers::pi * drift_rate * t + drift_phase));
    pitch_phase += 2.0 * std::numbers::pi * f * dt;
    double v = 0.0;
    for (std::size_t h = 0; h < harmonics; ++h) {
      v += amps[h] * std::sin(static_cast<double>(h + 1) * pitch_phase + phases[h]);
    }
    const double s =
        std::sin(2.0 * std::numbers::pi * syllable_rate * t + syllable_phase);
    const double envelope = s > 0.0 ? s * s : 0.0;
    x[i] = v * envelope;
  }
  scale_to_unit_peak(x);
  return Waveform(std::move(x), sample_rate);
}

double rms(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("rms of an empty signal");
  return std::sqrt(energy(x) / static_cast<double>(x.size()));
}

double power_ratio_db(std::span<const double> signal, std::span<const double> noise) {
  return 10.0 * std::log10(energy(signal) / energy(noise));
}

Mixture mix_at_snr(const Waveform& clean, const Waveform& noise,
                   double target_snr_db) {
  if (!std::isfinite(target_snr_db)) throw InvalidArgument("target SNR must be finite");
  if (noise.size() < clean.size()) {
    throw InvalidArgument("noise is shorter than the clean signal");
  }
  if (noise.sample_rate() != clean.sample_rate()) {
    throw InvalidArgument("clean and noise sample rates differ");
  }
  const auto c = clean.samples();
  const auto nz = noise.samples().first(c.size());
  const double clean_rms = rms(c);
  const double noise_rms = rms(nz);
  if (clean_rms == 0.0) throw InvalidArgument("clean signal is silent");
  if (noise_rms == 0.0) throw InvalidArgument("noise signal is silent");

  const double scale = (clean_rms / noise_rms) * std::pow(10.0, -target_snr_db / 20.0);
  std::vector<double> scaled(c.size()), noisy(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    scaled[i] = scale * nz[i];
    noisy[i] = c[i] + scaled[i];
  }
  const double achieved = power_ratio_db(c, scaled);
  if (!(std::abs(achieved - target_snr_db) < kSnrTolerance)) {
    std::ostringstream msg;
    msg << "achieved SNR " << achieved << " dB misses target " << target_snr_db
        << " dB";
    throw NumericIntegrityError(msg.str());
  }
  const double rate = clean.sample_rate();
  return Mixture{Waveform(std::move(noisy), rate), clean,
                 Waveform(std::move(scaled), rate), scale, achieved};
}

std::vector<SignalSource> clean_sources(const CorpusConfig& cfg) {
  std::vector<SignalSource> out;
  if (!cfg.clean_wavs.empty()) {
    std::vector<std::string> missing;
    for (const auto& p : cfg.clean_wavs) {
      if (!std::filesystem::exists(p)) missing.push_back(p.string());
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw IoError("missing clean audio files: " + list);
    }
    for (const auto& p : cfg.clean_wavs) {
      out.push_back({p.stem().string(), read_wav(p, cfg.sample_rate), 0});
    }
  } else {
    for (std::size_t i = 0; i < cfg.speech_standins; ++i) {
      const std::uint64_t seed = derive_seed(cfg.master_seed, 3000 + i);
      out.push_back({"speech_" + std::to_string(i + 1),
                     gen_speech_like(seed, cfg.duration_s, cfg.sample_rate), seed});
    }
  }
  for (double f : kToneFrequencies) {
    out.push_back({"tone_" + std::to_string(static_cast<int>(f)),
                   gen_sinusoid(f, cfg.duration_s, cfg.sample_rate), 0});
  }
  for (std::size_t i = 0; i < cfg.multitone_variants; ++i) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, 2000 + i);
    out.push_back({"multitone_" + std::to_string(i + 1),
                   gen_sum_of_sinusoids(kToneFrequencies, seed, cfg.duration_s,
                                        cfg.sample_rate),
                   seed});
  }
  return out;
}

std::vector<SignalSource> noise_sources(const CorpusConfig& cfg,
                                        std::size_t min_length) {
  std::vector<SignalSource> out;
  if (!cfg.noise_wavs.empty()) {
    std::vector<std::string> missing;
    for (const auto& p : cfg.noise_wavs) {
      if (!std::filesystem::exists(p)) missing.push_back(p.string());
    }
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw IoError("missing noise audio files: " + list);
    }
    for (const auto& p : cfg.noise_wavs) {
      out.push_back({p.stem().string(), read_wav(p, cfg.sample_rate), 0});
    }
    return out;
  }
  const double duration = std::max(
      cfg.duration_s, static_cast<double>(min_length) / cfg.sample_rate);
  for (std::size_t j = 0; j < cfg.noise_seeds; ++j) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, 1000 + j);
    out.push_back({"noise_" + std::to_string(j + 1),
                   gen_white_noise(seed, duration, cfg.sample_rate), seed});
  }
  return out;
}

std::vector<CorpusEntry> build_corpus(std::span<const SignalSource> cleans,
                                      std::span<const SignalSource> noises,
                                      std::span<const double> snr_grid) {
  if (cleans.empty()) throw InvalidArgument("corpus has no clean sources");
  if (noises.empty()) throw InvalidArgument("corpus has no noise sources");
  if (snr_grid.empty()) throw InvalidArgument("SNR grid is empty");
  const std::size_t total = cleans.size() * snr_grid.size();
  const int width = total >= 1000 ? 4 : 3;
  std::vector<CorpusEntry> corpus;
  corpus.reserve(total);
  for (std::size_t i = 0; i < cleans.size(); ++i) {
    const SignalSource& noise = noises[i % noises.size()];
    for (double snr : snr_grid) {
      Mixture mix = mix_at_snr(cleans[i].signal, noise.signal, snr);
      double scale = mix.noise_scale;
      const double p = peak(mix.noisy.samples());
      if (p > 1.0) {
        const double k = 1.0 / p;
        const auto c = mix.clean.samples();
        const auto s = mix.scaled_noise.samples();
        std::vector<double> clean(c.size()), scaled(c.size()), noisy(c.size());
        for (std::size_t t = 0; t < c.size(); ++t) {
          clean[t] = k * c[t];
          scaled[t] = k * s[t];
          noisy[t] = clean[t] + scaled[t];
        }
        scale *= k;
        const double rate = mix.clean.sample_rate();
        const double achieved = power_ratio_db(clean, scaled);
        mix = Mixture{Waveform(std::move(noisy), rate), Waveform(std::move(clean), rate),
                      Waveform(std::move(scaled), rate), scale, achieved};
      }
      MixtureSpec spec{"m" + padded(corpus.size() + 1, width),
                       cleans[i].id,
                       noise.id,
                       snr,
                       noise.seed,
                       mix.noise_scale,
                       mix.achieved_snr_db};
      corpus.push_back({std::move(spec), std::move(mix)});
    }
  }
  return corpus;
}

std::vector<CorpusEntry> build_corpus(const CorpusConfig& cfg) {
  const auto cleans = clean_sources(cfg);
  std::size_t longest = 0;
  for (const auto& c : cleans) longest = std::max(longest, c.signal.size());
  const auto noises = noise_sources(cfg, longest);
  return build_corpus(cleans, noises, cfg.snr_grid);
}

std::string manifest_csv(std::span<const CorpusEntry> corpus) {
  std::string out;
  csv::append_row(out, {"mixture_id", "clean_id", "noise_id", "target_snr_db", "seed",
                        "noise_scale", "achieved_snr_db"});
  for (const auto& e : corpus) {
    const MixtureSpec& s = e.spec;
    csv::append_row(out, {s.mixture_id, s.clean_id, s.noise_id,
                          csv::fixed(s.target_snr_db, 2), std::to_string(s.seed),
                          csv::exact(s.noise_scale), csv::fixed(s.achieved_snr_db, 6)});
  }
  return out;
}

}  // namespace unitone
