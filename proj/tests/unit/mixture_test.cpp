// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/mixture.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "test_util.hpp"
#include "unitone/errors.hpp"
#include "unitone/random.hpp"

namespace unitone {
namespace {

TEST(GenSinusoid, Basics) {
  const Waveform x = gen_sinusoid(440, 1.0, 16000);
  EXPECT_EQ(x.size(), 16000u);
  EXPECT_EQ(x[0], 0.0);
  // Period of 16000 / 440 = 36.36 samples: the signal repeats after 400
  // samples (11 periods) and is near a zero crossing every half period.
  EXPECT_NEAR(x[400], x[0], 1e-12);
  EXPECT_NEAR(std::sin(2 * std::numbers::pi * 440 * 10 / 16000.0), x[10], 1e-15);
  for (double v : gen_sinusoid(440, 0.1, 16000, 0.0).samples()) EXPECT_EQ(v, 0.0);
}

TEST(GenSinusoid, RmsOverWholePeriods) {
  // 500 Hz at 16 kHz: 32 samples per period, 1 s holds 500 of them.
  EXPECT_NEAR(rms(gen_sinusoid(500, 1.0, 16000)), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(rms(gen_sinusoid(440, 3.0, 16000)), 0.70711, 1e-4);
}

TEST(GenSinusoid, RejectsNyquistAndAbove) {
  EXPECT_THROW(gen_sinusoid(8000, 1.0, 16000), InvalidArgument);
  EXPECT_THROW(gen_sinusoid(9000, 1.0, 16000), InvalidArgument);
  EXPECT_THROW(gen_sinusoid(0, 1.0, 16000), InvalidArgument);
  EXPECT_THROW(gen_sinusoid(440, 0.0, 16000), InvalidArgument);
}

TEST(GenSumOfSinusoids, SingleToneEqualsSinusoidWithDrawnPhase) {
  const std::vector<double> f = {440};
  const Waveform s = gen_sum_of_sinusoids(f, 99, 0.5, 16000);
  Rng rng(99);
  const double phase = rng.uniform(0.0, 2 * std::numbers::pi);
  const Waveform ref = gen_sinusoid(440, 0.5, 16000, 1.0, phase);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], ref[i], 1e-12);
}

TEST(GenSumOfSinusoids, DeterministicAndSeedSensitive) {
  const Waveform a = gen_sum_of_sinusoids(kToneFrequencies, 7, 1.0, 16000);
  const Waveform b = gen_sum_of_sinusoids(kToneFrequencies, 7, 1.0, 16000);
  const Waveform c = gen_sum_of_sinusoids(kToneFrequencies, 8, 1.0, 16000);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  double peak = 0.0;
  for (double v : a.samples()) peak = std::max(peak, std::abs(v));
  EXPECT_LE(peak, 1.0);
  EXPECT_THROW(gen_sum_of_sinusoids(std::vector<double>{}, 1, 1.0, 16000), InvalidArgument);
}

TEST(GenSumOfSinusoids, EnergyInSixMirroredBins) {
  // 3 s at 16 kHz: bin spacing 1/3 Hz, so every tone sits on an exact bin.
  const Waveform x = gen_sum_of_sinusoids(kToneFrequencies, 11, 3.0, 16000);
  const std::vector<double> samples(x.samples().begin(), x.samples().end());
  const std::size_t n = samples.size();
  double total = 0.0;
  for (double v : samples) total += v * v;
  total *= static_cast<double>(n);  // Parseval: sum |X|^2 = N sum x^2
  double captured = 0.0;
  for (double f : kToneFrequencies) {
    const auto k = static_cast<std::size_t>(std::lround(f * 3.0));
    captured += std::norm(testing::dft_bin(samples, k));
    captured += std::norm(testing::dft_bin(samples, n - k));
  }
  EXPECT_NEAR(captured / total, 1.0, 1e-9);
}

TEST(GenWhiteNoise, ReproducibleZeroMeanFlat) {
  const Waveform a = gen_white_noise(123, 100000 / 16000.0, 16000);
  EXPECT_EQ(a, gen_white_noise(123, 100000 / 16000.0, 16000));
  EXPECT_NE(a, gen_white_noise(124, 100000 / 16000.0, 16000));
  ASSERT_EQ(a.size(), 100000u);

  double mean = 0.0;
  for (double v : a.samples()) mean += v;
  mean /= static_cast<double>(a.size());
  double var = 0.0, peak = 0.0;
  for (double v : a.samples()) {
    var += (v - mean) * (v - mean);
    peak = std::max(peak, std::abs(v));
  }
  const double sigma = std::sqrt(var / static_cast<double>(a.size()));
  EXPECT_LT(std::abs(mean), 0.02 * sigma);
  EXPECT_NEAR(peak, 1.0, 1e-15);

  // Averaged periodogram over 256-sample segments, 10 bands of positive bins.
  const std::size_t seg = 256;
  std::vector<double> psd(seg / 2, 0.0);
  std::size_t segments = 0;
  for (std::size_t start = 0; start + seg <= a.size(); start += seg, ++segments) {
    std::vector<double> frame(a.samples().begin() + static_cast<std::ptrdiff_t>(start),
                              a.samples().begin() + static_cast<std::ptrdiff_t>(start + seg));
    const auto spectrum = testing::naive_dft(frame);
    for (std::size_t k = 0; k < seg / 2; ++k) psd[k] += std::norm(spectrum[k]);
  }
  std::vector<double> bands(10, 0.0);
  const std::size_t per_band = (seg / 2 - 1) / 10;
  for (std::size_t b = 0; b < 10; ++b) {
    for (std::size_t k = 1 + b * per_band; k < 1 + (b + 1) * per_band; ++k) bands[b] += psd[k];
  }
  const auto [lo, hi] = std::minmax_element(bands.begin(), bands.end());
  EXPECT_LT(*hi / *lo, 2.0);
}

TEST(Rms, Examples) {
  EXPECT_DOUBLE_EQ(rms(std::vector<double>{1, -1, 1, -1}), 1.0);
  EXPECT_EQ(rms(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_THROW(rms(std::vector<double>{}), InvalidArgument);
}

TEST(MixAtSnr, TargetsAndExactAddition) {
  const Waveform clean = gen_sinusoid(440, 1.0, 16000);
  const Waveform noise = gen_white_noise(5, 1.5, 16000);
  for (double target : kDefaultSnrGrid) {
    const Mixture m = mix_at_snr(clean, noise, target);
    EXPECT_NEAR(m.achieved_snr_db, target, 0.01);
    const double measured = power_ratio_db(m.clean.samples(), m.scaled_noise.samples());
    EXPECT_NEAR(measured, target, 0.01);
    ASSERT_EQ(m.noisy.size(), clean.size());
    for (std::size_t i = 0; i < clean.size(); ++i) {
      EXPECT_EQ(m.noisy[i], m.clean[i] + m.scaled_noise[i]);
    }
  }
  const Mixture zero = mix_at_snr(clean, noise, 0.0);
  EXPECT_NEAR(rms(zero.scaled_noise), rms(clean), 1e-12);
  const Mixture ten = mix_at_snr(clean, noise, 10.0);
  EXPECT_NEAR(std::pow(rms(ten.scaled_noise), 2), std::pow(rms(clean), 2) / 10.0, 1e-12);
}

TEST(MixAtSnr, Errors) {
  const Waveform clean = gen_sinusoid(440, 1.0, 16000);
  const Waveform silent(std::vector<double>(16000, 0.0), 16000);
  const Waveform shortn = gen_white_noise(1, 0.5, 16000);
  EXPECT_THROW(mix_at_snr(silent, gen_white_noise(1, 1.0, 16000), 0.0), InvalidArgument);
  EXPECT_THROW(mix_at_snr(clean, silent, 0.0), InvalidArgument);
  EXPECT_THROW(mix_at_snr(clean, shortn, 0.0), InvalidArgument);
}

TEST(BuildCorpus, DefaultIsNinetyMixtures) {
  const auto corpus = build_corpus(CorpusConfig{});
  ASSERT_EQ(corpus.size(), 90u);
  std::vector<std::string> cleans;
  for (const auto& e : corpus) {
    EXPECT_NEAR(e.spec.achieved_snr_db, e.spec.target_snr_db, 0.01);
    EXPECT_NEAR(power_ratio_db(e.mixture.clean.samples(), e.mixture.scaled_noise.samples()),
                e.spec.target_snr_db, 0.01);
    double peak = 0.0;
    for (double v : e.mixture.noisy.samples()) peak = std::max(peak, std::abs(v));
    EXPECT_LE(peak, 1.0 + 1e-12);
    for (std::size_t i = 0; i < e.mixture.noisy.size(); i += 97) {
      EXPECT_EQ(e.mixture.noisy[i], e.mixture.clean[i] + e.mixture.scaled_noise[i]);
    }
    if (std::find(cleans.begin(), cleans.end(), e.spec.clean_id) == cleans.end()) {
      cleans.push_back(e.spec.clean_id);
    }
  }
  EXPECT_EQ(cleans.size(), 18u);
  EXPECT_EQ(corpus.front().spec.mixture_id, "m001");
  EXPECT_EQ(corpus.back().spec.mixture_id, "m090");
}

TEST(BuildCorpus, ProductCount) {
  const std::vector<SignalSource> cleans = {{"c", gen_sinusoid(200, 0.5, 16000), 0}};
  const std::vector<SignalSource> noises = {{"n", gen_white_noise(3, 0.5, 16000), 3}};
  const auto corpus = build_corpus(cleans, noises, kDefaultSnrGrid);
  ASSERT_EQ(corpus.size(), 5u);
  for (const auto& e : corpus) {
    EXPECT_EQ(e.spec.clean_id, "c");
    EXPECT_EQ(e.spec.noise_id, "n");
    EXPECT_EQ(e.spec.seed, 3u);
  }
}

TEST(BuildCorpus, ManifestIsDeterministic) {
  CorpusConfig cfg;
  cfg.duration_s = 0.5;
  const std::string a = manifest_csv(build_corpus(cfg));
  const std::string b = manifest_csv(build_corpus(cfg));
  EXPECT_EQ(std::hash<std::string>{}(a), std::hash<std::string>{}(b));
  cfg.master_seed = 99;
  EXPECT_NE(a, manifest_csv(build_corpus(cfg)));
  EXPECT_EQ(a.substr(0, a.find("\r\n")),
            "mixture_id,clean_id,noise_id,target_snr_db,seed,noise_scale,achieved_snr_db");
}

TEST(BuildCorpus, MissingFilesAreListed) {
  CorpusConfig cfg;
  cfg.clean_wavs = {"/nonexistent/a.wav", "/nonexistent/b.wav"};
  try {
    build_corpus(cfg);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("/nonexistent/a.wav"), std::string::npos);
    EXPECT_NE(what.find("/nonexistent/b.wav"), std::string::npos);
  }
}

TEST(SpeechLike, DeterministicUnitPeakWithPauses) {
  const Waveform a = gen_speech_like(17, 1.0, 16000);
  EXPECT_EQ(a, gen_speech_like(17, 1.0, 16000));
  double peak = 0.0;
  std::size_t quiet = 0;
  for (double v : a.samples()) {
    peak = std::max(peak, std::abs(v));
    if (std::abs(v) < 1e-3) ++quiet;
  }
  EXPECT_NEAR(peak, 1.0, 1e-15);
  EXPECT_GT(quiet, a.size() / 10);
}

}  // namespace
}  // namespace unitone
