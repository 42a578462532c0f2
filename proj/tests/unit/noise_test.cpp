// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/noise.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "unitone/errors.hpp"
#include "unitone/mixture.hpp"

namespace unitone {
namespace {

TEST(EstimateProfile, SingleSpectrum) {
  const std::vector<Spectrum> s = {{{Complex(3, 4), 0.0}, Basis::dft}};
  const NoiseProfile p = estimate_profile(s, Basis::dft);
  EXPECT_DOUBLE_EQ(p.magnitude[0], 5.0);
  EXPECT_DOUBLE_EQ(p.magnitude[1], 0.0);
  EXPECT_DOUBLE_EQ(p.psd[0], 25.0);
  EXPECT_DOUBLE_EQ(p.psd[1], 0.0);
  EXPECT_EQ(p.frame_count, 1u);
}

TEST(EstimateProfile, TwoSpectraAreAveraged) {
  const std::vector<Spectrum> s = {{{1.0, 0.0}, Basis::qft}, {{3.0, 0.0}, Basis::qft}};
  const NoiseProfile p = estimate_profile(s, Basis::qft);
  EXPECT_DOUBLE_EQ(p.magnitude[0], 2.0);
  EXPECT_DOUBLE_EQ(p.psd[0], 5.0);
  EXPECT_DOUBLE_EQ(p.magnitude[1], 0.0);
  EXPECT_EQ(p.frame_count, 2u);
}

TEST(EstimateProfile, Errors) {
  EXPECT_THROW(estimate_profile({}, Basis::dft), InvalidArgument);
  const std::vector<Spectrum> mixed = {{{1.0}, Basis::dft}, {{1.0}, Basis::qft}};
  EXPECT_THROW(estimate_profile(mixed, Basis::dft), InvalidArgument);
  const std::vector<Spectrum> ragged = {{{1.0}, Basis::dft}, {{1.0, 2.0}, Basis::dft}};
  EXPECT_THROW(estimate_profile(ragged, Basis::dft), InvalidArgument);
}

TEST(EstimateProfile, PermutationAndScaling) {
  std::mt19937_64 rng(4);
  std::vector<Spectrum> s;
  for (int m = 0; m < 12; ++m) {
    const auto re = testing::random_vector(rng, 16);
    const auto im = testing::random_vector(rng, 16);
    Spectrum sp{std::vector<Complex>(16), Basis::dft};
    for (std::size_t k = 0; k < 16; ++k) sp.bins[k] = {re[k], im[k]};
    s.push_back(sp);
  }
  const NoiseProfile base = estimate_profile(s, Basis::dft);

  auto shuffled = s;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const NoiseProfile perm = estimate_profile(shuffled, Basis::dft);

  const Complex c(-1.5, 2.0);
  auto scaled = s;
  for (auto& sp : scaled) {
    for (auto& v : sp.bins) v *= c;
  }
  const NoiseProfile sc = estimate_profile(scaled, Basis::dft);

  for (std::size_t k = 0; k < 16; ++k) {
    EXPECT_NEAR(perm.magnitude[k], base.magnitude[k], 1e-14);
    EXPECT_NEAR(perm.psd[k], base.psd[k], 1e-14);
    EXPECT_NEAR(sc.magnitude[k], std::abs(c) * base.magnitude[k], 1e-12);
    EXPECT_NEAR(sc.psd[k], std::norm(c) * base.psd[k], 1e-12);
    // Jensen: mean of squares dominates square of means.
    EXPECT_GE(base.psd[k], base.magnitude[k] * base.magnitude[k] - 1e-15);
  }
}

TEST(EstimateProfile, WhiteNoiseIsFlat) {
  const Waveform noise = gen_white_noise(42, 500 * 128 / 16000.0, 16000);
  const auto op = TransformOperator::dft(128);
  const FramingSpec framing{128, 128};
  const auto spectra =
      analyze(noise, framing, make_window(WindowKind::rectangular, 128), op);
  ASSERT_EQ(spectra.size(), 500u);
  const NoiseProfile p = estimate_profile(spectra, Basis::dft);
  const auto [lo, hi] = std::minmax_element(p.psd.begin(), p.psd.end());
  EXPECT_LT(*hi / *lo, 2.0);
}

TEST(OracleProfile, ZeroNoiseGivesZeroProfile) {
  const Waveform zeros(std::vector<double>(1000, 0.0), 16000);
  const auto op = build_qft_operator(128);
  const NoiseProfile p =
      oracle_profile(zeros, {128, 64}, make_window(WindowKind::hamming, 128), op);
  EXPECT_EQ(p.frame_count, frame_count(1000, {128, 64}));
  for (std::size_t k = 0; k < 128; ++k) {
    EXPECT_EQ(p.magnitude[k], 0.0);
    EXPECT_EQ(p.psd[k], 0.0);
  }
}

TEST(OracleProfile, ToneConcentratesInMirroredBins) {
  const Waveform tone = gen_sinusoid(440, 0.25, 16000);
  const Window w = make_window(WindowKind::hamming, 128);
  const NoiseProfile p = oracle_profile(tone, {128, 64}, w, TransformOperator::dft(128));

  // Oracle: direct DFT of one interior windowed frame.
  std::vector<double> frame(128);
  for (std::size_t n = 0; n < 128; ++n) frame[n] = tone[640 + n] * w.coefficients[n];
  const auto ref = testing::naive_dft(frame);
  std::size_t ref_peak = 1;
  for (std::size_t k = 1; k < 64; ++k) {
    if (std::abs(ref[k]) > std::abs(ref[ref_peak])) ref_peak = k;
  }
  std::size_t peak = 1;
  for (std::size_t k = 1; k < 64; ++k) {
    if (p.psd[k] > p.psd[peak]) peak = k;
  }
  EXPECT_EQ(peak, ref_peak);
  EXPECT_TRUE(peak == 3 || peak == 4);  // 440 Hz / 125 Hz per bin = 3.52
  EXPECT_NEAR(p.psd[128 - peak], p.psd[peak], 1e-9 * p.psd[peak]);

  double near = 0.0, total = 0.0;
  for (std::size_t k = 0; k < 128; ++k) {
    total += p.psd[k];
    if (k >= 2 && k <= 5) near += p.psd[k];
    if (k >= 123 && k <= 126) near += p.psd[k];
  }
  EXPECT_GT(near / total, 0.99);
}

TEST(OracleProfile, QftIsMirroredAndRescaledDft) {
  const Waveform noise = gen_white_noise(5, 0.2, 16000);
  const FramingSpec framing{128, 64};
  const Window w = make_window(WindowKind::hamming, 128);
  const NoiseProfile d = oracle_profile(noise, framing, w, TransformOperator::dft(128));
  const NoiseProfile q = oracle_profile(noise, framing, w, build_qft_operator(128));
  EXPECT_EQ(q.basis, Basis::qft);
  for (std::size_t k = 0; k < 128; ++k) {
    const std::size_t mk = (128 - k) % 128;
    EXPECT_NEAR(q.psd[k], d.psd[mk] / 128.0, 1e-9 * (1.0 + d.psd[mk] / 128.0));
    EXPECT_NEAR(q.magnitude[k], d.magnitude[mk] / std::sqrt(128.0), 1e-9);
  }
}

TEST(OracleProfile, RejectsShortNoise) {
  const Waveform noise(std::vector<double>(100, 0.1), 16000);
  EXPECT_THROW(oracle_profile(noise, {128, 64}, make_window(WindowKind::hann, 128),
                              TransformOperator::dft(128)),
               InvalidArgument);
}

TEST(LeadingFramesProfile, AllFramesEqualsOracle) {
  const Waveform noise = gen_white_noise(8, 0.1, 16000);
  const FramingSpec framing{128, 64};
  const Window w = make_window(WindowKind::hamming, 128);
  const auto op = build_qft_operator(128);
  const NoiseProfile o = oracle_profile(noise, framing, w, op);
  const NoiseProfile l =
      leading_frames_profile(noise, framing, w, op, frame_count(noise.size(), framing));
  EXPECT_EQ(o.magnitude, l.magnitude);
  EXPECT_EQ(o.psd, l.psd);
}

TEST(LeadingFramesProfile, SingleFrame) {
  const Waveform noise = gen_white_noise(9, 0.1, 16000);
  const FramingSpec framing{128, 64};
  const Window w = make_window(WindowKind::hann, 128);
  const auto op = TransformOperator::dft(128);
  const NoiseProfile p = leading_frames_profile(noise, framing, w, op, 1);
  const auto first = op.forward(frame_signal(noise, framing, w).row(0));
  for (std::size_t k = 0; k < 128; ++k) {
    EXPECT_DOUBLE_EQ(p.magnitude[k], std::abs(first.bins[k]));
    EXPECT_DOUBLE_EQ(p.psd[k], std::norm(first.bins[k]));
  }
}

TEST(LeadingFramesProfile, TooFewFrames) {
  const Waveform noise = gen_white_noise(9, 0.02, 16000);  // 320 samples, 4 frames
  const FramingSpec framing{128, 64};
  const Window w = make_window(WindowKind::hann, 128);
  EXPECT_THROW(leading_frames_profile(noise, framing, w, TransformOperator::dft(128), 5),
               InvalidArgument);
  EXPECT_THROW(leading_frames_profile(noise, framing, w, TransformOperator::dft(128), 0),
               InvalidArgument);
}

}  // namespace
}  // namespace unitone
