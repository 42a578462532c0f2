// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Independent reference implementations used as test oracles. These follow
// the textbook definitions directly and share no code with the library.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace unitone::testing {

using cplx = std::complex<double>;

// X[k] = sum_n x[n] exp(sign * j 2 pi k n / N) * scale
inline std::vector<cplx> direct_transform(const std::vector<cplx>& x, double sign,
                                          double scale) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double phase =
          sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
          static_cast<double>(n);
      acc += x[t] * std::polar(1.0, phase);
    }
    out[k] = acc * scale;
  }
  return out;
}

inline std::vector<cplx> naive_dft(const std::vector<double>& x) {
  return direct_transform(std::vector<cplx>(x.begin(), x.end()), -1.0, 1.0);
}

inline std::vector<cplx> naive_qft(const std::vector<double>& x) {
  return direct_transform(std::vector<cplx>(x.begin(), x.end()), +1.0,
                          1.0 / std::sqrt(static_cast<double>(x.size())));
}

// Single DFT bin of a long signal.
inline cplx dft_bin(const std::vector<double>& x, std::size_t k) {
  cplx acc = 0.0;
  const std::size_t n = x.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double phase = -2.0 * std::numbers::pi *
                         static_cast<double>((static_cast<std::uint64_t>(k) * t) % n) /
                         static_cast<double>(n);
    acc += x[t] * std::polar(1.0, phase);
  }
  return acc;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace unitone::testing
