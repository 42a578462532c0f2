// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "unitone/errors.hpp"

namespace unitone {

namespace detail {

// FFTW's planner is not thread-safe; execution with the new-array interface
// is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftPlans {
  explicit FftPlans(std::size_t n) : n(n) {
    std::vector<Complex> in(n), out(n);
    auto* pi = reinterpret_cast<fftw_complex*>(in.data());
    auto* po = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_1d(static_cast<int>(n), pi, po, FFTW_FORWARD, flags);
    backward =
        fftw_plan_dft_1d(static_cast<int>(n), pi, po, FFTW_BACKWARD, flags);
  }
  ~FftPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void run(fftw_plan plan, std::vector<Complex>& in,
           std::vector<Complex>& out) const {
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }

  std::size_t n;
  fftw_plan forward;
  fftw_plan backward;
};

}  // namespace detail

std::string_view to_string(Basis basis) {
  return basis == Basis::dft ? "dft" : "qft";
}

Basis parse_basis(std::string_view name) {
  if (name == "dft") return Basis::dft;
  if (name == "qft") return Basis::qft;
  throw InvalidArgument("unknown transform basis '" + std::string(name) + "'");
}

TransformOperator TransformOperator::dft(std::size_t n) {
  if (n == 0) throw InvalidArgument("transform size must be positive");
  TransformOperator op(Basis::dft, n);
  op.plans_ = std::make_shared<const detail::FftPlans>(n);
  return op;
}

TransformOperator TransformOperator::qft(std::size_t n) {
  if (n == 0) throw InvalidArgument("transform size must be positive");
  TransformOperator op(Basis::qft, n);
  op.matrix_.resize(n * n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      // Reduce the phase index first so large products keep full precision.
      const double phase = step * static_cast<double>((x * k) % n);
      op.matrix_[k * n + x] = scale * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return op;
}

TransformOperator TransformOperator::from_matrix(std::size_t n,
                                                 std::vector<Complex> matrix) {
  if (n == 0) throw InvalidArgument("transform size must be positive");
  if (matrix.size() != n * n) {
    throw InvalidArgument("matrix must have N*N entries");
  }
  TransformOperator op(Basis::qft, n);
  op.matrix_ = std::move(matrix);
  return op;
}

TransformOperator build_qft_operator(std::size_t n) {
  return TransformOperator::qft(n);
}

namespace {

void check_length(std::size_t got, std::size_t want) {
  if (got != want) {
    throw InvalidArgument("frame length " + std::to_string(got) +
                          " does not match transform size " +
                          std::to_string(want));
  }
}

}  // namespace

Spectrum TransformOperator::forward(std::span<const double> frame) const {
  check_length(frame.size(), n_);
  if (basis_ == Basis::dft) {
    std::vector<Complex> in(frame.begin(), frame.end());
    std::vector<Complex> out(n_);
    plans_->run(plans_->forward, in, out);
    return {std::move(out), basis_};
  }
  std::vector<Complex> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex* row = matrix_.data() + k * n_;
    double re = 0.0, im = 0.0;
    for (std::size_t x = 0; x < n_; ++x) {
      re += row[x].real() * frame[x];
      im += row[x].imag() * frame[x];
    }
    out[k] = {re, im};
  }
  return {std::move(out), basis_};
}

Spectrum TransformOperator::forward(std::span<const Complex> frame) const {
  check_length(frame.size(), n_);
  if (basis_ == Basis::dft) {
    std::vector<Complex> in(frame.begin(), frame.end());
    std::vector<Complex> out(n_);
    plans_->run(plans_->forward, in, out);
    return {std::move(out), basis_};
  }
  std::vector<Complex> out(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex* row = matrix_.data() + k * n_;
    double re = 0.0, im = 0.0;
    for (std::size_t x = 0; x < n_; ++x) {
      re += row[x].real() * frame[x].real() - row[x].imag() * frame[x].imag();
      im += row[x].real() * frame[x].imag() + row[x].imag() * frame[x].real();
    }
    out[k] = {re, im};
  }
  return {std::move(out), basis_};
}

std::vector<Complex> TransformOperator::inverse(const Spectrum& spectrum) const {
  if (spectrum.basis != basis_) {
    throw InvalidArgument("spectrum basis " +
                          std::string(to_string(spectrum.basis)) +
                          " does not match operator basis " +
                          std::string(to_string(basis_)));
  }
  check_length(spectrum.size(), n_);
  if (basis_ == Basis::dft) {
    std::vector<Complex> in = spectrum.bins;
    std::vector<Complex> out(n_);
    plans_->run(plans_->backward, in, out);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
    return out;
  }
  // x[c] = sum_k conj(U(k, c)) y[k], accumulated row by row.
  std::vector<double> re(n_, 0.0), im(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex* row = matrix_.data() + k * n_;
    const double yr = spectrum.bins[k].real();
    const double yi = spectrum.bins[k].imag();
    for (std::size_t c = 0; c < n_; ++c) {
      const double ur = row[c].real();
      const double ui = -row[c].imag();
      re[c] += ur * yr - ui * yi;
      im[c] += ur * yi + ui * yr;
    }
  }
  std::vector<Complex> out(n_);
  for (std::size_t c = 0; c < n_; ++c) out[c] = {re[c], im[c]};
  return out;
}

double unitarity_defect(const TransformOperator& op) {
  if (!op.materialized()) {
    throw InvalidArgument("unitarity defect needs a materialized operator");
  }
  const std::size_t n = op.size();
  const auto u = op.matrix();
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += u[i * n + k] * std::conj(u[j * n + k]);
      }
      if (i == j) acc -= 1.0;
      defect = std::max(defect, std::abs(acc));
    }
  }
  return defect;
}

}  // namespace unitone
