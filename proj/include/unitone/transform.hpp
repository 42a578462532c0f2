// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace unitone {

using Complex = std::complex<double>;

enum class Basis { dft, qft };

std::string_view to_string(Basis basis);
Basis parse_basis(std::string_view name);

struct Spectrum {
  std::vector<Complex> bins;
  Basis basis;

  std::size_t size() const { return bins.size(); }
};

namespace detail {
struct FftPlans;
}

/// Forward/inverse transform of fixed size N.
///
/// dft: forward is the unnormalized sum x[n] e^{-j 2 pi k n / N}, inverse
/// carries the 1/N factor. Backed by FFTW; no matrix is stored.
///
/// qft: a dense unitary matrix U with U(k, x) = e^{+j 2 pi x k / N} / sqrt(N).
/// Forward is U x, inverse is the conjugate transpose U^H y.
///
/// Immutable after construction and safe to share across threads.
class TransformOperator {
 public:
  static TransformOperator dft(std::size_t n);
  static TransformOperator qft(std::size_t n);
  /// Wraps an arbitrary row-major N x N matrix as a qft-basis operator. Used
  /// for diagnostics (e.g. measuring the unitarity defect of a perturbed
  /// matrix).
  static TransformOperator from_matrix(std::size_t n,
                                       std::vector<Complex> matrix);

  Basis basis() const { return basis_; }
  std::size_t size() const { return n_; }
  bool materialized() const { return !matrix_.empty(); }
  /// Row-major N x N; empty for the dft basis.
  std::span<const Complex> matrix() const { return matrix_; }
  Complex entry(std::size_t row, std::size_t col) const {
    return matrix_[row * n_ + col];
  }

  Spectrum forward(std::span<const double> frame) const;
  Spectrum forward(std::span<const Complex> frame) const;
  std::vector<Complex> inverse(const Spectrum& spectrum) const;

 private:
  TransformOperator(Basis basis, std::size_t n) : basis_(basis), n_(n) {}

  Basis basis_;
  std::size_t n_;
  std::vector<Complex> matrix_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Dense QFT operator of size N. Throws InvalidArgument for N = 0.
TransformOperator build_qft_operator(std::size_t n);

/// max |(U U^H - I)_{ij}|. Requires a materialized operator.
double unitarity_defect(const TransformOperator& op);

}  // namespace unitone
