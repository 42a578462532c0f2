// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "unitone/audio_io.hpp"
#include "unitone/errors.hpp"
#include "unitone/evaluation.hpp"
#include "unitone/filters.hpp"
#include "unitone/mixture.hpp"
#include "unitone/noise.hpp"
#include "unitone/signal.hpp"
#include "unitone/transform.hpp"

namespace py = pybind11;
using namespace unitone;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const RealArray& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const Waveform& w) {
  return to_array(std::vector<double>(w.samples().begin(), w.samples().end()));
}

Waveform to_waveform(const RealArray& a, double sample_rate) {
  return Waveform(to_vector(a), sample_rate);
}

PipelineConfig make_pipeline(const std::string& rule, const std::string& basis,
                             const std::string& window, std::size_t frame_length,
                             std::size_t hop, double alpha, double beta, double epsilon,
                             const std::string& noise_mode, bool unity_gain) {
  PipelineConfig cfg;
  cfg.filter.rule = parse_gain_rule(rule);
  cfg.basis = parse_basis(basis);
  cfg.window = parse_window_kind(window);
  cfg.framing = {frame_length, hop};
  cfg.filter.alpha = alpha;
  cfg.filter.beta = beta;
  cfg.filter.epsilon = epsilon;
  cfg.noise_mode = NoiseMode::parse(noise_mode);
  cfg.force_unity_gain = unity_gain;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_unitone, m) {
  m.doc() = "Spectral denoising with DFT and quantum-Fourier-transform bases";

  auto io_error = py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<UnsupportedFormat>(m, "UnsupportedFormat", io_error.ptr());
  py::register_exception<RateMismatch>(m, "RateMismatch", io_error.ptr());
  py::register_exception<NumericIntegrityError>(m, "NumericIntegrityError",
                                                PyExc_ArithmeticError);

  m.attr("SNR_CEILING_DB") = kSnrCeilingDb;

  // signal
  m.def("make_window",
        [](const std::string& kind, std::size_t length) {
          return to_array(make_window(parse_window_kind(kind), length).coefficients);
        },
        py::arg("kind"), py::arg("length"));
  m.def("frame_count",
        [](std::size_t n, std::size_t frame_length, std::size_t hop) {
          return frame_count(n, FramingSpec{frame_length, hop});
        },
        py::arg("signal_length"), py::arg("frame_length") = 128, py::arg("hop") = 64);
  m.def("frame_signal",
        [](const RealArray& x, std::size_t frame_length, std::size_t hop,
           const std::string& window) {
          const FramingSpec spec{frame_length, hop};
          const FrameMatrix f = frame_signal(to_waveform(x, 1.0), spec,
                                             make_window(parse_window_kind(window), frame_length));
          py::array_t<double> out({static_cast<py::ssize_t>(f.frames()),
                                   static_cast<py::ssize_t>(frame_length)});
          for (std::size_t r = 0; r < f.frames(); ++r) {
            const auto row = f.row(r);
            std::copy(row.begin(), row.end(), out.mutable_data(static_cast<py::ssize_t>(r), 0));
          }
          return out;
        },
        py::arg("x"), py::arg("frame_length") = 128, py::arg("hop") = 64,
        py::arg("window") = "hamming");

  // transform
  py::class_<TransformOperator>(m, "Operator")
      .def_static("dft", &TransformOperator::dft, py::arg("n"))
      .def_static("qft", &TransformOperator::qft, py::arg("n"))
      .def_property_readonly("basis",
                             [](const TransformOperator& op) {
                               return std::string(to_string(op.basis()));
                             })
      .def_property_readonly("size", &TransformOperator::size)
      .def("forward",
           [](const TransformOperator& op, const RealArray& x) {
             return to_array(op.forward(std::span<const double>(to_vector(x))).bins);
           },
           py::arg("x"))
      .def("inverse",
           [](const TransformOperator& op, const ComplexArray& bins) {
             if (bins.ndim() != 1) throw InvalidArgument("expected a 1-D array");
             Spectrum s{{bins.data(), bins.data() + bins.size()}, op.basis()};
             return to_array(op.inverse(s));
           },
           py::arg("bins"))
      .def("matrix", [](const TransformOperator& op) {
        if (!op.materialized()) throw InvalidArgument("operator has no dense matrix");
        const auto n = static_cast<py::ssize_t>(op.size());
        py::array_t<Complex> out({n, n});
        std::copy(op.matrix().begin(), op.matrix().end(), out.mutable_data());
        return out;
      });
  m.def("build_qft_operator", &build_qft_operator, py::arg("n"));
  m.def("unitarity_defect", &unitarity_defect, py::arg("op"));

  // filters
  m.def("wiener_gain",
        [](const RealArray& noisy_power, const RealArray& noise_psd, double epsilon) {
          const auto y = to_vector(noisy_power);
          const auto n = to_vector(noise_psd);
          return to_array(wiener_gain(y, n, epsilon).gains);
        },
        py::arg("noisy_power"), py::arg("noise_psd"), py::arg("epsilon") = 1e-12);
  m.def("spectral_subtraction_gain",
        [](const RealArray& noisy_mag, const RealArray& noise_mag, double alpha, double beta,
           double epsilon) {
          const auto y = to_vector(noisy_mag);
          const auto n = to_vector(noise_mag);
          return to_array(spectral_subtraction_gain(y, n, alpha, beta, epsilon).gains);
        },
        py::arg("noisy_magnitude"), py::arg("noise_magnitude"), py::arg("alpha") = 1.5,
        py::arg("beta") = 0.02, py::arg("epsilon") = 1e-12);
  m.def("denoise",
        [](const RealArray& noisy, std::optional<RealArray> noise_ref, double sample_rate,
           const std::string& rule, const std::string& basis, const std::string& window,
           std::size_t frame_length, std::size_t hop, double alpha, double beta,
           double epsilon, const std::string& noise_mode, bool unity_gain) {
          const PipelineConfig cfg = make_pipeline(rule, basis, window, frame_length, hop,
                                                   alpha, beta, epsilon, noise_mode,
                                                   unity_gain);
          std::optional<Waveform> ref;
          if (noise_ref) ref = to_waveform(*noise_ref, sample_rate);
          Waveform out = [&] {
            py::gil_scoped_release release;
            return denoise(to_waveform(noisy, sample_rate), ref, cfg);
          }();
          return to_array(out);
        },
        py::arg("noisy"), py::arg("noise_ref") = py::none(),
        py::arg("sample_rate") = kDefaultSampleRate, py::arg("rule") = "wiener",
        py::arg("basis") = "dft", py::arg("window") = "hamming",
        py::arg("frame_length") = 128, py::arg("hop") = 64, py::arg("alpha") = 1.5,
        py::arg("beta") = 0.02, py::arg("epsilon") = 1e-12,
        py::arg("noise_mode") = "oracle", py::arg("unity_gain") = false);

  // mixture
  m.def("gen_sinusoid",
        [](double f, double duration, double sr, double amplitude, double phase) {
          return to_array(gen_sinusoid(f, duration, sr, amplitude, phase));
        },
        py::arg("freq_hz"), py::arg("duration_s") = kDefaultDurationSeconds,
        py::arg("sample_rate") = kDefaultSampleRate, py::arg("amplitude") = 1.0,
        py::arg("phase") = 0.0);
  m.def("gen_sum_of_sinusoids",
        [](const std::vector<double>& freqs, std::uint64_t seed, double duration, double sr) {
          return to_array(gen_sum_of_sinusoids(freqs, seed, duration, sr));
        },
        py::arg("freqs_hz"), py::arg("seed"), py::arg("duration_s") = kDefaultDurationSeconds,
        py::arg("sample_rate") = kDefaultSampleRate);
  m.def("gen_white_noise",
        [](std::uint64_t seed, double duration, double sr) {
          return to_array(gen_white_noise(seed, duration, sr));
        },
        py::arg("seed"), py::arg("duration_s") = kDefaultDurationSeconds,
        py::arg("sample_rate") = kDefaultSampleRate);
  m.def("gen_speech_like",
        [](std::uint64_t seed, double duration, double sr) {
          return to_array(gen_speech_like(seed, duration, sr));
        },
        py::arg("seed"), py::arg("duration_s") = kDefaultDurationSeconds,
        py::arg("sample_rate") = kDefaultSampleRate);
  m.def("mix_at_snr",
        [](const RealArray& clean, const RealArray& noise, double target_db,
           double sample_rate) {
          const Mixture mix =
              mix_at_snr(to_waveform(clean, sample_rate), to_waveform(noise, sample_rate),
                         target_db);
          py::dict d;
          d["noisy"] = to_array(mix.noisy);
          d["clean"] = to_array(mix.clean);
          d["noise"] = to_array(mix.scaled_noise);
          d["noise_scale"] = mix.noise_scale;
          d["achieved_snr_db"] = mix.achieved_snr_db;
          return d;
        },
        py::arg("clean"), py::arg("noise"), py::arg("target_snr_db"),
        py::arg("sample_rate") = kDefaultSampleRate);

  // evaluation
  m.def("snr_db",
        [](const RealArray& clean, const RealArray& estimate) {
          return snr_db(to_waveform(clean, 1.0), to_waveform(estimate, 1.0));
        },
        py::arg("clean"), py::arg("estimate"));
  m.def("delta_snr",
        [](const RealArray& clean, const RealArray& noisy, const RealArray& enhanced) {
          return delta_snr(to_waveform(clean, 1.0), to_waveform(noisy, 1.0),
                           to_waveform(enhanced, 1.0));
        },
        py::arg("clean"), py::arg("noisy"), py::arg("enhanced"));
  m.def("experiment_csv",
        [](std::uint64_t seed, double duration, const std::vector<double>& snr_grid,
           std::size_t threads) {
          CorpusConfig cc;
          cc.master_seed = seed;
          cc.duration_s = duration;
          cc.snr_grid = snr_grid;
          ExperimentConfig ec;
          ec.threads = threads;
          py::gil_scoped_release release;
          return results_csv(run_experiment(build_corpus(cc), ec));
        },
        py::arg("seed") = 1234, py::arg("duration_s") = kDefaultDurationSeconds,
        py::arg("snr_grid") = kDefaultSnrGrid, py::arg("threads") = 0,
        "Runs the full dft/qft x wiener/ss grid and returns results.csv text.");

  // audio
  m.def("read_wav",
        [](const std::filesystem::path& path) {
          const Waveform w = read_wav(path);
          return py::make_tuple(to_array(w), w.sample_rate());
        },
        py::arg("path"), "Returns (samples, sample_rate).");
  m.def("write_wav",
        [](const std::filesystem::path& path, const RealArray& x, double sample_rate) {
          return write_wav(path, to_waveform(x, sample_rate));
        },
        py::arg("path"), py::arg("x"), py::arg("sample_rate") = kDefaultSampleRate,
        "Writes 16-bit PCM; returns the number of clipped samples.");
}
