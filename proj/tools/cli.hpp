// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unitone/evaluation.hpp"
#include "unitone/filters.hpp"
#include "unitone/mixture.hpp"

namespace unitone::cli {

/// Fully resolved settings shared by every subcommand.
struct RunConfig {
  std::uint64_t master_seed = 1234;
  double sample_rate = kDefaultSampleRate;
  double duration_s = kDefaultDurationSeconds;
  std::size_t frame_length = 128;
  std::size_t hop = 64;
  std::string window = "hamming";
  double alpha = 1.5;
  double beta = 0.02;
  double epsilon = 1e-12;
  std::string noise_mode = "oracle";
  std::vector<double> snr_grid = kDefaultSnrGrid;
  std::vector<std::string> clean_sources;
  std::vector<std::string> noise_sources;
  std::filesystem::path out_dir = "unitone-out";
  std::size_t threads = 0;
  std::string rule = "wiener";
  std::string basis = "dft";
  bool unity_gain = false;

  PipelineConfig pipeline() const;
  CorpusConfig corpus() const;
  /// Checks every module precondition; throws InvalidArgument.
  void validate() const;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Entry point for the `unitone` tool; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unitone::cli
