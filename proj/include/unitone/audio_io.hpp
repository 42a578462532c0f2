// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "unitone/signal.hpp"

namespace unitone {

struct AudioFile {
  std::filesystem::path path;
  int channels;
  int bit_depth;
  double sample_rate;
};

/// Header fields of a RIFF/WAVE file, without decoding samples.
AudioFile probe_wav(const std::filesystem::path& path);

/// Reads mono PCM16. Samples map to [-1, 1) as value / 32768. When
/// `expected_rate` is given, a different header rate raises RateMismatch.
Waveform read_wav(const std::filesystem::path& path,
                  std::optional<double> expected_rate = std::nullopt);

/// Writes mono PCM16 with the canonical 44-byte header. Values outside
/// [-1, 1] are clipped; returns how many were.
std::size_t write_wav(const std::filesystem::path& path, const Waveform& x);

/// Divides by max |x| when it exceeds 1; otherwise returns x unchanged.
Waveform normalize(const Waveform& x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace unitone
