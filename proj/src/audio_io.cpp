// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "unitone/errors.hpp"

namespace unitone {

namespace {

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ParsedWav {
  AudioFile info;
  std::vector<unsigned char> bytes;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
};

ParsedWav parse(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  ParsedWav w;
  w.bytes.assign(std::istreambuf_iterator<char>(in), {});
  const auto& b = w.bytes;
  const std::string name = path.string();
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    throw UnsupportedFormat(name + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false, have_data = false;
  std::uint16_t format_tag = 0;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const unsigned char* chunk = b.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > b.size()) {
        throw UnsupportedFormat(name + ": truncated fmt chunk");
      }
      format_tag = le16(b.data() + body);
      w.info.channels = le16(b.data() + body + 2);
      w.info.sample_rate = le32(b.data() + body + 4);
      w.info.bit_depth = le16(b.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (body + size > b.size()) {
        std::ostringstream msg;
        msg << name << ": data chunk declares " << size << " bytes but only "
            << (b.size() - body) << " follow";
        throw IoError(msg.str());
      }
      w.data_offset = body;
      w.data_size = size;
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw UnsupportedFormat(name + ": missing fmt chunk");
  if (!have_data) throw UnsupportedFormat(name + ": missing data chunk");
  w.info.path = path;
  if (format_tag != 1) {
    throw UnsupportedFormat(name + ": audio_format=" + std::to_string(format_tag) +
                            " (only PCM=1 is supported)");
  }
  return w;
}

}  // namespace

AudioFile probe_wav(const std::filesystem::path& path) { return parse(path).info; }

Waveform read_wav(const std::filesystem::path& path,
                  std::optional<double> expected_rate) {
  const ParsedWav w = parse(path);
  const std::string name = path.string();
  if (w.info.channels != 1) {
    throw UnsupportedFormat(name + ": channels=" + std::to_string(w.info.channels) +
                            " (only mono is supported)");
  }
  if (w.info.bit_depth != 16) {
    throw UnsupportedFormat(name + ": bits_per_sample=" +
                            std::to_string(w.info.bit_depth) +
                            " (only 16-bit PCM is supported)");
  }
  if (expected_rate && w.info.sample_rate != *expected_rate) {
    std::ostringstream msg;
    msg << name << ": sample_rate=" << w.info.sample_rate << " but "
        << *expected_rate << " was configured";
    throw RateMismatch(msg.str());
  }
  const std::size_t count = w.data_size / 2;
  if (count == 0) throw InvalidArgument(name + ": data chunk holds no samples");
  std::vector<double> samples(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::int16_t>(le16(w.bytes.data() + w.data_offset + 2 * i));
    samples[i] = static_cast<double>(v) / 32768.0;
  }
  return Waveform(std::move(samples), w.info.sample_rate);
}

std::size_t write_wav(const std::filesystem::path& path, const Waveform& x) {
  const auto samples = x.samples();
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(std::lround(x.sample_rate()));
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);  // PCM
  put16(out, 1);  // mono
  put32(out, rate);
  put32(out, rate * 2);  // byte rate
  put16(out, 2);         // block align
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);

  std::size_t clipped = 0;
  for (double v : samples) {
    if (std::abs(v) > 1.0) ++clipped;
    const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  write_file_atomic(path, out);
  return clipped;
}

Waveform normalize(const Waveform& x) {
  double peak = 0.0;
  for (double v : x.samples()) peak = std::max(peak, std::abs(v));
  if (peak <= 1.0) return x;
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& v : out) v /= peak;
  return Waveform(std::move(out), x.sample_rate());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move '" + tmp.string() + "' into place");
  }
}

}  // namespace unitone
