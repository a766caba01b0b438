#include "davoc/dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <vector>

namespace davoc {
namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

int16_t ToPcm16(double x) {
  const double scaled = std::round(x * 32768.0);
  return static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

Utterance ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(WavErrorCode::kOpenFailed, "cannot open " + path);
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(WavErrorCode::kMalformedHeader,
                   path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const uint8_t* data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    const size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        throw WavError(WavErrorCode::kMalformedHeader,
                       path + ": truncated fmt chunk");
      }
      const uint8_t* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      sample_rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        // The first two bytes of the sub-format GUID carry the real tag.
        if (size < 26) {
          throw WavError(WavErrorCode::kMalformedHeader,
                         path + ": truncated extensible fmt chunk");
        }
        format = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Some writers leave the size as 0xFFFFFFFF when streaming.
      data_size = std::min<size_t>(size, available);
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt) {
    throw WavError(WavErrorCode::kMalformedHeader, path + ": missing fmt chunk");
  }
  if (data == nullptr) {
    throw WavError(WavErrorCode::kMalformedHeader,
                   path + ": missing data chunk");
  }
  if (format != kFormatPcm || bits != 16) {
    throw WavError(WavErrorCode::kUnsupportedCodec,
                   path + ": only 16-bit integer PCM is supported");
  }
  if (channels == 0 || sample_rate == 0) {
    throw WavError(WavErrorCode::kMalformedHeader,
                   path + ": zero channels or sample rate");
  }
  const size_t frame_bytes = 2u * channels;
  const size_t frames = data_size / frame_bytes;
  if (frames == 0) {
    throw WavError(WavErrorCode::kEmptyPayload, path + ": no audio frames");
  }

  Utterance utt;
  utt.sample_rate = static_cast<int>(sample_rate);
  utt.id = std::filesystem::path(path).stem().string();
  utt.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (uint16_t c = 0; c < channels; ++c) {
      const auto v = static_cast<int16_t>(
          ReadU16(data + i * frame_bytes + 2u * c));
      acc += v;
    }
    utt.samples[i] = acc / channels / 32768.0;
  }
  if (utt.sample_rate != 44100) {
    std::clog << "warning: " << path << " is sampled at " << utt.sample_rate
              << " Hz (corpus format is 44100 Hz)\n";
  }
  return utt;
}

void WriteWav(const std::string& path, std::span<const double> samples,
              int sample_rate) {
  const auto data_bytes = static_cast<uint32_t>(samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(sample_rate));
  PutU32(out, static_cast<uint32_t>(sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double s : samples) PutU16(out, static_cast<uint16_t>(ToPcm16(s)));

  std::ofstream f(path, std::ios::binary);
  if (!f) throw WavError(WavErrorCode::kOpenFailed, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw WavError(WavErrorCode::kOpenFailed, "short write to " + path);
}

void QuantizePcm16(std::span<double> samples) {
  for (double& s : samples) s = ToPcm16(s) / 32768.0;
}

}  // namespace davoc
