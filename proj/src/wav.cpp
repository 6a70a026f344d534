// Copyright 2026 The VoiceBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "error.hpp"

namespace voicebench {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xfffe;

struct FmtChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
};

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

struct WavChunks {
  FmtChunk fmt;
  std::vector<uint8_t> data;
  uint64_t data_size = 0;
  bool data_truncated = false;
};

// Walks the RIFF chunk list. read_samples controls whether the data chunk
// payload is loaded or only measured.
WavChunks parse_wav(const std::string& path, bool read_samples) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);

  uint8_t riff[12];
  if (!in.read(reinterpret_cast<char*>(riff), 12)) {
    fail(ErrorCode::Format, path + ": file too small for a RIFF header");
  }
  if (std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(riff + 8, "WAVE", 4) != 0) {
    fail(ErrorCode::Unsupported, path + ": not a RIFF/WAVE file");
  }

  WavChunks out;
  bool have_fmt = false, have_data = false;
  while (!have_data) {
    uint8_t head[8];
    if (!in.read(reinterpret_cast<char*>(head), 8)) {
      if (have_fmt) fail(ErrorCode::Format, path + ": no data chunk");
      fail(ErrorCode::Format, path + ": no fmt chunk");
    }
    const uint32_t size = read_u32(head + 4);
    if (std::memcmp(head, "fmt ", 4) == 0) {
      std::vector<uint8_t> body(size);
      if (!in.read(reinterpret_cast<char*>(body.data()), size) || size < 16) {
        fail(ErrorCode::Format, path + ": truncated fmt chunk");
      }
      out.fmt.format = read_u16(body.data());
      out.fmt.channels = read_u16(body.data() + 2);
      out.fmt.sample_rate = read_u32(body.data() + 4);
      out.fmt.bits_per_sample = read_u16(body.data() + 14);
      if (out.fmt.format == kFormatExtensible) {
        // Sub-format GUID begins with the effective format code.
        if (size < 40) fail(ErrorCode::Format, path + ": short WAVE_FORMAT_EXTENSIBLE fmt chunk");
        out.fmt.format = read_u16(body.data() + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(head, "data", 4) == 0) {
      if (!have_fmt) fail(ErrorCode::Format, path + ": data chunk before fmt chunk");
      out.data_size = size;
      if (read_samples) {
        out.data.resize(size);
        in.read(reinterpret_cast<char*>(out.data.data()), size);
        const auto got = static_cast<uint64_t>(in.gcount());
        if (got < size) {
          out.data.resize(got);
          out.data_truncated = true;
        }
      }
      have_data = true;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
      if (!in) fail(ErrorCode::Format, path + ": truncated chunk list");
    }
  }

  if (out.fmt.channels == 0 || out.fmt.sample_rate == 0) {
    fail(ErrorCode::Format, path + ": fmt chunk has zero channels or rate");
  }
  if (out.fmt.format != kFormatPcm && out.fmt.format != kFormatFloat) {
    fail(ErrorCode::Unsupported,
         path + ": compressed or unknown codec (format tag " + std::to_string(out.fmt.format) + ")");
  }
  const int bits = out.fmt.bits_per_sample;
  if (out.fmt.format == kFormatPcm && bits != 8 && bits != 16 && bits != 24 && bits != 32) {
    fail(ErrorCode::Unsupported, path + ": unsupported PCM depth " + std::to_string(bits));
  }
  if (out.fmt.format == kFormatFloat && bits != 32) {
    fail(ErrorCode::Unsupported, path + ": unsupported float depth " + std::to_string(bits));
  }
  return out;
}

}  // namespace

Recording decode_wav(const std::string& path) {
  const WavChunks wav = parse_wav(path, /*read_samples=*/true);
  if (wav.data_truncated) fail(ErrorCode::Format, path + ": data chunk truncated");

  const int channels = wav.fmt.channels;
  const int bytes_per_sample = wav.fmt.bits_per_sample / 8;
  const size_t frame_bytes = static_cast<size_t>(bytes_per_sample) * channels;
  if (wav.data.size() % frame_bytes != 0) {
    fail(ErrorCode::Format, path + ": data size is not a whole number of frames");
  }
  const size_t frames = wav.data.size() / frame_bytes;

  Recording rec;
  rec.sample_rate = static_cast<int>(wav.fmt.sample_rate);
  rec.samples.resize(frames);

  const uint8_t* p = wav.data.data();
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const uint8_t* s = p + f * frame_bytes + static_cast<size_t>(c) * bytes_per_sample;
      double v = 0.0;
      if (wav.fmt.format == kFormatFloat) {
        float fv;
        uint32_t bitsv = read_u32(s);
        std::memcpy(&fv, &bitsv, 4);
        v = fv;
      } else {
        switch (wav.fmt.bits_per_sample) {
          case 8:
            v = (static_cast<int>(s[0]) - 128) / 128.0;  // 8-bit WAV is unsigned
            break;
          case 16:
            v = static_cast<int16_t>(read_u16(s)) / 32768.0;
            break;
          case 24: {
            int32_t iv = s[0] | s[1] << 8 | s[2] << 16;
            if (iv & 0x800000) iv |= ~0xffffff;
            v = iv / 8388608.0;
            break;
          }
          case 32:
            v = static_cast<int32_t>(read_u32(s)) / 2147483648.0;
            break;
        }
      }
      acc += v;
    }
    rec.samples[f] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return rec;
}

WavInfo wav_info(const std::string& path) {
  const WavChunks wav = parse_wav(path, /*read_samples=*/false);
  WavInfo info;
  info.sample_rate = static_cast<int>(wav.fmt.sample_rate);
  info.channels = wav.fmt.channels;
  info.bits_per_sample = wav.fmt.bits_per_sample;
  const uint64_t frame_bytes =
      static_cast<uint64_t>(wav.fmt.bits_per_sample / 8) * wav.fmt.channels;
  info.frames = frame_bytes ? wav.data_size / frame_bytes : 0;
  info.duration = static_cast<double>(info.frames) / info.sample_rate;
  return info;
}

void write_wav(const std::string& path, const Recording& rec) {
  if (rec.sample_rate <= 0) fail(ErrorCode::InvalidArgument, "write_wav: sample_rate must be > 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);

  const uint32_t data_size = static_cast<uint32_t>(rec.samples.size() * 2);
  const uint32_t rate = static_cast<uint32_t>(rec.sample_rate);
  const uint32_t byte_rate = rate * 2;

  auto put_u32 = [&out](uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  auto put_u16 = [&out](uint16_t v) {
    const uint8_t b[2] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
  };

  out.write("RIFF", 4);
  put_u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);  // mono
  put_u32(rate);
  put_u32(byte_rate);
  put_u16(2);   // block align
  put_u16(16);  // bits
  out.write("data", 4);
  put_u32(data_size);
  for (double v : rec.samples) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    const auto q = static_cast<int16_t>(std::lround(clamped * 32767.0));
    put_u16(static_cast<uint16_t>(q));
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

}  // namespace voicebench
