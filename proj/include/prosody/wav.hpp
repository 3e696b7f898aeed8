#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace prosody {

struct WavData {
  std::vector<double> samples;  // mono, in [-1, 1]
  int sample_rate_hz = 0;
  double duration_s() const {
    return sample_rate_hz > 0
               ? static_cast<double>(samples.size()) / sample_rate_hz
               : 0.0;
  }
};

// Linear PCM, 16-bit, mono. Anything else is rejected.
WavData read_wav_mono16(const std::filesystem::path& path);
void write_wav_mono16(const std::filesystem::path& path,
                      std::span<const double> samples, int sample_rate_hz);

}  // namespace prosody
