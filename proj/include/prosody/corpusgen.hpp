#pragma once

#include <cstdint>
#include <filesystem>

namespace prosody {

// Deterministic synthetic mini-corpus: paired .wav/.lab files plus the
// phone table. Vowels are harmonic tones whose pitch sits in one of three
// speaker "registers" with jitter and declination; consonants are noise
// bursts; phrase-final syllables are lengthened. Enough structure for the
// whole pipeline to produce meaningful clusters.
struct CorpusSpec {
  int utterances = 20;
  std::uint64_t seed = 7;
  int sample_rate_hz = 24000;
};

void synthesize_mini_corpus(const std::filesystem::path& dir,
                            const CorpusSpec& spec = {});

}  // namespace prosody
