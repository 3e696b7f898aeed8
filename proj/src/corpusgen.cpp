#include "prosody/corpusgen.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "prosody/errors.hpp"
#include "prosody/rng.hpp"
#include "prosody/util.hpp"
#include "prosody/wav.hpp"

namespace prosody {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

const char* const kVowels[] = {"a", "e", "i", "o", "u"};
const char* const kConsonants[] = {"t", "k", "s", "m", "n"};

struct PlannedSegment {
  std::string label;
  int duration_ms = 0;
  bool voiced = false;
  double f0_hz = 0.0;  // for voiced segments
};

std::string phone_table_text() {
  std::ostringstream out;
  out << "# synthetic corpus symbols\n";
  for (const char* v : kVowels) out << v << " phoneme vowel\n";
  for (const char* c : kConsonants) out << c << " phoneme consonant\n";
  out << "sp pause other\n";
  out << "wb word_boundary other\n";
  out << ". punctuation other\n";
  return out.str();
}

std::vector<PlannedSegment> plan_utterance(Rng& rng, double base_f0) {
  std::vector<PlannedSegment> plan;
  const int phrases = rng.range(1, 2);
  int phonemes_planned = 0;
  for (int p = 0; p < phrases; ++p) {
    const int words = rng.range(2, 3);
    for (int w = 0; w < words; ++w) {
      const int syllables = rng.range(1, 2);
      for (int s = 0; s < syllables; ++s) {
        const bool final_syllable =
            (w == words - 1 && s == syllables - 1);
        const double stretch = final_syllable ? 1.6 : 1.0;
        // Declination: pitch drifts down as the utterance proceeds.
        const double slope = 1.0 - 0.003 * phonemes_planned;
        const double jitter = 1.0 + 0.03 * rng.normal();

        PlannedSegment consonant;
        consonant.label = kConsonants[rng.index(std::size(kConsonants))];
        consonant.duration_ms = static_cast<int>(rng.range(35, 85) * stretch);
        plan.push_back(consonant);
        ++phonemes_planned;

        PlannedSegment vowel;
        vowel.label = kVowels[rng.index(std::size(kVowels))];
        vowel.duration_ms = static_cast<int>(rng.range(70, 150) * stretch);
        vowel.voiced = true;
        vowel.f0_hz = base_f0 * slope * jitter;
        plan.push_back(vowel);
        ++phonemes_planned;
      }
      if (w + 1 < words) plan.push_back({"wb", 0, false, 0.0});
    }
    if (p + 1 < phrases) {
      // A pause long enough to end the phrase.
      plan.push_back({"sp", rng.range(200, 350), false, 0.0});
    }
  }
  plan.push_back({".", 0, false, 0.0});
  return plan;
}

void render_audio(const std::vector<PlannedSegment>& plan, int fs,
                  Rng& rng, std::vector<double>& samples) {
  double phase = 0.0;
  for (const auto& seg : plan) {
    const int n = static_cast<int>(std::llround(seg.duration_ms * 1e-3 * fs));
    if (n == 0) continue;
    if (seg.voiced) {
      const double step = kTwoPi * seg.f0_hz / fs;
      for (int t = 0; t < n; ++t) {
        // Short raised-cosine ramps keep segment joins click-free.
        const int edge = std::min(t, n - 1 - t);
        const double ramp = edge < 240 ? 0.5 - 0.5 * std::cos(kTwoPi * edge / 480.0) : 1.0;
        double v = 0.0;
        double amp = 0.5;
        for (int harmonic = 1; harmonic <= 4; ++harmonic) {
          v += amp * std::sin(harmonic * phase);
          amp *= 0.5;
        }
        samples.push_back(0.35 * ramp * v);
        phase += step;
        if (phase > kTwoPi) phase -= kTwoPi;
      }
    } else if (seg.label == "sp" || seg.label == "." || seg.label == "wb") {
      for (int t = 0; t < n; ++t) samples.push_back(0.0);
    } else {
      for (int t = 0; t < n; ++t) samples.push_back(0.04 * rng.normal());
    }
  }
}

}  // namespace

void synthesize_mini_corpus(const std::filesystem::path& dir, const CorpusSpec& spec) {
  if (spec.utterances < 1)
    throw Error(ErrorCode::BadArgument, "corpus needs at least one utterance");
  std::filesystem::create_directories(dir);
  write_text_file(dir / "phones.txt", phone_table_text());

  Rng rng(spec.seed);
  const double registers[] = {120.0, 180.0, 250.0};
  for (int u = 0; u < spec.utterances; ++u) {
    char id[16];
    std::snprintf(id, sizeof(id), "utt%03d", u);

    const double base_f0 = registers[u % 3] * (1.0 + 0.02 * rng.normal());
    const auto plan = plan_utterance(rng, base_f0);

    std::ostringstream lab;
    std::int64_t ticks = 0;
    for (const auto& seg : plan) {
      const std::int64_t next = ticks + static_cast<std::int64_t>(seg.duration_ms) * 10000;
      lab << ticks << ' ' << next << ' ' << seg.label << '\n';
      ticks = next;
    }

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(ticks / 10000 * spec.sample_rate_hz / 1000 + 16));
    render_audio(plan, spec.sample_rate_hz, rng, samples);

    write_text_file(dir / (std::string(id) + ".lab"), lab.str());
    write_wav_mono16(dir / (std::string(id) + ".wav"), samples, spec.sample_rate_hz);
  }
}

}  // namespace prosody
