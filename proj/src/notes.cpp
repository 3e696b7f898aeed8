#include "prosody/notes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "prosody/errors.hpp"
#include "prosody/util.hpp"

namespace prosody {

namespace {

constexpr double kConcertA = 440.0;
constexpr int kConcertASemitone = 57;  // A4 counted from C0

}  // namespace

NoteLabel NoteLabel::from_semitone(int h) {
  const auto [octave, note] = semitone_to_octave_note(h);
  return NoteLabel{octave, note, h};
}

int f0_to_semitone(double f0_hz) {
  if (!(f0_hz > 0.0))
    throw Error(ErrorCode::NonPositiveF0, "f0 must be positive, got " + fmt_double(f0_hz));
  const double offset = 12.0 * std::log2(f0_hz / kConcertA);
  // llround rounds halves away from zero.
  return static_cast<int>(std::llround(offset)) + kConcertASemitone;
}

std::pair<int, int> semitone_to_octave_note(int h) {
  if (h < 0)
    throw Error(ErrorCode::NegativeSemitone,
                "semitone " + std::to_string(h) + " lies below C0");
  return {h / 12, h % 12};
}

double note_center_f0(int h) {
  if (h < 0)
    throw Error(ErrorCode::NegativeSemitone,
                "semitone " + std::to_string(h) + " lies below C0");
  return kConcertA * std::exp2((h - kConcertASemitone) / 12.0);
}

NoteVocabulary build_note_vocab(std::span<const ProsodicFeature> features) {
  if (features.empty())
    throw Error(ErrorCode::TooFewPoints, "no features to build a note vocabulary from");
  std::set<int> semitones;
  for (const auto& f : features)
    semitones.insert(f0_to_semitone(std::exp(f.mean_log_f0)));

  NoteVocabulary vocab;
  vocab.h_min = *semitones.begin();
  vocab.h_max = *semitones.rbegin();
  vocab.labels.reserve(semitones.size());
  for (const int h : semitones) vocab.labels.push_back(NoteLabel::from_semitone(h));
  return vocab;
}

std::vector<NoteLabel> quantize_to_notes(std::span<const ProsodicFeature> features,
                                         const NoteVocabulary& vocab) {
  std::vector<NoteLabel> notes;
  notes.reserve(features.size());
  for (const auto& f : features) {
    const int h = std::clamp(f0_to_semitone(std::exp(f.mean_log_f0)), vocab.h_min, vocab.h_max);
    notes.push_back(NoteLabel::from_semitone(h));
  }
  return notes;
}

std::string note_vocab_to_text(const NoteVocabulary& vocab) {
  std::ostringstream out;
  out << "h octave note center_hz\n";
  for (const auto& label : vocab.labels)
    out << label.h << ' ' << label.octave << ' ' << label.note << ' '
        << fmt_double(note_center_f0(label.h)) << '\n';
  return out.str();
}

std::string note_sequence_to_text(const std::string& utterance_id,
                                  std::span<const NoteLabel> notes) {
  std::ostringstream out;
  out << utterance_id;
  for (const auto& n : notes) out << ' ' << n.octave << ':' << n.note;
  out << '\n';
  return out.str();
}

}  // namespace prosody
