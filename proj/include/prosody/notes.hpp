#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prosody/features.hpp"

namespace prosody {

// A musical pitch as (octave, note), with h counting semitones above C0.
// Octave and note are kept as separate fields so downstream consumers can
// treat them independently; h ties them together (h = 12*octave + note).
struct NoteLabel {
  int octave = 0;
  int note = 0;  // 0..11, 9 = A
  int h = 0;

  static NoteLabel from_semitone(int h);  // NegativeSemitone for h < 0

  friend bool operator==(const NoteLabel&, const NoteLabel&) = default;
};

struct NoteVocabulary {
  std::vector<NoteLabel> labels;  // distinct notes seen, ascending in h
  int h_min = 0;
  int h_max = 0;
};

// Semitone distance from C0, A4 pinned to 440 Hz:
// round-half-away-from-zero(12*log2(f0/440)) + 57.
int f0_to_semitone(double f0_hz);  // NonPositiveF0

// h -> (floor(h/12), h mod 12). Below C0 is out of domain.
std::pair<int, int> semitone_to_octave_note(int h);  // NegativeSemitone

// Center frequency of semitone h: 440 * 2^((h-57)/12).
double note_center_f0(int h);  // NegativeSemitone

// Every distinct note observed in the corpus becomes a vocabulary entry;
// the range spans the lowest to the highest.
NoteVocabulary build_note_vocab(std::span<const ProsodicFeature> features);  // TooFewPoints

// Quantizes each feature's mean F0 to a note, clamping into the
// vocabulary's range.
std::vector<NoteLabel> quantize_to_notes(std::span<const ProsodicFeature> features,
                                         const NoteVocabulary& vocab);

// Text formats: vocabulary rows `h octave note center_hz`; sequences are
// `<utt_id> octave:note octave:note ...` per line.
std::string note_vocab_to_text(const NoteVocabulary& vocab);
std::string note_sequence_to_text(const std::string& utterance_id,
                                  std::span<const NoteLabel> notes);

}  // namespace prosody
