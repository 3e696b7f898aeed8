#pragma once

#include <span>
#include <string>
#include <vector>

#include "prosody/ingest.hpp"
#include "prosody/pitch.hpp"

namespace prosody {

// Per-phoneme prosodic description: mean natural-log F0 over the phoneme's
// span and its duration. Pauses, word boundaries and punctuation never get
// features.
struct ProsodicFeature {
  std::string utterance_id;
  int segment_index = 0;
  std::string phoneme;
  double mean_log_f0 = 0.0;  // ln Hz
  double duration_s = 0.0;
  PhoneClass phone_class = PhoneClass::Other;
  bool phrase_final = false;
};

// Mean of ln(f0) over the frames whose centers fall in [start_s, end_s).
// Phonemes too short to contain a frame center use the frame nearest to
// their midpoint. The track must be fully interpolated.
double phoneme_mean_log_f0(const PitchTrack& track, const PhonemeSegment& seg);

// One feature per prosodic-target segment, in segment order.
std::vector<ProsodicFeature> build_features(const Utterance& utt, const PitchTrack& track);

// CSV interchange: `utt_id,seg_idx,phoneme,class,final,duration_s,mean_log_f0`.
std::string features_to_csv(std::span<const ProsodicFeature> features);
std::vector<ProsodicFeature> features_from_csv(const std::string& text);

// Features of one utterance at a time, preserving first-seen order.
std::vector<std::pair<std::string, std::vector<ProsodicFeature>>>
group_by_utterance(std::span<const ProsodicFeature> features);

}  // namespace prosody
