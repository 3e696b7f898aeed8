#include "prosody/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prosody/errors.hpp"
#include "prosody/util.hpp"

namespace prosody {

double phoneme_mean_log_f0(const PitchTrack& track, const PhonemeSegment& seg) {
  if (track.frames.empty())
    throw Error(ErrorCode::EmptyTrack, "pitch track has no frames");
  if (seg.kind != SegmentKind::Phoneme)
    throw Error(ErrorCode::BadArgument, "segment '" + seg.label + "' is not a phoneme");

  double sum = 0.0;
  int count = 0;
  for (const auto& frame : track.frames) {
    if (frame.time_s < seg.start_s || frame.time_s >= seg.end_s) continue;
    if (!frame.f0_hz)
      throw Error(ErrorCode::BadArgument, "track is not fully interpolated");
    sum += std::log(*frame.f0_hz);
    ++count;
  }
  if (count > 0) return sum / count;

  // Sub-frame phoneme: fall back to the frame nearest its midpoint.
  const double mid = 0.5 * (seg.start_s + seg.end_s);
  const PitchFrame* nearest = &track.frames.front();
  for (const auto& frame : track.frames)
    if (std::abs(frame.time_s - mid) < std::abs(nearest->time_s - mid)) nearest = &frame;
  if (!nearest->f0_hz)
    throw Error(ErrorCode::BadArgument, "track is not fully interpolated");
  return std::log(*nearest->f0_hz);
}

std::vector<ProsodicFeature> build_features(const Utterance& utt, const PitchTrack& track) {
  std::vector<ProsodicFeature> features;
  for (const std::size_t idx : prosodic_targets(utt)) {
    const auto& seg = utt.segments[idx];
    ProsodicFeature f;
    f.utterance_id = utt.id;
    f.segment_index = static_cast<int>(idx);
    f.phoneme = seg.label;
    f.duration_s = seg.duration_s();
    f.mean_log_f0 = phoneme_mean_log_f0(track, seg);
    f.phone_class = seg.phone_class;
    f.phrase_final = seg.phrase_final;
    features.push_back(std::move(f));
  }
  return features;
}

std::string features_to_csv(std::span<const ProsodicFeature> features) {
  std::ostringstream out;
  out << "utt_id,seg_idx,phoneme,class,final,duration_s,mean_log_f0\n";
  for (const auto& f : features) {
    out << f.utterance_id << ',' << f.segment_index << ',' << f.phoneme << ','
        << phone_class_name(f.phone_class) << ',' << (f.phrase_final ? 1 : 0) << ','
        << fmt_double(f.duration_s) << ',' << fmt_double(f.mean_log_f0) << '\n';
  }
  return out.str();
}

std::vector<ProsodicFeature> features_from_csv(const std::string& text) {
  std::vector<ProsodicFeature> features;
  int line_no = 0;
  for (const auto& line : split_on(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("utt_id,", 0) == 0) continue;  // header
    const auto cols = split_on(line, ',');
    if (cols.size() != 7)
      throw Error(ErrorCode::MalformedLine,
                  "features line " + std::to_string(line_no) + ": expected 7 columns");
    const auto seg_idx = parse_int64(cols[1]);
    const auto final_flag = parse_int64(cols[4]);
    const auto duration = parse_double(cols[5]);
    const auto mean_log_f0 = parse_double(cols[6]);
    if (!seg_idx || !final_flag || !duration || !mean_log_f0)
      throw Error(ErrorCode::MalformedLine,
                  "features line " + std::to_string(line_no) + ": bad numeric field");
    ProsodicFeature f;
    f.utterance_id = cols[0];
    f.segment_index = static_cast<int>(*seg_idx);
    f.phoneme = cols[2];
    f.phone_class = phone_class_from_name(cols[3]);
    f.phrase_final = *final_flag != 0;
    f.duration_s = *duration;
    f.mean_log_f0 = *mean_log_f0;
    features.push_back(std::move(f));
  }
  return features;
}

std::vector<std::pair<std::string, std::vector<ProsodicFeature>>>
group_by_utterance(std::span<const ProsodicFeature> features) {
  std::vector<std::pair<std::string, std::vector<ProsodicFeature>>> groups;
  for (const auto& f : features) {
    if (groups.empty() || groups.back().first != f.utterance_id) {
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first == f.utterance_id; });
      if (it != groups.end()) {
        it->second.push_back(f);
        continue;
      }
      groups.emplace_back(f.utterance_id, std::vector<ProsodicFeature>{});
    }
    groups.back().second.push_back(f);
  }
  return groups;
}

}  // namespace prosody
