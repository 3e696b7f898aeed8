#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prosody {

enum class SegmentKind { Phoneme, Pause, WordBoundary, Punctuation };
enum class PhoneClass { Vowel, Consonant, Other };

const char* kind_name(SegmentKind kind);
const char* phone_class_name(PhoneClass cls);
SegmentKind kind_from_name(std::string_view name);        // BadArgument
PhoneClass phone_class_from_name(std::string_view name);  // BadArgument

// One aligned segment of an utterance. Pauses, word boundaries and
// punctuation may have zero duration; phonemes may not.
struct PhonemeSegment {
  std::string label;
  double start_s = 0.0;
  double end_s = 0.0;
  SegmentKind kind = SegmentKind::Phoneme;
  PhoneClass phone_class = PhoneClass::Other;
  bool phrase_final = false;

  double duration_s() const { return end_s - start_s; }
};

struct Utterance {
  std::string id;
  std::vector<PhonemeSegment> segments;
  std::string audio_path;  // empty when no audio is attached
  int sample_rate_hz = 24000;
};

// Maps alignment labels to their segment kind and phoneme class.
// Text format: one entry per line, `<label> <kind> <class>`,
// e.g. `a phoneme vowel`. Lines starting with '#' are comments.
class PhoneClassTable {
 public:
  void add(const std::string& label, SegmentKind kind, PhoneClass cls);
  bool contains(const std::string& label) const;
  std::pair<SegmentKind, PhoneClass> lookup(const std::string& label) const;

  static PhoneClassTable parse(const std::string& text);
  static PhoneClassTable load(const std::filesystem::path& path);

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::pair<SegmentKind, PhoneClass>> entries_;
};

struct ParseWarning {
  int line_no = 0;
  std::string message;
};

// Alignment label files store times as integers in 100 ns units.
std::int64_t seconds_to_htk(double seconds);
double htk_to_seconds(std::int64_t ticks);

// A pause at least this long separates phrases.
inline constexpr double kPhraseBreakPauseS = 0.150;

// Parses an alignment label file: one segment per line,
// `<start> <end> <label>` with integer times in 100 ns units.
// Labels missing from the table become phoneme/other and produce a warning.
Utterance parse_label_file(const std::string& text, const PhoneClassTable& table,
                           const std::string& id = {},
                           std::vector<ParseWarning>* warnings = nullptr);

// Flags the phonemes of each phrase-final rime. A phrase ends at a
// punctuation token, a pause of at least kPhraseBreakPauseS, or the end of
// the utterance. Within a phrase the span from the last vowel (inclusive)
// to the boundary is flagged; a vowel-less phrase flags only its last
// phoneme. Idempotent.
Utterance mark_phrase_final(Utterance utt);

// Indices of the segments that receive prosodic labels: phonemes only.
// Pauses, word boundaries and punctuation are skipped, so the result is
// usually shorter than the segment list.
std::vector<std::size_t> prosodic_targets(const Utterance& utt);

// Serialization back to the label-file format (exact on the 100 ns grid).
std::string to_lab_text(const Utterance& utt);

// One utterance as a single-line JSON record, and back.
std::string to_json_record(const Utterance& utt);
Utterance utterance_from_json(const std::string& line);

}  // namespace prosody
