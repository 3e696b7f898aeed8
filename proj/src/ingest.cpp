#include "prosody/ingest.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "prosody/errors.hpp"
#include "prosody/util.hpp"

namespace prosody {

namespace {

// Overlaps up to this long are tolerated; forced aligners sometimes emit
// boundaries that disagree by a sample or two.
constexpr double kOverlapToleranceS = 0.001;

}  // namespace

const char* kind_name(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Phoneme: return "phoneme";
    case SegmentKind::Pause: return "pause";
    case SegmentKind::WordBoundary: return "word_boundary";
    case SegmentKind::Punctuation: return "punctuation";
  }
  return "phoneme";
}

const char* phone_class_name(PhoneClass cls) {
  switch (cls) {
    case PhoneClass::Vowel: return "vowel";
    case PhoneClass::Consonant: return "consonant";
    case PhoneClass::Other: return "other";
  }
  return "other";
}

SegmentKind kind_from_name(std::string_view name) {
  if (name == "phoneme") return SegmentKind::Phoneme;
  if (name == "pause") return SegmentKind::Pause;
  if (name == "word_boundary") return SegmentKind::WordBoundary;
  if (name == "punctuation") return SegmentKind::Punctuation;
  throw Error(ErrorCode::BadArgument, "unknown segment kind '" + std::string(name) + "'");
}

PhoneClass phone_class_from_name(std::string_view name) {
  if (name == "vowel") return PhoneClass::Vowel;
  if (name == "consonant") return PhoneClass::Consonant;
  if (name == "other") return PhoneClass::Other;
  throw Error(ErrorCode::BadArgument, "unknown phoneme class '" + std::string(name) + "'");
}

void PhoneClassTable::add(const std::string& label, SegmentKind kind, PhoneClass cls) {
  entries_[label] = {kind, cls};
}

bool PhoneClassTable::contains(const std::string& label) const {
  return entries_.count(label) != 0;
}

std::pair<SegmentKind, PhoneClass> PhoneClassTable::lookup(const std::string& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end())
    throw Error(ErrorCode::BadArgument, "label '" + label + "' not in phone table");
  return it->second;
}

PhoneClassTable PhoneClassTable::parse(const std::string& text) {
  PhoneClassTable table;
  int line_no = 0;
  for (const auto& line : split_on(text, '\n')) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() < 3)
      throw Error(ErrorCode::MalformedLine,
                  "phone table line " + std::to_string(line_no) + ": expected `<label> <kind> <class>`");
    table.add(fields[0], kind_from_name(fields[1]), phone_class_from_name(fields[2]));
  }
  return table;
}

PhoneClassTable PhoneClassTable::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

std::int64_t seconds_to_htk(double seconds) {
  return std::llround(seconds * 1e7);
}

double htk_to_seconds(std::int64_t ticks) {
  return static_cast<double>(ticks) * 1e-7;
}

Utterance parse_label_file(const std::string& text, const PhoneClassTable& table,
                           const std::string& id, std::vector<ParseWarning>* warnings) {
  Utterance utt;
  utt.id = id;
  int line_no = 0;
  double prev_end = 0.0;
  for (const auto& line : split_on(text, '\n')) {
    ++line_no;
    if (split_fields(line).empty()) continue;  // blank line
    const auto fields = split_fields(line);
    if (fields.size() < 3)
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": expected `<start> <end> <label>`");
    const auto start_ticks = parse_int64(fields[0]);
    const auto end_ticks = parse_int64(fields[1]);
    if (!start_ticks || !end_ticks || *start_ticks < 0 || *end_ticks < 0)
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": non-numeric or negative time field");

    PhonemeSegment seg;
    seg.label = fields[2];
    seg.start_s = htk_to_seconds(*start_ticks);
    seg.end_s = htk_to_seconds(*end_ticks);
    if (table.contains(seg.label)) {
      std::tie(seg.kind, seg.phone_class) = table.lookup(seg.label);
    } else {
      seg.kind = SegmentKind::Phoneme;
      seg.phone_class = PhoneClass::Other;
      if (warnings)
        warnings->push_back({line_no, "unknown label '" + seg.label + "', treated as phoneme/other"});
    }

    if (seg.end_s < seg.start_s)
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": end precedes start");
    if (seg.kind == SegmentKind::Phoneme && *end_ticks == *start_ticks)
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": zero-duration phoneme '" + seg.label + "'");
    if (seg.start_s < prev_end - kOverlapToleranceS)
      throw Error(ErrorCode::NonMonotonicTimes,
                  "line " + std::to_string(line_no) + ": segment starts before previous end");
    prev_end = std::max(prev_end, seg.end_s);
    utt.segments.push_back(std::move(seg));
  }
  return utt;
}

namespace {

bool is_phrase_boundary(const PhonemeSegment& seg) {
  if (seg.kind == SegmentKind::Punctuation) return true;
  if (seg.kind == SegmentKind::Pause && seg.duration_s() >= kPhraseBreakPauseS) return true;
  return false;
}

// Flags the rime of [begin, end): consonants after the last vowel ride along.
void flag_phrase(std::vector<PhonemeSegment>& segments, std::size_t begin, std::size_t end) {
  std::size_t last_vowel = end;
  std::size_t last_phoneme = end;
  for (std::size_t i = begin; i < end; ++i) {
    if (segments[i].kind != SegmentKind::Phoneme) continue;
    last_phoneme = i;
    if (segments[i].phone_class == PhoneClass::Vowel) last_vowel = i;
  }
  if (last_phoneme == end) return;  // no phonemes in this phrase
  const std::size_t from = (last_vowel != end) ? last_vowel : last_phoneme;
  for (std::size_t i = from; i < end; ++i)
    if (segments[i].kind == SegmentKind::Phoneme) segments[i].phrase_final = true;
}

}  // namespace

Utterance mark_phrase_final(Utterance utt) {
  for (auto& seg : utt.segments) seg.phrase_final = false;
  std::size_t phrase_start = 0;
  for (std::size_t i = 0; i < utt.segments.size(); ++i) {
    if (is_phrase_boundary(utt.segments[i])) {
      flag_phrase(utt.segments, phrase_start, i);
      phrase_start = i + 1;
    }
  }
  flag_phrase(utt.segments, phrase_start, utt.segments.size());
  return utt;
}

std::vector<std::size_t> prosodic_targets(const Utterance& utt) {
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < utt.segments.size(); ++i)
    if (utt.segments[i].kind == SegmentKind::Phoneme) indices.push_back(i);
  return indices;
}

std::string to_lab_text(const Utterance& utt) {
  std::ostringstream out;
  for (const auto& seg : utt.segments)
    out << seconds_to_htk(seg.start_s) << ' ' << seconds_to_htk(seg.end_s) << ' '
        << seg.label << '\n';
  return out.str();
}

std::string to_json_record(const Utterance& utt) {
  nlohmann::json rec;
  rec["id"] = utt.id;
  rec["sample_rate_hz"] = utt.sample_rate_hz;
  if (!utt.audio_path.empty()) rec["audio_path"] = utt.audio_path;
  auto segs = nlohmann::json::array();
  for (const auto& seg : utt.segments) {
    nlohmann::json s;
    s["label"] = seg.label;
    s["start_s"] = seg.start_s;
    s["end_s"] = seg.end_s;
    s["kind"] = kind_name(seg.kind);
    s["class"] = phone_class_name(seg.phone_class);
    s["final"] = seg.phrase_final;
    segs.push_back(std::move(s));
  }
  rec["segments"] = std::move(segs);
  return rec.dump();
}

Utterance utterance_from_json(const std::string& line) {
  nlohmann::json rec;
  try {
    rec = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine, std::string("bad utterance record: ") + e.what());
  }
  Utterance utt;
  utt.id = rec.at("id").get<std::string>();
  utt.sample_rate_hz = rec.at("sample_rate_hz").get<int>();
  if (rec.contains("audio_path")) utt.audio_path = rec["audio_path"].get<std::string>();
  for (const auto& s : rec.at("segments")) {
    PhonemeSegment seg;
    seg.label = s.at("label").get<std::string>();
    seg.start_s = s.at("start_s").get<double>();
    seg.end_s = s.at("end_s").get<double>();
    seg.kind = kind_from_name(s.at("kind").get<std::string>());
    seg.phone_class = phone_class_from_name(s.at("class").get<std::string>());
    seg.phrase_final = s.at("final").get<bool>();
    utt.segments.push_back(std::move(seg));
  }
  return utt;
}

}  // namespace prosody
