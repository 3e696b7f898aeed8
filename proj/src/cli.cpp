#include "prosody/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prosody/cluster.hpp"
#include "prosody/corpusgen.hpp"
#include "prosody/errors.hpp"
#include "prosody/features.hpp"
#include "prosody/ingest.hpp"
#include "prosody/molattn.hpp"
#include "prosody/notes.hpp"
#include "prosody/pitch.hpp"
#include "prosody/rng.hpp"
#include "prosody/util.hpp"
#include "prosody/wav.hpp"

namespace fs = std::filesystem;

namespace prosody::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

// Offset guardrails matching the listening-test grids; --force overrides.
constexpr int kSingleOffsetLimit = 8;
constexpr int kJointOffsetLimit = 2;

struct ExtractOptions {
  std::string corpus_dir;
  std::string out_dir;
  std::string phones_path;  // defaults to <corpus>/phones.txt
  bool dump_pitch = false;
  PitchConfig pitch;
};

struct ClusterOptions {
  std::string features_path;
  std::string out_dir;
  std::string f0_k = "12";
  std::string dur_k = "15";
  std::uint64_t seed = 42;
};

struct LabelOptions {
  std::string features_path;
  std::string f0_vocab_path;
  std::string dur_vocab_path;
  std::string out_dir;
};

struct ModifyOptions {
  std::string features_path;
  std::string out_dir;
  std::string f0_labels_path, f0_vocab_path;
  std::string dur_labels_path, dur_vocab_path;
  int f0_delta = 0, dur_delta = 0;
  bool have_f0_delta = false, have_dur_delta = false;
  bool force = false;
};

struct SweepOptions {
  std::string features_path;
  std::string vocab_path;
  std::string out_dir;
};

struct NotesOptions {
  std::string features_path;
  std::string out_dir;
};

struct AttnOptions {
  std::string out_dir;
  int components = 5;
  int enc_len = 30;
  int steps = 40;
  int query_dim = 8;
  int enc_dim = 8;
  int hidden = 16;
  std::uint64_t seed = 42;
  bool zero_layer = false;
  bool no_bias = false;
};

std::optional<int> parse_k_option(const std::string& text, const char* what) {
  if (text == "auto") return std::nullopt;
  const auto k = parse_int64(text);
  if (!k || *k < 2)
    throw Error(ErrorCode::BadArgument,
                std::string(what) + " must be an integer >= 2 or 'auto', got '" + text + "'");
  return static_cast<int>(*k);
}

std::vector<ProsodicFeature> load_features(const std::string& path) {
  return features_from_csv(read_text_file(path));
}

ClusterVocabulary load_vocab(const std::string& path, FeatureKind expected) {
  auto vocab = vocabulary_from_json(read_text_file(path));
  if (vocab.feature != expected)
    throw Error(ErrorCode::BadArgument,
                path + " holds a " + feature_kind_name(vocab.feature) + " vocabulary, expected " +
                    feature_kind_name(expected));
  return vocab;
}

// ---------------------------------------------------------------- extract

int cmd_extract(const ExtractOptions& opt) {
  const fs::path corpus(opt.corpus_dir);
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const fs::path phones =
      opt.phones_path.empty() ? corpus / "phones.txt" : fs::path(opt.phones_path);
  const PhoneClassTable table = PhoneClassTable::load(phones);

  std::set<std::string> lab_stems, wav_stems;
  for (const auto& entry : fs::directory_iterator(corpus)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".lab") lab_stems.insert(entry.path().stem().string());
    if (ext == ".wav") wav_stems.insert(entry.path().stem().string());
  }

  std::vector<std::string> stems;
  int warnings = 0;
  for (const auto& stem : lab_stems) {
    if (wav_stems.count(stem)) {
      stems.push_back(stem);
    } else {
      std::cerr << "warning: " << stem << ".lab has no matching .wav, skipped\n";
      ++warnings;
    }
  }
  for (const auto& stem : wav_stems) {
    if (!lab_stems.count(stem)) {
      std::cerr << "warning: " << stem << ".wav has no matching .lab, skipped\n";
      ++warnings;
    }
  }
  if (stems.empty())
    throw Error(ErrorCode::EmptyCorpus, "no paired .wav/.lab files in " + corpus.string());

  std::ostringstream features_csv;
  std::ostringstream utterances_jsonl;
  bool wrote_header = false;
  int phoneme_count = 0;
  int interpolated_count = 0;

  if (opt.dump_pitch) fs::create_directories(out / "pitch");

  for (const auto& stem : stems) {
    std::vector<ParseWarning> parse_warnings;
    Utterance utt = parse_label_file(read_text_file(corpus / (stem + ".lab")), table, stem,
                                     &parse_warnings);
    for (const auto& w : parse_warnings) {
      std::cerr << "warning: " << stem << ".lab line " << w.line_no << ": " << w.message << "\n";
      ++warnings;
    }
    utt = mark_phrase_final(std::move(utt));

    const WavData wav = read_wav_mono16(corpus / (stem + ".wav"));
    utt.audio_path = (corpus / (stem + ".wav")).string();
    utt.sample_rate_hz = wav.sample_rate_hz;
    if (!utt.segments.empty() &&
        utt.segments.back().end_s > wav.duration_s() + 0.001)
      throw Error(ErrorCode::BadArgument,
                  stem + ": alignment extends past the audio (" +
                      fmt_double(utt.segments.back().end_s) + " s > " +
                      fmt_double(wav.duration_s()) + " s)");

    const PitchTrack raw = extract_pitch_track(wav.samples, wav.sample_rate_hz, opt.pitch);
    const PitchTrack track = smooth_track(interpolate_unvoiced(raw));
    if (opt.dump_pitch)
      write_text_file(out / "pitch" / (stem + ".csv"), track_to_csv(track));

    const auto features = build_features(utt, track);
    phoneme_count += static_cast<int>(features.size());
    for (const auto& f : features) {
      const auto& seg = utt.segments[static_cast<std::size_t>(f.segment_index)];
      const bool touched_unvoiced =
          std::any_of(raw.frames.begin(), raw.frames.end(), [&](const PitchFrame& fr) {
            return fr.time_s >= seg.start_s && fr.time_s < seg.end_s && !fr.f0_hz;
          });
      if (touched_unvoiced) ++interpolated_count;
    }

    const std::string csv = features_to_csv(features);
    if (!wrote_header) {
      features_csv << csv;
      wrote_header = true;
    } else {
      features_csv << csv.substr(csv.find('\n') + 1);  // drop repeated header
    }
    utterances_jsonl << to_json_record(utt) << '\n';
  }

  write_text_file(out / "features.csv", features_csv.str());
  write_text_file(out / "utterances.jsonl", utterances_jsonl.str());

  std::cout << "utterances: " << stems.size() << "\n"
            << "phonemes: " << phoneme_count << "\n"
            << "unvoiced_interpolated_phonemes: " << interpolated_count << "\n"
            << "warnings: " << warnings << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- cluster

std::string curve_to_csv(const std::vector<std::pair<int, double>>& curve) {
  std::ostringstream out;
  out << "k,sse\n";
  for (const auto& [k, sse] : curve) out << k << ',' << fmt_double(sse) << '\n';
  return out.str();
}

int cmd_cluster(const ClusterOptions& opt) {
  const auto features = load_features(opt.features_path);
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const auto f0_vocab = build_f0_vocab(features, parse_k_option(opt.f0_k, "--f0-k"), opt.seed);
  const auto dur_vocab =
      build_duration_vocab(features, parse_k_option(opt.dur_k, "--dur-k"), opt.seed);

  write_text_file(out / "f0_vocab.json", vocabulary_to_json(f0_vocab));
  write_text_file(out / "duration_vocab.json", vocabulary_to_json(dur_vocab));
  write_text_file(out / "f0_sse.csv", curve_to_csv(f0_vocab.curve));
  write_text_file(out / "duration_sse.csv", curve_to_csv(dur_vocab.curve));

  std::cout << "f0_clusters: " << f0_vocab.groups.at(kGlobalGroup).size() << "\n"
            << "duration_groups: " << dur_vocab.groups.size() << "\n"
            << "duration_k: " << dur_vocab.requested_k << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ label

int cmd_label(const LabelOptions& opt) {
  if (opt.f0_vocab_path.empty() && opt.dur_vocab_path.empty())
    throw Error(ErrorCode::BadArgument, "need --f0-vocab and/or --dur-vocab");
  const auto features = load_features(opt.features_path);
  const auto grouped = group_by_utterance(features);
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const auto write_labels = [&](const ClusterVocabulary& vocab, const char* filename) {
    std::vector<LabelSequence> sequences;
    sequences.reserve(grouped.size());
    for (const auto& [id, feats] : grouped)
      sequences.push_back(assign_labels(feats, vocab, id));
    write_text_file(out / filename, label_sequences_to_text(sequences));
  };

  if (!opt.f0_vocab_path.empty())
    write_labels(load_vocab(opt.f0_vocab_path, FeatureKind::F0), "f0_labels.txt");
  if (!opt.dur_vocab_path.empty())
    write_labels(load_vocab(opt.dur_vocab_path, FeatureKind::Duration), "duration_labels.txt");
  return kExitOk;
}

// ----------------------------------------------------------------- modify

// Reattaches group keys to labels read from a file, so offsets know each
// label's group size.
std::vector<LabelSequence> rebuild_sequences(
    const std::vector<std::pair<std::string, std::vector<ProsodicFeature>>>& grouped,
    const std::vector<std::pair<std::string, std::vector<int>>>& parsed,
    const ClusterVocabulary& vocab) {
  std::map<std::string, const std::vector<ProsodicFeature>*> by_id;
  for (const auto& [id, feats] : grouped) by_id[id] = &feats;

  std::vector<LabelSequence> sequences;
  sequences.reserve(parsed.size());
  for (const auto& [id, labels] : parsed) {
    const auto it = by_id.find(id);
    if (it == by_id.end())
      throw Error(ErrorCode::BadArgument, "utterance '" + id + "' not present in features");
    const auto& feats = *it->second;
    if (labels.size() != feats.size())
      throw Error(ErrorCode::BadArgument,
                  "utterance '" + id + "' has " + std::to_string(labels.size()) +
                      " labels but " + std::to_string(feats.size()) + " target phonemes");
    LabelSequence seq;
    seq.utterance_id = id;
    seq.vocabulary_ref = vocab.ref();
    seq.labels = labels;
    seq.group_keys.reserve(feats.size());
    for (const auto& f : feats) {
      std::string key;
      resolve_group(vocab, f, &key);
      seq.group_keys.push_back(std::move(key));
    }
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

int cmd_modify(const ModifyOptions& opt) {
  if (!opt.have_f0_delta && !opt.have_dur_delta)
    throw Error(ErrorCode::BadArgument, "need --f0-delta and/or --dur-delta");
  const bool joint = opt.have_f0_delta && opt.have_dur_delta;
  const int limit = joint ? kJointOffsetLimit : kSingleOffsetLimit;
  if (!opt.force) {
    if (opt.have_f0_delta && std::abs(opt.f0_delta) > limit)
      throw Error(ErrorCode::BadArgument,
                  "--f0-delta outside [-" + std::to_string(limit) + ", +" +
                      std::to_string(limit) + "]; pass --force to override");
    if (opt.have_dur_delta && std::abs(opt.dur_delta) > limit)
      throw Error(ErrorCode::BadArgument,
                  "--dur-delta outside [-" + std::to_string(limit) + ", +" +
                      std::to_string(limit) + "]; pass --force to override");
  }

  const auto features = load_features(opt.features_path);
  const auto grouped = group_by_utterance(features);
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const auto apply = [&](const std::string& labels_path, const std::string& vocab_path,
                         FeatureKind kind, int delta, const char* filename) {
    if (labels_path.empty() || vocab_path.empty())
      throw Error(ErrorCode::BadArgument,
                  std::string("--") + (kind == FeatureKind::F0 ? "f0" : "dur") +
                      "-delta needs matching labels and vocab paths");
    const auto vocab = load_vocab(vocab_path, kind);
    const auto parsed = label_sequences_from_text(read_text_file(labels_path));
    auto sequences = rebuild_sequences(grouped, parsed, vocab);
    for (auto& seq : sequences) seq = offset_labels(seq, delta, vocab);
    write_text_file(out / filename, label_sequences_to_text(sequences));
  };

  if (opt.have_f0_delta)
    apply(opt.f0_labels_path, opt.f0_vocab_path, FeatureKind::F0, opt.f0_delta,
          "f0_labels.txt");
  if (opt.have_dur_delta)
    apply(opt.dur_labels_path, opt.dur_vocab_path, FeatureKind::Duration, opt.dur_delta,
          "duration_labels.txt");
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

int cmd_sweep(const SweepOptions& opt) {
  const auto features = load_features(opt.features_path);
  const auto grouped = group_by_utterance(features);
  const auto vocab = vocabulary_from_json(read_text_file(opt.vocab_path));
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  const int steps = static_cast<int>(vocab.max_group_size());
  // One file per swept cluster ID, every utterance on its own line.
  std::vector<std::ostringstream> files(static_cast<std::size_t>(steps));
  for (const auto& [id, feats] : grouped) {
    const auto sweeps = sweep_labels(feats, vocab, id);
    for (int c = 0; c < steps; ++c)
      files[static_cast<std::size_t>(c)] << label_sequences_to_text(
          std::span<const LabelSequence>(&sweeps[static_cast<std::size_t>(c)], 1));
  }
  for (int c = 0; c < steps; ++c) {
    char name[32];
    std::snprintf(name, sizeof(name), "sweep_%02d.txt", c);
    write_text_file(out / name, files[static_cast<std::size_t>(c)].str());
  }
  std::cout << "sweep_files: " << steps << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ notes

int cmd_notes(const NotesOptions& opt) {
  const auto features = load_features(opt.features_path);
  const auto vocab = build_note_vocab(features);
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  std::ostringstream sequences;
  for (const auto& [id, feats] : group_by_utterance(features))
    sequences << note_sequence_to_text(id, quantize_to_notes(feats, vocab));

  write_text_file(out / "note_vocab.txt", note_vocab_to_text(vocab));
  write_text_file(out / "note_labels.txt", sequences.str());
  std::cout << "notes: " << vocab.labels.size() << "\n"
            << "range: [" << vocab.h_min << ", " << vocab.h_max << "]\n";
  return kExitOk;
}

// ------------------------------------------------------------------- attn

int cmd_attn(const AttnOptions& opt) {
  if (opt.components < 1 || opt.enc_len < 1 || opt.steps < 1)
    throw Error(ErrorCode::BadArgument, "components, encoder length and steps must be positive");
  const fs::path out(opt.out_dir);
  fs::create_directories(out);

  Rng rng(opt.seed);
  const ParamLayer layer =
      opt.zero_layer ? ParamLayer::zeros(opt.components, opt.query_dim, opt.hidden)
                     : ParamLayer::random(opt.components, opt.query_dim, opt.hidden, rng, 0.3,
                                          !opt.no_bias);
  std::vector<Eigen::VectorXd> queries;
  queries.reserve(static_cast<std::size_t>(opt.steps));
  for (int i = 0; i < opt.steps; ++i) {
    Eigen::VectorXd q(opt.query_dim);
    for (int d = 0; d < opt.query_dim; ++d) q(d) = rng.normal();
    queries.push_back(std::move(q));
  }
  Eigen::MatrixXd enc(opt.enc_len, opt.enc_dim);
  for (int j = 0; j < opt.enc_len; ++j)
    for (int d = 0; d < opt.enc_dim; ++d) enc(j, d) = rng.normal();

  const DecodeResult result = simulate_decode(layer, queries, enc);

  bool monotone = true;
  Eigen::VectorXd prev_mu = Eigen::VectorXd::Zero(opt.components);
  for (const auto& state : result.states) {
    if (!((state.mu.array() > prev_mu.array()).all())) monotone = false;
    prev_mu = state.mu;
  }
  const Eigen::VectorXd row_masses = result.weights.a.rowwise().sum();

  write_text_file(out / "alignment.csv", alignment_to_csv(result.weights));
  std::ostringstream summary;
  summary << "steps: " << opt.steps << "\n"
          << "encoder_len: " << opt.enc_len << "\n"
          << "components: " << opt.components << "\n"
          << "monotone_mu: " << (monotone ? "yes" : "no") << "\n"
          << "min_row_mass: " << fmt_double(row_masses.minCoeff()) << "\n"
          << "max_row_mass: " << fmt_double(row_masses.maxCoeff()) << "\n";
  write_text_file(out / "attn_summary.txt", summary.str());
  std::cout << summary.str();
  return monotone ? kExitOk : kExitInternal;
}

// ------------------------------------------------------------------- main

// Fills option values from a JSON config for every option the command line
// left untouched. Config keys mirror the long option names.
class ConfigMerge {
 public:
  explicit ConfigMerge(const std::string& path) {
    if (path.empty()) return;
    try {
      config_ = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadArgument, std::string("bad config file: ") + e.what());
    }
  }

  template <typename T>
  void fill(const CLI::App* sub, const char* key, T& value) const {
    if (config_.is_null() || !config_.contains(key)) return;
    if (sub->get_option(std::string("--") + key)->count() > 0) return;  // flag wins
    try {
      value = config_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::BadArgument, std::string("config key '") + key + "' has the wrong type");
    }
  }

 private:
  nlohmann::json config_;
};

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{"phoneme-level prosody feature extraction, clustering and labeling"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default option values");

  ExtractOptions extract;
  auto* sub_extract =
      app.add_subcommand("extract", "extract per-phoneme prosodic features from a corpus");
  sub_extract->add_option("--corpus", extract.corpus_dir, "directory of paired .wav/.lab files")
      ->required();
  sub_extract->add_option("--out", extract.out_dir, "output directory")->required();
  sub_extract->add_option("--phones", extract.phones_path,
                          "phone class table (default: <corpus>/phones.txt)");
  sub_extract->add_flag("--dump-pitch", extract.dump_pitch, "write per-utterance pitch CSVs");
  sub_extract->add_option("--floor", extract.pitch.floor_hz, "pitch floor in Hz");
  sub_extract->add_option("--ceil", extract.pitch.ceil_hz, "pitch ceiling in Hz");
  sub_extract->add_option("--voicing-threshold", extract.pitch.voicing_threshold,
                          "voicing decision threshold");
  sub_extract->add_option("--frame-len", extract.pitch.frame_len_s, "analysis frame in seconds");
  sub_extract->add_option("--hop", extract.pitch.hop_s, "frame hop in seconds");
  sub_extract->add_option("--octave-cost", extract.pitch.octave_cost,
                          "per-octave preference for higher pitch candidates");

  ClusterOptions cluster;
  auto* sub_cluster = app.add_subcommand("cluster", "build prosodic label vocabularies");
  sub_cluster->add_option("--features", cluster.features_path, "features CSV")->required();
  sub_cluster->add_option("--out", cluster.out_dir, "output directory")->required();
  sub_cluster->add_option("--f0-k", cluster.f0_k, "F0 cluster count or 'auto'");
  sub_cluster->add_option("--dur-k", cluster.dur_k, "duration cluster count or 'auto'");
  sub_cluster->add_option("--seed", cluster.seed, "clustering seed");

  LabelOptions label;
  auto* sub_label = app.add_subcommand("label", "assign nearest-centroid labels");
  sub_label->add_option("--features", label.features_path, "features CSV")->required();
  sub_label->add_option("--f0-vocab", label.f0_vocab_path, "F0 vocabulary JSON");
  sub_label->add_option("--dur-vocab", label.dur_vocab_path, "duration vocabulary JSON");
  sub_label->add_option("--out", label.out_dir, "output directory")->required();

  ModifyOptions modify;
  auto* sub_modify = app.add_subcommand("modify", "offset labels with penultimate-ID clamping");
  sub_modify->add_option("--features", modify.features_path, "features CSV")->required();
  sub_modify->add_option("--out", modify.out_dir, "output directory")->required();
  sub_modify->add_option("--f0-labels", modify.f0_labels_path, "F0 label file");
  sub_modify->add_option("--f0-vocab", modify.f0_vocab_path, "F0 vocabulary JSON");
  auto* f0_delta_opt = sub_modify->add_option("--f0-delta", modify.f0_delta, "F0 label offset");
  sub_modify->add_option("--dur-labels", modify.dur_labels_path, "duration label file");
  sub_modify->add_option("--dur-vocab", modify.dur_vocab_path, "duration vocabulary JSON");
  auto* dur_delta_opt =
      sub_modify->add_option("--dur-delta", modify.dur_delta, "duration label offset");
  sub_modify->add_flag("--force", modify.force, "allow offsets outside the default grid");

  SweepOptions sweep;
  auto* sub_sweep = app.add_subcommand("sweep", "emit one all-c label file per cluster ID");
  sub_sweep->add_option("--features", sweep.features_path, "features CSV")->required();
  sub_sweep->add_option("--vocab", sweep.vocab_path, "vocabulary JSON")->required();
  sub_sweep->add_option("--out", sweep.out_dir, "output directory")->required();

  NotesOptions notes;
  auto* sub_notes = app.add_subcommand("notes", "quantize F0 to musical notes");
  sub_notes->add_option("--features", notes.features_path, "features CSV")->required();
  sub_notes->add_option("--out", notes.out_dir, "output directory")->required();

  AttnOptions attn;
  auto* sub_attn = app.add_subcommand("attn", "run the attention kernel and dump the alignment");
  sub_attn->add_option("--out", attn.out_dir, "output directory")->required();
  sub_attn->add_option("--components", attn.components, "mixture components");
  sub_attn->add_option("--enc-len", attn.enc_len, "encoder positions");
  sub_attn->add_option("--steps", attn.steps, "decoder steps");
  sub_attn->add_option("--query-dim", attn.query_dim, "query dimension");
  sub_attn->add_option("--enc-dim", attn.enc_dim, "encoder representation dimension");
  sub_attn->add_option("--hidden", attn.hidden, "hidden layer width");
  sub_attn->add_option("--seed", attn.seed, "seed for the layer, queries and encoder");
  sub_attn->add_flag("--zero-layer", attn.zero_layer, "all-zero parameter layer");
  sub_attn->add_flag("--no-bias", attn.no_bias, "random layer without bias terms");

  CorpusSpec corpus_spec;
  std::string corpus_out;
  auto* sub_mkcorpus =
      app.add_subcommand("mkcorpus", "generate the synthetic demo corpus");
  sub_mkcorpus->add_option("--out", corpus_out, "corpus directory")->required();
  sub_mkcorpus->add_option("--utterances", corpus_spec.utterances, "utterance count");
  sub_mkcorpus->add_option("--seed", corpus_spec.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  modify.have_f0_delta = f0_delta_opt->count() > 0;
  modify.have_dur_delta = dur_delta_opt->count() > 0;

  try {
    const ConfigMerge config(config_path);
    config.fill(sub_extract, "floor", extract.pitch.floor_hz);
    config.fill(sub_extract, "ceil", extract.pitch.ceil_hz);
    config.fill(sub_extract, "voicing-threshold", extract.pitch.voicing_threshold);
    config.fill(sub_extract, "frame-len", extract.pitch.frame_len_s);
    config.fill(sub_extract, "hop", extract.pitch.hop_s);
    config.fill(sub_extract, "octave-cost", extract.pitch.octave_cost);
    config.fill(sub_cluster, "f0-k", cluster.f0_k);
    config.fill(sub_cluster, "dur-k", cluster.dur_k);
    config.fill(sub_cluster, "seed", cluster.seed);
    config.fill(sub_attn, "seed", attn.seed);
    config.fill(sub_attn, "components", attn.components);
    config.fill(sub_attn, "enc-len", attn.enc_len);
    config.fill(sub_attn, "steps", attn.steps);
    if (app.got_subcommand(sub_extract)) return cmd_extract(extract);
    if (app.got_subcommand(sub_cluster)) return cmd_cluster(cluster);
    if (app.got_subcommand(sub_label)) return cmd_label(label);
    if (app.got_subcommand(sub_modify)) return cmd_modify(modify);
    if (app.got_subcommand(sub_sweep)) return cmd_sweep(sweep);
    if (app.got_subcommand(sub_notes)) return cmd_notes(notes);
    if (app.got_subcommand(sub_attn)) return cmd_attn(attn);
    if (app.got_subcommand(sub_mkcorpus)) {
      synthesize_mini_corpus(corpus_out, corpus_spec);
      std::cout << "utterances: " << corpus_spec.utterances << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInput;
}

}  // namespace prosody::cli
