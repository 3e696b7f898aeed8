#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prosody/cli.hpp"
#include "prosody/cluster.hpp"
#include "prosody/corpusgen.hpp"
#include "prosody/features.hpp"
#include "prosody/util.hpp"
#include "prosody/wav.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace prosody;
using testsupport::TempDir;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "prosody");
  return cli::run(args);
}

// Reads every regular file under `dir` into a map keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), dir).string()] = read_text_file(entry.path());
  }
  return files;
}

void run_pipeline(const fs::path& corpus, const fs::path& out, const std::string& seed) {
  REQUIRE(run_cli({"extract", "--corpus", corpus.string(), "--out", (out / "feat").string()}) == 0);
  const auto features = (out / "feat" / "features.csv").string();
  REQUIRE(run_cli({"cluster", "--features", features, "--out", (out / "vocab").string(),
                   "--f0-k", "6", "--dur-k", "4", "--seed", seed}) == 0);
  REQUIRE(run_cli({"label", "--features", features,
                   "--f0-vocab", (out / "vocab" / "f0_vocab.json").string(),
                   "--dur-vocab", (out / "vocab" / "duration_vocab.json").string(),
                   "--out", (out / "labels").string()}) == 0);
  REQUIRE(run_cli({"modify", "--features", features,
                   "--f0-labels", (out / "labels" / "f0_labels.txt").string(),
                   "--f0-vocab", (out / "vocab" / "f0_vocab.json").string(),
                   "--f0-delta", "2", "--out", (out / "mod").string()}) == 0);
  REQUIRE(run_cli({"sweep", "--features", features,
                   "--vocab", (out / "vocab" / "f0_vocab.json").string(),
                   "--out", (out / "sweep").string()}) == 0);
  REQUIRE(run_cli({"notes", "--features", features, "--out", (out / "notes").string()}) == 0);
  REQUIRE(run_cli({"attn", "--out", (out / "attn").string(), "--steps", "20",
                   "--enc-len", "16", "--seed", seed}) == 0);
}

}  // namespace

TEST_CASE("the full pipeline runs end to end and is byte-deterministic") {
  TempDir corpus_dir("corpus");
  synthesize_mini_corpus(corpus_dir.path(), {.utterances = 6, .seed = 11});

  TempDir out_a("run_a");
  TempDir out_b("run_b");
  run_pipeline(corpus_dir.path(), out_a.path(), "42");
  run_pipeline(corpus_dir.path(), out_b.path(), "42");

  const auto a = snapshot(out_a.path());
  const auto b = snapshot(out_b.path());
  REQUIRE(!a.empty());
  REQUIRE(a.size() == b.size());
  for (const auto& [name, content] : a) {
    const std::string& file_name = name;  // bindings cannot cross lambda captures
    REQUIRE(b.count(file_name) == 1);
    CHECK_MESSAGE(b.at(file_name) == content, "file differs between runs: ", file_name);
  }

  // Schemas parse back.
  const auto features = features_from_csv(read_text_file(out_a.path() / "feat" / "features.csv"));
  CHECK(!features.empty());
  const auto vocab =
      vocabulary_from_json(read_text_file(out_a.path() / "vocab" / "f0_vocab.json"));
  CHECK(vocab.groups.at(kGlobalGroup).size() == 6);
  const auto labels =
      label_sequences_from_text(read_text_file(out_a.path() / "labels" / "f0_labels.txt"));
  CHECK(labels.size() == 6);

  // Sweep emitted one file per cluster.
  int sweep_files = 0;
  for (const auto& entry : fs::directory_iterator(out_a.path() / "sweep")) {
    static_cast<void>(entry);
    ++sweep_files;
  }
  CHECK(sweep_files == 6);

  // Duration vocabularies sweep too, capped per group.
  REQUIRE(run_cli({"sweep", "--features", (out_a.path() / "feat" / "features.csv").string(),
                   "--vocab", (out_a.path() / "vocab" / "duration_vocab.json").string(),
                   "--out", (out_a.path() / "dur_sweep").string()}) == 0);
  const auto dur_vocab =
      vocabulary_from_json(read_text_file(out_a.path() / "vocab" / "duration_vocab.json"));
  int dur_sweep_files = 0;
  for (const auto& entry : fs::directory_iterator(out_a.path() / "dur_sweep")) {
    static_cast<void>(entry);
    ++dur_sweep_files;
  }
  CHECK(dur_sweep_files == static_cast<int>(dur_vocab.max_group_size()));
}

TEST_CASE("labels line up with target counts and respect vocabulary sizes") {
  TempDir corpus_dir("labelcheck");
  synthesize_mini_corpus(corpus_dir.path(), {.utterances = 4, .seed = 3});
  TempDir out("labelcheck_out");
  run_pipeline(corpus_dir.path(), out.path(), "7");

  const auto features =
      features_from_csv(read_text_file(out.path() / "feat" / "features.csv"));
  const auto grouped = group_by_utterance(features);
  const auto labels =
      label_sequences_from_text(read_text_file(out.path() / "labels" / "duration_labels.txt"));
  const auto vocab =
      vocabulary_from_json(read_text_file(out.path() / "vocab" / "duration_vocab.json"));
  REQUIRE(labels.size() == grouped.size());
  for (std::size_t u = 0; u < labels.size(); ++u) {
    CHECK(labels[u].first == grouped[u].first);
    REQUIRE(labels[u].second.size() == grouped[u].second.size());
    for (std::size_t i = 0; i < labels[u].second.size(); ++i) {
      const auto& group = resolve_group(vocab, grouped[u].second[i]);
      CHECK(labels[u].second[i] < static_cast<int>(group.size()));
    }
  }
}

TEST_CASE("unpaired files are skipped with a warning, not an error") {
  TempDir corpus_dir("unpaired");
  synthesize_mini_corpus(corpus_dir.path(), {.utterances = 2, .seed = 5});
  write_text_file(corpus_dir.path() / "orphan.lab", "0 1000000 a\n");
  const std::vector<double> tone(4800, 0.0);
  write_wav_mono16(corpus_dir.path() / "widow.wav", tone, 24000);

  TempDir out("unpaired_out");
  CHECK(run_cli({"extract", "--corpus", corpus_dir.path().string(),
                 "--out", out.path().string(), "--dump-pitch"}) == 0);
  CHECK(fs::exists(out.path() / "features.csv"));
  CHECK(fs::exists(out.path() / "pitch" / "utt000.csv"));
  CHECK(fs::exists(out.path() / "pitch" / "utt001.csv"));
  CHECK_FALSE(fs::exists(out.path() / "pitch" / "orphan.csv"));
}

TEST_CASE("an empty corpus directory exits with the input-error code") {
  TempDir corpus_dir("empty");
  write_text_file(corpus_dir.path() / "phones.txt", "a phoneme vowel\n");
  TempDir out("empty_out");
  CHECK(run_cli({"extract", "--corpus", corpus_dir.path().string(),
                 "--out", out.path().string()}) == 2);
}

TEST_CASE("offsets outside the grid need --force") {
  TempDir corpus_dir("force");
  synthesize_mini_corpus(corpus_dir.path(), {.utterances = 3, .seed = 9});
  TempDir out("force_out");
  run_pipeline(corpus_dir.path(), out.path(), "1");

  const auto features = (out.path() / "feat" / "features.csv").string();
  const auto vocab = (out.path() / "vocab" / "f0_vocab.json").string();
  const auto labels = (out.path() / "labels" / "f0_labels.txt").string();

  CHECK(run_cli({"modify", "--features", features, "--f0-labels", labels,
                 "--f0-vocab", vocab, "--f0-delta", "9",
                 "--out", (out.path() / "over").string()}) == 2);
  CHECK(run_cli({"modify", "--features", features, "--f0-labels", labels,
                 "--f0-vocab", vocab, "--f0-delta", "9", "--force",
                 "--out", (out.path() / "over").string()}) == 0);

  // Joint modification tightens the grid to +-2.
  const auto dur_vocab = (out.path() / "vocab" / "duration_vocab.json").string();
  const auto dur_labels = (out.path() / "labels" / "duration_labels.txt").string();
  CHECK(run_cli({"modify", "--features", features, "--f0-labels", labels,
                 "--f0-vocab", vocab, "--f0-delta", "3",
                 "--dur-labels", dur_labels, "--dur-vocab", dur_vocab,
                 "--dur-delta", "1", "--out", (out.path() / "joint").string()}) == 2);
  CHECK(run_cli({"modify", "--features", features, "--f0-labels", labels,
                 "--f0-vocab", vocab, "--f0-delta", "2",
                 "--dur-labels", dur_labels, "--dur-vocab", dur_vocab,
                 "--dur-delta", "-2", "--out", (out.path() / "joint").string()}) == 0);
}

TEST_CASE("config file fills defaults but explicit flags win") {
  TempDir corpus_dir("config");
  synthesize_mini_corpus(corpus_dir.path(), {.utterances = 4, .seed = 13});
  TempDir out("config_out");

  REQUIRE(run_cli({"extract", "--corpus", corpus_dir.path().string(),
                   "--out", (out.path() / "feat").string()}) == 0);
  const auto features = (out.path() / "feat" / "features.csv").string();

  write_text_file(out.path() / "config.json", "{\"f0-k\": \"3\", \"seed\": 5}\n");
  REQUIRE(run_cli({"--config", (out.path() / "config.json").string(),
                   "cluster", "--features", features,
                   "--out", (out.path() / "v1").string(), "--dur-k", "2"}) == 0);
  const auto v1 = vocabulary_from_json(read_text_file(out.path() / "v1" / "f0_vocab.json"));
  CHECK(v1.groups.at(kGlobalGroup).size() == 3);
  CHECK(v1.seed == 5);

  REQUIRE(run_cli({"--config", (out.path() / "config.json").string(),
                   "cluster", "--features", features, "--f0-k", "4",
                   "--out", (out.path() / "v2").string(), "--dur-k", "2"}) == 0);
  const auto v2 = vocabulary_from_json(read_text_file(out.path() / "v2" / "f0_vocab.json"));
  CHECK(v2.groups.at(kGlobalGroup).size() == 4);
}

TEST_CASE("attn subcommand writes a diagonal alignment for the zero layer") {
  TempDir out("attn_out");
  REQUIRE(run_cli({"attn", "--out", out.path().string(), "--steps", "10",
                   "--enc-len", "12", "--zero-layer"}) == 0);
  const auto csv = read_text_file(out.path() / "alignment.csv");
  const auto rows = split_on(csv, '\n');
  REQUIRE(rows.size() >= 10);
  for (int i = 0; i < 10; ++i) {
    const auto cells = split_on(rows[static_cast<std::size_t>(i)], ',');
    REQUIRE(cells.size() == 12);
    int argmax = 0;
    double best = -1.0;
    for (int j = 0; j < 12; ++j) {
      const double v = *parse_double(cells[static_cast<std::size_t>(j)]);
      if (v > best) {
        best = v;
        argmax = j;
      }
    }
    CHECK(argmax == i);
  }
  const auto summary = read_text_file(out.path() / "attn_summary.txt");
  CHECK(summary.find("monotone_mu: yes") != std::string::npos);
}

TEST_CASE("wav files round-trip through the reader") {
  TempDir dir("wav");
  std::vector<double> samples;
  for (int i = 0; i < 2400; ++i)
    samples.push_back(0.7 * std::sin(testsupport::kTwoPi * 220.0 * i / 24000.0));
  write_wav_mono16(dir.path() / "t.wav", samples, 24000);
  const auto wav = read_wav_mono16(dir.path() / "t.wav");
  CHECK(wav.sample_rate_hz == 24000);
  REQUIRE(wav.samples.size() == samples.size());
  // Quantization bound: rounding half-step plus the 32767/32768 scale skew.
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(std::abs(wav.samples[i] - samples[i]) <= 1.5 / 32768.0);
}
