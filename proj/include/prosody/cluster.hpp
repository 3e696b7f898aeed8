#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prosody/features.hpp"

namespace prosody {

struct KMeansResult {
  std::vector<double> centroids;  // converged means, one per non-empty cluster
  std::vector<int> assignments;   // per-point index into centroids
  double sse = 0.0;
  int iterations = 0;
};

// Lloyd's algorithm on scalars with k-means++ initialization. Deterministic
// for a fixed seed. Empty clusters are re-seeded to the point farthest from
// its current centroid; when the data has fewer distinct values than k the
// result carries one cluster per distinct value instead.
KMeansResult kmeans(std::span<const double> points, int k, std::uint64_t seed,
                    int max_iter = 300);

// Best of `restarts` seeded runs (lowest SSE; ties keep the earliest run).
KMeansResult kmeans_best_of(std::span<const double> points, int k,
                            std::uint64_t seed, int restarts = 10,
                            int max_iter = 300);

// Picks k in [k_min, k_max] at the sharpest bend of the SSE-vs-k curve,
// measured by the discrete second difference. Flat curves (no bend above
// a tolerance of 1e-9 times the one-cluster SSE) fall back to k_min; ties
// resolve to the smaller k.
int elbow_select(std::span<const double> points, int k_min, int k_max,
                 std::uint64_t seed);

// The SSE-vs-k curve the elbow decision is made from.
std::vector<std::pair<int, double>> sse_curve(std::span<const double> points,
                                              int k_min, int k_max,
                                              std::uint64_t seed);

enum class FeatureKind { F0, Duration };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(std::string_view name);

inline constexpr const char* kGlobalGroup = "global";
inline constexpr const char* kPooledGroup = "pooled";
inline constexpr int kDefaultF0Clusters = 12;
inline constexpr int kDefaultDurationClusters = 15;

std::string duration_group_key(std::string_view phoneme, bool phrase_final);

// Ordered centroid lists per group. F0 uses one global group; duration is
// grouped by (phoneme, phrase_final) with a pooled group as the last-resort
// fallback for symbols unseen at build time. Cluster IDs are positions in
// the ascending centroid list, so low ID means low value.
struct ClusterVocabulary {
  FeatureKind feature = FeatureKind::F0;
  std::map<std::string, std::vector<double>> groups;
  std::uint64_t seed = 0;
  int requested_k = 0;
  bool auto_k = false;
  std::vector<std::pair<int, double>> curve;  // (k, sse) evaluated at build

  std::string ref() const;
  std::size_t max_group_size() const;
};

// Group resolution with the duration fallback chain:
// (phoneme, final) -> (phoneme, !final) -> pooled.
const std::vector<double>& resolve_group(const ClusterVocabulary& vocab,
                                         const ProsodicFeature& feature,
                                         std::string* key_out = nullptr);

// Builds the F0 vocabulary over all mean-log-F0 values. k defaults to 12;
// pass nullopt to select it with the elbow rule.
ClusterVocabulary build_f0_vocab(std::span<const ProsodicFeature> features,
                                 std::optional<int> k, std::uint64_t seed);

// Builds per-(phoneme, final) duration vocabularies plus the pooled group.
// k defaults to 15; groups with fewer distinct durations shrink to fit.
// Pass nullopt to pick k once, on the pooled durations, with the elbow rule.
ClusterVocabulary build_duration_vocab(std::span<const ProsodicFeature> features,
                                       std::optional<int> k, std::uint64_t seed);

struct LabelSequence {
  std::string utterance_id;
  std::string vocabulary_ref;
  std::vector<int> labels;
  std::vector<std::string> group_keys;  // parallel to labels
};

// Nearest-centroid assignment; ties go to the lower ID.
LabelSequence assign_labels(std::span<const ProsodicFeature> features,
                            const ClusterVocabulary& vocab,
                            const std::string& utterance_id = {});

// Shifts every label by delta, clamped to the penultimate IDs [1, size-2]
// of its group. Groups of size <= 2 and a zero delta leave labels alone.
LabelSequence offset_labels(const LabelSequence& seq, int delta,
                            const ClusterVocabulary& vocab);

// One sequence per cluster ID c (ascending): every label becomes c, capped
// at each group's highest ID.
std::vector<LabelSequence> sweep_labels(std::span<const ProsodicFeature> features,
                                        const ClusterVocabulary& vocab,
                                        const std::string& utterance_id = {});

std::string vocabulary_to_json(const ClusterVocabulary& vocab);
ClusterVocabulary vocabulary_from_json(const std::string& text);

// Label file: one utterance per line, `<utt_id> <label> <label> ...`.
// `-` tokens are permitted and skipped when reading.
std::string label_sequences_to_text(std::span<const LabelSequence> sequences);
std::vector<std::pair<std::string, std::vector<int>>>
label_sequences_from_text(const std::string& text);

}  // namespace prosody
