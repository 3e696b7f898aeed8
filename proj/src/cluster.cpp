#include "prosody/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "prosody/errors.hpp"
#include "prosody/rng.hpp"
#include "prosody/util.hpp"

namespace prosody {

namespace {

double sq(double v) { return v * v; }

int nearest_centroid(double x, std::span<const double> centroids) {
  int best = 0;
  double best_d2 = sq(x - centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    const double d2 = sq(x - centroids[static_cast<std::size_t>(c)]);
    if (d2 < best_d2) {  // strict: ties keep the lower index
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

double sse_of(std::span<const double> points, const std::vector<double>& centroids,
              const std::vector<int>& assignments) {
  double sse = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    sse += sq(points[i] - centroids[static_cast<std::size_t>(assignments[i])]);
  return sse;
}

std::vector<double> kmeanspp_init(std::span<const double> points, int k, Rng& rng) {
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(points[rng.index(points.size())]);
  std::vector<double> d2(points.size());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = sq(points[i] - centroids[0]);
      for (std::size_t j = 1; j < centroids.size(); ++j)
        best = std::min(best, sq(points[i] - centroids[j]));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(points.size());  // all remaining distances zero
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(std::span<const double> points, int k, std::uint64_t seed,
                    int max_iter) {
  if (k < 1) throw Error(ErrorCode::BadArgument, "k must be at least 1");
  if (max_iter < 1) throw Error(ErrorCode::BadArgument, "max_iter must be at least 1");
  const int n = static_cast<int>(points.size());
  if (n < k)
    throw Error(ErrorCode::TooFewPoints,
                std::to_string(n) + " points cannot fill " + std::to_string(k) + " clusters");

  const std::set<double> distinct(points.begin(), points.end());
  const int k_eff = std::min<int>(k, static_cast<int>(distinct.size()));

  Rng rng(seed);
  std::vector<double> centroids = kmeanspp_init(points, k_eff, rng);
  std::vector<int> assignments(points.size(), -1);
  std::vector<int> counts(centroids.size());

  double prev_sse = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::vector<int> next(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      next[i] = nearest_centroid(points[i], centroids);

    // Re-seed empty clusters to the point farthest from its centroid.
    std::fill(counts.begin(), counts.end(), 0);
    for (const int a : next) ++counts[static_cast<std::size_t>(a)];
    for (int c = 0; c < static_cast<int>(centroids.size()); ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      int far_i = -1;
      double far_d2 = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (counts[static_cast<std::size_t>(next[i])] <= 1) continue;  // keep donors non-empty
        const double d2 = sq(points[i] - centroids[static_cast<std::size_t>(next[i])]);
        if (d2 > far_d2) {
          far_d2 = d2;
          far_i = static_cast<int>(i);
        }
      }
      if (far_i < 0) continue;
      --counts[static_cast<std::size_t>(next[static_cast<std::size_t>(far_i)])];
      next[static_cast<std::size_t>(far_i)] = c;
      counts[static_cast<std::size_t>(c)] = 1;
      centroids[static_cast<std::size_t>(c)] = points[static_cast<std::size_t>(far_i)];
    }

    if (next == assignments) break;
    assignments = std::move(next);

    for (int c = 0; c < static_cast<int>(centroids.size()); ++c) {
      double sum = 0.0;
      int cnt = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (assignments[i] != c) continue;
        sum += points[i];
        ++cnt;
      }
      if (cnt > 0) centroids[static_cast<std::size_t>(c)] = sum / cnt;
    }

    const double sse = sse_of(points, centroids, assignments);
    if (sse > prev_sse + 1e-9 * std::max(1.0, prev_sse))
      throw std::logic_error("kmeans: SSE increased across an iteration");
    prev_sse = sse;
  }

  // Drop clusters that stayed empty (possible only with duplicate-heavy data).
  std::fill(counts.begin(), counts.end(), 0);
  for (const int a : assignments) ++counts[static_cast<std::size_t>(a)];
  KMeansResult result;
  std::vector<int> remap(centroids.size(), -1);
  for (int c = 0; c < static_cast<int>(centroids.size()); ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) continue;
    remap[static_cast<std::size_t>(c)] = static_cast<int>(result.centroids.size());
    result.centroids.push_back(centroids[static_cast<std::size_t>(c)]);
  }
  result.assignments.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    result.assignments[i] = remap[static_cast<std::size_t>(assignments[i])];
  result.sse = sse_of(points, result.centroids, result.assignments);
  result.iterations = iter;
  return result;
}

KMeansResult kmeans_best_of(std::span<const double> points, int k,
                            std::uint64_t seed, int restarts, int max_iter) {
  KMeansResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    KMeansResult run = kmeans(points, k, seed + static_cast<std::uint64_t>(r), max_iter);
    if (!have || run.sse < best.sse) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

std::vector<std::pair<int, double>> sse_curve(std::span<const double> points,
                                              int k_min, int k_max,
                                              std::uint64_t seed) {
  std::vector<std::pair<int, double>> curve;
  for (int k = k_min; k <= k_max; ++k)
    curve.emplace_back(k, kmeans_best_of(points, k, seed).sse);
  return curve;
}

int elbow_select(std::span<const double> points, int k_min, int k_max,
                 std::uint64_t seed) {
  if (k_min < 1) throw Error(ErrorCode::BadArgument, "k_min must be at least 1");
  if (k_max - k_min < 2)
    throw Error(ErrorCode::RangeTooNarrow,
                "need at least three k values for a second difference");
  if (k_max > static_cast<int>(points.size()))
    throw Error(ErrorCode::TooFewPoints, "k_max exceeds the number of points");

  const auto curve = sse_curve(points, k_min, k_max, seed);

  // Tolerance anchored at the one-cluster SSE (total squared deviation).
  double mean = 0.0;
  for (const double p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double sse1 = 0.0;
  for (const double p : points) sse1 += sq(p - mean);
  const double tol = 1e-9 * sse1;

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double d2 = curve[i - 1].second - 2.0 * curve[i].second + curve[i + 1].second;
    best = std::max(best, d2);
  }
  if (best <= tol) return k_min;  // no bend anywhere: the curve is flat

  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double d2 = curve[i - 1].second - 2.0 * curve[i].second + curve[i + 1].second;
    if (d2 >= best - tol) return curve[i].first;  // smallest k within tolerance
  }
  return k_min;  // unreachable
}

const char* feature_kind_name(FeatureKind kind) {
  return kind == FeatureKind::F0 ? "f0" : "duration";
}

FeatureKind feature_kind_from_name(std::string_view name) {
  if (name == "f0") return FeatureKind::F0;
  if (name == "duration") return FeatureKind::Duration;
  throw Error(ErrorCode::BadArgument, "unknown feature kind '" + std::string(name) + "'");
}

std::string duration_group_key(std::string_view phoneme, bool phrase_final) {
  return std::string(phoneme) + (phrase_final ? "|final" : "|nonfinal");
}

std::string ClusterVocabulary::ref() const {
  std::ostringstream out;
  out << feature_kind_name(feature) << "/k=" << requested_k << "/seed=" << seed;
  return out.str();
}

std::size_t ClusterVocabulary::max_group_size() const {
  std::size_t largest = 0;
  for (const auto& [key, centroids] : groups) largest = std::max(largest, centroids.size());
  return largest;
}

const std::vector<double>& resolve_group(const ClusterVocabulary& vocab,
                                         const ProsodicFeature& feature,
                                         std::string* key_out) {
  const auto found = [&](const std::string& key) -> const std::vector<double>* {
    auto it = vocab.groups.find(key);
    return (it != vocab.groups.end() && !it->second.empty()) ? &it->second : nullptr;
  };

  if (vocab.feature == FeatureKind::F0) {
    if (const auto* g = found(kGlobalGroup)) {
      if (key_out) *key_out = kGlobalGroup;
      return *g;
    }
    throw Error(ErrorCode::BadArgument, "F0 vocabulary has no global group");
  }

  for (const auto& key : {duration_group_key(feature.phoneme, feature.phrase_final),
                          duration_group_key(feature.phoneme, !feature.phrase_final),
                          std::string(kPooledGroup)}) {
    if (const auto* g = found(key)) {
      if (key_out) *key_out = key;
      return *g;
    }
  }
  throw Error(ErrorCode::BadArgument, "duration vocabulary has no pooled group");
}

namespace {

std::vector<double> sorted_centroids(const KMeansResult& result) {
  std::vector<double> centroids = result.centroids;
  std::sort(centroids.begin(), centroids.end());
  return centroids;
}

int distinct_count(std::span<const double> values) {
  const std::set<double> s(values.begin(), values.end());
  return static_cast<int>(s.size());
}

// Elbow range for auto-k: wide enough to see the bend, bounded by the data.
std::pair<int, int> auto_k_range(std::size_t n) {
  return {2, std::min<int>(20, static_cast<int>(n))};
}

}  // namespace

ClusterVocabulary build_f0_vocab(std::span<const ProsodicFeature> features,
                                 std::optional<int> k, std::uint64_t seed) {
  if (features.empty())
    throw Error(ErrorCode::TooFewPoints, "no features to cluster");
  std::vector<double> values;
  values.reserve(features.size());
  for (const auto& f : features) values.push_back(f.mean_log_f0);

  ClusterVocabulary vocab;
  vocab.feature = FeatureKind::F0;
  vocab.seed = seed;
  vocab.auto_k = !k.has_value();

  int chosen = k.value_or(kDefaultF0Clusters);
  if (vocab.auto_k) {
    const auto [lo, hi] = auto_k_range(values.size());
    if (hi - lo >= 2) {
      chosen = elbow_select(values, lo, hi, seed);
      vocab.curve = sse_curve(values, lo, hi, seed);
    } else {
      chosen = std::min<int>(kDefaultF0Clusters, static_cast<int>(values.size()));
    }
  }
  vocab.requested_k = chosen;

  const auto result = kmeans_best_of(values, chosen, seed);
  vocab.groups[kGlobalGroup] = sorted_centroids(result);
  if (vocab.curve.empty()) vocab.curve.emplace_back(chosen, result.sse);
  return vocab;
}

ClusterVocabulary build_duration_vocab(std::span<const ProsodicFeature> features,
                                       std::optional<int> k, std::uint64_t seed) {
  if (features.empty())
    throw Error(ErrorCode::TooFewPoints, "no features to cluster");

  std::vector<double> pooled;
  pooled.reserve(features.size());
  for (const auto& f : features) pooled.push_back(f.duration_s);

  ClusterVocabulary vocab;
  vocab.feature = FeatureKind::Duration;
  vocab.seed = seed;
  vocab.auto_k = !k.has_value();

  int chosen = k.value_or(kDefaultDurationClusters);
  if (vocab.auto_k) {
    const auto [lo, hi] = auto_k_range(pooled.size());
    if (hi - lo >= 2) {
      chosen = elbow_select(pooled, lo, hi, seed);
      vocab.curve = sse_curve(pooled, lo, hi, seed);
    } else {
      chosen = std::min<int>(kDefaultDurationClusters, static_cast<int>(pooled.size()));
    }
  }
  vocab.requested_k = chosen;

  std::map<std::string, std::vector<double>> values_by_group;
  for (const auto& f : features)
    values_by_group[duration_group_key(f.phoneme, f.phrase_final)].push_back(f.duration_s);

  for (const auto& [key, values] : values_by_group) {
    const int group_k = std::min(chosen, distinct_count(values));
    vocab.groups[key] = sorted_centroids(kmeans_best_of(values, group_k, seed));
  }

  const int pooled_k = std::min(chosen, distinct_count(pooled));
  const auto pooled_result = kmeans_best_of(pooled, pooled_k, seed);
  vocab.groups[kPooledGroup] = sorted_centroids(pooled_result);
  if (vocab.curve.empty()) vocab.curve.emplace_back(chosen, pooled_result.sse);
  return vocab;
}

LabelSequence assign_labels(std::span<const ProsodicFeature> features,
                            const ClusterVocabulary& vocab,
                            const std::string& utterance_id) {
  LabelSequence seq;
  seq.utterance_id = !utterance_id.empty()
                         ? utterance_id
                         : (features.empty() ? std::string{} : features.front().utterance_id);
  seq.vocabulary_ref = vocab.ref();
  seq.labels.reserve(features.size());
  seq.group_keys.reserve(features.size());
  for (const auto& f : features) {
    std::string key;
    const auto& centroids = resolve_group(vocab, f, &key);
    const double value = vocab.feature == FeatureKind::F0 ? f.mean_log_f0 : f.duration_s;
    seq.labels.push_back(nearest_centroid(value, centroids));
    seq.group_keys.push_back(std::move(key));
  }
  return seq;
}

LabelSequence offset_labels(const LabelSequence& seq, int delta,
                            const ClusterVocabulary& vocab) {
  LabelSequence out = seq;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    const auto it = vocab.groups.find(out.group_keys[i]);
    if (it == vocab.groups.end())
      throw Error(ErrorCode::BadArgument,
                  "label group '" + out.group_keys[i] + "' not in vocabulary");
    const int size = static_cast<int>(it->second.size());
    if (out.labels[i] < 0 || out.labels[i] >= size)
      throw Error(ErrorCode::BadArgument,
                  "label " + std::to_string(out.labels[i]) + " out of range for group '" +
                      out.group_keys[i] + "'");
    if (delta == 0 || size <= 2) continue;
    out.labels[i] = std::clamp(out.labels[i] + delta, 1, size - 2);
  }
  return out;
}

std::vector<LabelSequence> sweep_labels(std::span<const ProsodicFeature> features,
                                        const ClusterVocabulary& vocab,
                                        const std::string& utterance_id) {
  const std::string id = !utterance_id.empty()
                             ? utterance_id
                             : (features.empty() ? std::string{} : features.front().utterance_id);
  std::vector<int> group_sizes;
  std::vector<std::string> keys;
  group_sizes.reserve(features.size());
  for (const auto& f : features) {
    std::string key;
    group_sizes.push_back(static_cast<int>(resolve_group(vocab, f, &key).size()));
    keys.push_back(std::move(key));
  }

  std::vector<LabelSequence> sweeps;
  const int steps = static_cast<int>(vocab.max_group_size());
  sweeps.reserve(static_cast<std::size_t>(steps));
  for (int c = 0; c < steps; ++c) {
    LabelSequence seq;
    seq.utterance_id = id;
    seq.vocabulary_ref = vocab.ref();
    seq.group_keys = keys;
    seq.labels.reserve(features.size());
    for (const int size : group_sizes) seq.labels.push_back(std::min(c, size - 1));
    sweeps.push_back(std::move(seq));
  }
  return sweeps;
}

std::string vocabulary_to_json(const ClusterVocabulary& vocab) {
  nlohmann::json doc;
  doc["feature"] = feature_kind_name(vocab.feature);
  nlohmann::json groups;
  for (const auto& [key, centroids] : vocab.groups) groups[key] = centroids;
  doc["groups"] = std::move(groups);
  doc["meta"] = {{"seed", vocab.seed},
                 {"requested_k", vocab.requested_k},
                 {"auto_k", vocab.auto_k},
                 {"sse_curve", vocab.curve}};
  return doc.dump(2) + "\n";
}

ClusterVocabulary vocabulary_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine, std::string("bad vocabulary file: ") + e.what());
  }
  ClusterVocabulary vocab;
  vocab.feature = feature_kind_from_name(doc.at("feature").get<std::string>());
  for (const auto& [key, centroids] : doc.at("groups").items()) {
    auto list = centroids.get<std::vector<double>>();
    for (std::size_t i = 1; i < list.size(); ++i)
      if (!(list[i] > list[i - 1]))
        throw Error(ErrorCode::BadArgument,
                    "centroids of group '" + key + "' are not strictly ascending");
    vocab.groups[key] = std::move(list);
  }
  if (doc.contains("meta")) {
    const auto& meta = doc["meta"];
    vocab.seed = meta.value("seed", std::uint64_t{0});
    vocab.requested_k = meta.value("requested_k", 0);
    vocab.auto_k = meta.value("auto_k", false);
    if (meta.contains("sse_curve"))
      vocab.curve = meta["sse_curve"].get<std::vector<std::pair<int, double>>>();
  }
  return vocab;
}

std::string label_sequences_to_text(std::span<const LabelSequence> sequences) {
  std::ostringstream out;
  for (const auto& seq : sequences) {
    out << seq.utterance_id;
    for (const int label : seq.labels) out << ' ' << label;
    out << '\n';
  }
  return out.str();
}

std::vector<std::pair<std::string, std::vector<int>>>
label_sequences_from_text(const std::string& text) {
  std::vector<std::pair<std::string, std::vector<int>>> out;
  int line_no = 0;
  for (const auto& line : split_on(text, '\n')) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<int> labels;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "-") continue;  // placeholder for non-target positions
      const auto v = parse_int64(fields[i]);
      if (!v || *v < 0)
        throw Error(ErrorCode::MalformedLine,
                    "labels line " + std::to_string(line_no) + ": bad label '" + fields[i] + "'");
      labels.push_back(static_cast<int>(*v));
    }
    out.emplace_back(fields[0], std::move(labels));
  }
  return out;
}

}  // namespace prosody
