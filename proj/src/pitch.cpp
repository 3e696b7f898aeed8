#include "prosody/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prosody/errors.hpp"
#include "prosody/util.hpp"

namespace prosody {

bool PitchTrack::fully_voiced() const {
  return std::all_of(frames.begin(), frames.end(),
                     [](const PitchFrame& f) { return f.f0_hz.has_value(); });
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

struct LagRange {
  int lo = 0;  // shortest lag considered (highest f0)
  int hi = 0;  // longest lag considered (lowest f0)
};

// Autocorrelation of `x` for lags 0..max_lag, normalized by lag-0 energy.
// Returns empty when the energy is (numerically) zero.
std::vector<double> normalized_autocorr(std::span<const double> x, int max_lag) {
  const int n = static_cast<int>(x.size());
  double energy = 0.0;
  for (const double v : x) energy += v * v;
  if (energy <= 1e-30) return {};
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (int t = 0; t + lag < n; ++t) acc += x[t] * x[t + lag];
    r[static_cast<std::size_t>(lag)] = acc / energy;
  }
  return r;
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int t = 0; t < n; ++t)
    w[static_cast<std::size_t>(t)] =
        0.5 - 0.5 * std::cos(kTwoPi * t / (n - 1));
  return w;
}

// Window shape and its autocorrelation, reusable across frames of equal
// length. Construction validates the window-length precondition.
struct AnalysisPlan {
  std::vector<double> window;
  std::vector<double> window_acf;
  LagRange lags;

  AnalysisPlan(int n, double fs, const PitchConfig& cfg) {
    if (cfg.floor_hz <= 0 || cfg.ceil_hz <= cfg.floor_hz)
      throw Error(ErrorCode::BadArgument, "need 0 < floor_hz < ceil_hz");
    if (static_cast<double>(n) < 2.0 * fs / cfg.floor_hz)
      throw Error(ErrorCode::WindowTooShort,
                  "window of " + std::to_string(n) + " samples cannot hold two periods at " +
                      fmt_double(cfg.floor_hz) + " Hz");
    lags.lo = std::max(2, static_cast<int>(std::floor(fs / cfg.ceil_hz)));
    lags.hi = std::min(static_cast<int>(std::ceil(fs / cfg.floor_hz)), n - 2);
    window = hann_window(n);
    window_acf = normalized_autocorr(window, lags.hi + 1);
  }
};

FramePitch analyze_frame(std::span<const double> samples, double fs,
                         const PitchConfig& cfg, const AnalysisPlan& plan) {
  const int n = static_cast<int>(samples.size());

  double mean = 0.0;
  for (const double v : samples) mean += v;
  mean /= n;

  std::vector<double> x(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    x[static_cast<std::size_t>(t)] = (samples[static_cast<std::size_t>(t)] - mean) *
                                     plan.window[static_cast<std::size_t>(t)];

  const auto acf = normalized_autocorr(x, plan.lags.hi + 1);
  if (acf.empty()) return {std::nullopt, 0.0};  // silent frame

  // Correct for the energy the window itself removes at longer lags.
  std::vector<double> r(acf.size());
  for (std::size_t i = 0; i < acf.size(); ++i)
    r[i] = plan.window_acf[i] > 0 ? acf[i] / plan.window_acf[i] : 0.0;

  double best_strength = 0.0;
  double best_f0 = 0.0;
  double best_height = 0.0;
  bool found = false;
  for (int lag = plan.lags.lo; lag <= plan.lags.hi; ++lag) {
    const std::size_t i = static_cast<std::size_t>(lag);
    if (r[i] < r[i - 1] || r[i] < r[i + 1]) continue;  // not a local peak
    if (r[i] <= 0) continue;
    // Parabolic refinement through the peak and its neighbours.
    const double denom = r[i - 1] - 2.0 * r[i] + r[i + 1];
    double shift = 0.0;
    if (std::abs(denom) > 1e-300)
      shift = std::clamp(0.5 * (r[i - 1] - r[i + 1]) / denom, -0.5, 0.5);
    const double height = r[i] - 0.25 * (r[i - 1] - r[i + 1]) * shift;
    const double f0 = std::clamp(fs / (lag + shift), cfg.floor_hz, cfg.ceil_hz);
    const double strength =
        height + cfg.octave_cost * std::log2(f0 / cfg.floor_hz);
    if (!found || strength > best_strength) {
      found = true;
      best_strength = strength;
      best_f0 = f0;
      best_height = height;
    }
  }
  if (!found) return {std::nullopt, 0.0};

  const double voicing = std::clamp(best_height, 0.0, 1.0);
  if (voicing < cfg.voicing_threshold) return {std::nullopt, voicing};
  return {best_f0, voicing};
}

}  // namespace

FramePitch frame_autocorr_f0(std::span<const double> window, double fs,
                             const PitchConfig& cfg) {
  AnalysisPlan plan(static_cast<int>(window.size()), fs, cfg);
  return analyze_frame(window, fs, cfg, plan);
}

PitchTrack extract_pitch_track(std::span<const double> samples, double fs,
                               const PitchConfig& cfg) {
  if (samples.empty()) throw Error(ErrorCode::AudioTooShort, "empty audio");
  if (fs <= 2.0 * cfg.ceil_hz)
    throw Error(ErrorCode::BadArgument,
                "sample rate must exceed twice ceil_hz (" + fmt_double(cfg.ceil_hz) + ")");
  const int frame_len = static_cast<int>(std::llround(cfg.frame_len_s * fs));
  const int hop = std::max(1, static_cast<int>(std::llround(cfg.hop_s * fs)));
  if (static_cast<int>(samples.size()) < frame_len)
    throw Error(ErrorCode::AudioTooShort,
                std::to_string(samples.size()) + " samples < one frame of " +
                    std::to_string(frame_len));

  AnalysisPlan plan(frame_len, fs, cfg);
  const int count = (static_cast<int>(samples.size()) - frame_len) / hop + 1;

  PitchTrack track;
  track.hop_s = cfg.hop_s;
  track.config = cfg;
  track.frames.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int start = i * hop;
    const auto fp = analyze_frame(samples.subspan(static_cast<std::size_t>(start),
                                                  static_cast<std::size_t>(frame_len)),
                                  fs, cfg, plan);
    PitchFrame frame;
    frame.time_s = (start + 0.5 * frame_len) / fs;
    frame.f0_hz = fp.f0_hz;
    frame.voicing = fp.voicing;
    track.frames.push_back(frame);
  }
  return track;
}

PitchTrack interpolate_unvoiced(PitchTrack track) {
  auto& frames = track.frames;
  std::vector<std::size_t> voiced;
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (frames[i].f0_hz) voiced.push_back(i);
  if (voiced.empty())
    throw Error(ErrorCode::NoVoicedFrames, "cannot interpolate a fully unvoiced track");

  // Hold the edges, connect the gaps linearly.
  for (std::size_t i = 0; i < voiced.front(); ++i)
    frames[i].f0_hz = frames[voiced.front()].f0_hz;
  for (std::size_t i = voiced.back() + 1; i < frames.size(); ++i)
    frames[i].f0_hz = frames[voiced.back()].f0_hz;
  for (std::size_t v = 0; v + 1 < voiced.size(); ++v) {
    const std::size_t a = voiced[v];
    const std::size_t b = voiced[v + 1];
    const double fa = *frames[a].f0_hz;
    const double fb = *frames[b].f0_hz;
    for (std::size_t i = a + 1; i < b; ++i) {
      const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
      frames[i].f0_hz = fa + t * (fb - fa);
    }
  }
  return track;
}

namespace {

// Applies `reduce` over a centered window that shrinks symmetrically at the
// edges, so the window length stays odd everywhere.
template <typename Reduce>
std::vector<double> centered_filter(const std::vector<double>& x, int width, Reduce reduce) {
  const int n = static_cast<int>(x.size());
  const int half = width / 2;
  std::vector<double> out(x.size());
  std::vector<double> window;
  for (int i = 0; i < n; ++i) {
    const int h = std::min({half, i, n - 1 - i});
    window.assign(x.begin() + (i - h), x.begin() + (i + h + 1));
    out[static_cast<std::size_t>(i)] = reduce(window);
  }
  return out;
}

double median_of(std::vector<double>& w) {
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2), w.end());
  return w[w.size() / 2];
}

double mean_of(const std::vector<double>& w) {
  double acc = 0.0;
  for (const double v : w) acc += v;
  return acc / static_cast<double>(w.size());
}

}  // namespace

PitchTrack smooth_track(PitchTrack track, int median_w, int mean_w) {
  if (median_w % 2 == 0 || mean_w % 2 == 0)
    throw Error(ErrorCode::EvenWindow, "filter windows must be odd");
  if (median_w < 1 || mean_w < 1)
    throw Error(ErrorCode::BadArgument, "filter windows must be positive");
  if (!track.fully_voiced())
    throw Error(ErrorCode::BadArgument, "smooth_track requires an interpolated track");

  std::vector<double> values;
  values.reserve(track.frames.size());
  for (const auto& f : track.frames) values.push_back(*f.f0_hz);

  values = centered_filter(values, median_w, [](std::vector<double>& w) { return median_of(w); });
  values = centered_filter(values, mean_w, [](std::vector<double>& w) { return mean_of(w); });

  for (std::size_t i = 0; i < track.frames.size(); ++i) track.frames[i].f0_hz = values[i];
  return track;
}

std::string track_to_csv(const PitchTrack& track) {
  std::ostringstream out;
  out << "time_s,f0_hz,voicing\n";
  for (const auto& f : track.frames) {
    out << fmt_double(f.time_s) << ',';
    if (f.f0_hz) out << fmt_double(*f.f0_hz);
    out << ',' << fmt_double(f.voicing) << '\n';
  }
  return out.str();
}

}  // namespace prosody
