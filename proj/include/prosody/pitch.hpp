#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prosody {

struct PitchConfig {
  double floor_hz = 60.0;
  double ceil_hz = 500.0;
  double voicing_threshold = 0.45;
  double frame_len_s = 0.040;
  double hop_s = 0.010;
  // Candidate weighting in favour of higher-frequency peaks, per octave
  // above floor_hz. Breaks the near-ties between a period and its
  // multiples that otherwise cause octave errors on harmonic signals.
  double octave_cost = 0.03;
};

struct PitchFrame {
  double time_s = 0.0;               // frame center
  std::optional<double> f0_hz;       // absent when unvoiced
  double voicing = 0.0;              // peak autocorrelation, in [0, 1]
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  double hop_s = 0.010;
  PitchConfig config;

  bool fully_voiced() const;
};

struct FramePitch {
  std::optional<double> f0_hz;
  double voicing = 0.0;
};

// F0 of one analysis window by normalized autocorrelation: the windowed
// signal's autocorrelation is divided by the window's own autocorrelation,
// the strongest peak within the lag range of [floor_hz, ceil_hz] is refined
// by parabolic interpolation, and its height becomes the voicing value.
// All-zero windows return (absent, 0).
FramePitch frame_autocorr_f0(std::span<const double> window, double fs,
                             const PitchConfig& cfg);

// Slides fixed-length frames over the audio and analyzes each one.
PitchTrack extract_pitch_track(std::span<const double> samples, double fs,
                               const PitchConfig& cfg = {});

// Fills unvoiced gaps by linear interpolation in Hz between the flanking
// voiced frames; leading and trailing gaps hold the nearest voiced value.
// Voicing values are untouched.
PitchTrack interpolate_unvoiced(PitchTrack track);

// Median filter then moving average, both with centered windows that shrink
// symmetrically at the edges. Requires a fully interpolated track.
PitchTrack smooth_track(PitchTrack track, int median_w = 5, int mean_w = 3);

// CSV export: `time_s,f0_hz,voicing`, empty f0 field for unvoiced frames.
std::string track_to_csv(const PitchTrack& track);

}  // namespace prosody
