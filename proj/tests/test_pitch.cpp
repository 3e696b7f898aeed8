#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prosody/errors.hpp"
#include "prosody/pitch.hpp"
#include "prosody/rng.hpp"
#include "test_support.hpp"

using namespace prosody;
using testsupport::harmonic_signal;

namespace {

constexpr double kFs = 24000.0;

std::vector<double> sine(double f0, double fs, int samples, double amp = 0.8) {
  std::vector<double> x(static_cast<std::size_t>(samples));
  for (int t = 0; t < samples; ++t)
    x[static_cast<std::size_t>(t)] = amp * std::sin(testsupport::kTwoPi * f0 * t / fs);
  return x;
}

PitchTrack make_track(const std::vector<std::optional<double>>& f0s) {
  PitchTrack track;
  track.hop_s = 0.01;
  for (std::size_t i = 0; i < f0s.size(); ++i) {
    PitchFrame frame;
    frame.time_s = 0.02 + 0.01 * static_cast<double>(i);
    frame.f0_hz = f0s[i];
    frame.voicing = f0s[i] ? 0.9 : 0.1;
    track.frames.push_back(frame);
  }
  return track;
}

}  // namespace

TEST_CASE("pure 200 Hz sine is estimated within 1 Hz with strong voicing") {
  const auto window = sine(200.0, kFs, 960);
  const auto fp = frame_autocorr_f0(window, kFs, PitchConfig{});
  REQUIRE(fp.f0_hz.has_value());
  CHECK(std::abs(*fp.f0_hz - 200.0) < 1.0);
  CHECK(fp.voicing > 0.9);
}

TEST_CASE("white noise windows stay below the voicing threshold") {
  int failures = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng(1000 + static_cast<std::uint64_t>(s));
    std::vector<double> window(960);
    for (auto& v : window) v = rng.normal();
    const auto fp = frame_autocorr_f0(window, kFs, PitchConfig{});
    if (fp.f0_hz.has_value() || fp.voicing >= 0.45) ++failures;
  }
  CHECK(failures <= 5);
}

TEST_CASE("all-zero window is silent") {
  const std::vector<double> window(960, 0.0);
  const auto fp = frame_autocorr_f0(window, kFs, PitchConfig{});
  CHECK_FALSE(fp.f0_hz.has_value());
  CHECK(fp.voicing == 0.0);
}

TEST_CASE("window shorter than two floor periods is rejected") {
  const auto window = sine(200.0, kFs, 700);  // needs 800 at floor 60
  try {
    static_cast<void>(frame_autocorr_f0(window, kFs, PitchConfig{}));
    FAIL("expected WindowTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooShort);
  }
}

TEST_CASE("one second of 150 Hz yields a fully voiced track near 150") {
  const auto audio = sine(150.0, kFs, 24000);
  const auto track = extract_pitch_track(audio, kFs);
  CHECK(track.frames.size() == 97);  // (24000 - 960) / 240 + 1
  for (const auto& frame : track.frames) {
    REQUIRE(frame.f0_hz.has_value());
    CHECK(std::abs(*frame.f0_hz - 150.0) / 150.0 < 0.01);
  }
}

TEST_CASE("silence after a tone becomes unvoiced frames") {
  auto audio = sine(150.0, kFs, 12000);
  audio.resize(24000, 0.0);
  const auto track = extract_pitch_track(audio, kFs);
  // Frames fully inside the first half voiced, fully inside the silence not,
  // and presence always agrees with the voicing threshold.
  for (const auto& frame : track.frames) {
    if (frame.time_s < 0.45) CHECK(frame.f0_hz.has_value());
    if (frame.time_s > 0.55) CHECK_FALSE(frame.f0_hz.has_value());
    CHECK(frame.f0_hz.has_value() == (frame.voicing >= track.config.voicing_threshold));
    if (frame.f0_hz) {
      CHECK(*frame.f0_hz >= track.config.floor_hz);
      CHECK(*frame.f0_hz <= track.config.ceil_hz);
    }
  }
}

TEST_CASE("audio shorter than one frame is rejected") {
  const auto audio = sine(150.0, kFs, 120);  // 5 ms
  try {
    static_cast<void>(extract_pitch_track(audio, kFs));
    FAIL("expected AudioTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AudioTooShort);
  }
}

TEST_CASE("property: frame count matches the closed form") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.range(960, 50000);
    const auto audio = sine(120.0, kFs, n);
    const auto track = extract_pitch_track(audio, kFs);
    const int frame_len = 960, hop = 240;
    CHECK(static_cast<int>(track.frames.size()) == (n - frame_len) / hop + 1);
  }
}

TEST_CASE("interpolation bridges gaps linearly and holds the edges") {
  SUBCASE("midpoint") {
    const auto track = interpolate_unvoiced(make_track({100.0, std::nullopt, 200.0}));
    CHECK(*track.frames[1].f0_hz == doctest::Approx(150.0));
  }
  SUBCASE("edge hold") {
    const auto track = interpolate_unvoiced(make_track({std::nullopt, 120.0, std::nullopt}));
    CHECK(*track.frames[0].f0_hz == doctest::Approx(120.0));
    CHECK(*track.frames[2].f0_hz == doctest::Approx(120.0));
  }
  SUBCASE("fully unvoiced fails") {
    try {
      static_cast<void>(interpolate_unvoiced(make_track({std::nullopt, std::nullopt})));
      FAIL("expected NoVoicedFrames");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoVoicedFrames);
    }
  }
}

TEST_CASE("property: interpolation never alters voiced frames") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<double>> f0s;
    const int n = rng.range(1, 40);
    bool any_voiced = false;
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.5) {
        f0s.emplace_back(rng.uniform(60.0, 400.0));
        any_voiced = true;
      } else {
        f0s.emplace_back(std::nullopt);
      }
    }
    if (!any_voiced) f0s[static_cast<std::size_t>(rng.index(f0s.size()))] = 180.0;
    const auto before = make_track(f0s);
    const auto after = interpolate_unvoiced(before);
    for (std::size_t i = 0; i < f0s.size(); ++i) {
      REQUIRE(after.frames[i].f0_hz.has_value());
      if (before.frames[i].f0_hz)
        CHECK(*after.frames[i].f0_hz == *before.frames[i].f0_hz);
      CHECK(after.frames[i].voicing == before.frames[i].voicing);
    }
  }
}

TEST_CASE("smoothing keeps constants and removes spikes") {
  SUBCASE("constant") {
    const auto track = smooth_track(make_track({200.0, 200.0, 200.0, 200.0, 200.0}));
    for (const auto& frame : track.frames) CHECK(*frame.f0_hz == doctest::Approx(200.0));
  }
  SUBCASE("median kills an octave spike") {
    // Median over the full 5-window turns the center into 100 before the
    // mean pass, so nothing of the 400 survives.
    const auto track = smooth_track(make_track({100.0, 100.0, 400.0, 100.0, 100.0}), 5, 1);
    CHECK(*track.frames[2].f0_hz == doctest::Approx(100.0));
  }
  SUBCASE("single frame is untouched") {
    const auto track = smooth_track(make_track({123.0}));
    CHECK(*track.frames[0].f0_hz == doctest::Approx(123.0));
  }
  SUBCASE("even windows are rejected") {
    try {
      static_cast<void>(smooth_track(make_track({100.0, 100.0}), 4, 3));
      FAIL("expected EvenWindow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EvenWindow);
    }
  }
}

TEST_CASE("property: smoothing output stays inside the input range") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<double>> f0s;
    const int n = rng.range(1, 60);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < n; ++i) {
      const double v = rng.uniform(60.0, 500.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      f0s.emplace_back(v);
    }
    const auto track = smooth_track(make_track(f0s));
    for (const auto& frame : track.frames) {
      CHECK(*frame.f0_hz >= lo - 1e-12);
      CHECK(*frame.f0_hz <= hi + 1e-12);
    }
  }
}

TEST_CASE("property: random fundamentals in [80, 400] kept within 1 percent") {
  Rng rng(8);
  for (int trial = 0; trial < 15; ++trial) {
    const double f0 = rng.uniform(80.0, 400.0);
    const auto audio = harmonic_signal(f0, kFs, 0.6);
    const auto track = extract_pitch_track(audio, kFs);
    int voiced = 0, good = 0;
    for (const auto& frame : track.frames) {
      if (!frame.f0_hz) continue;
      ++voiced;
      if (std::abs(*frame.f0_hz - f0) / f0 < 0.01) ++good;
    }
    REQUIRE(voiced > 0);
    CHECK(static_cast<double>(good) >= 0.95 * voiced);
  }
}

TEST_CASE("track CSV leaves the f0 field empty for unvoiced frames") {
  const auto csv = track_to_csv(make_track({100.0, std::nullopt}));
  CHECK(csv.find("time_s,f0_hz,voicing\n") == 0);
  CHECK(csv.find(",,") != std::string::npos);  // the unvoiced row
}
