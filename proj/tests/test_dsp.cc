#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "davoc/common/error.h"
#include "davoc/common/rng.h"
#include "davoc/dsp/feature_cache.h"
#include "davoc/dsp/features.h"
#include "davoc/dsp/fft.h"
#include "davoc/dsp/wav.h"
#include "doctest.h"
#include "test_util.h"

using namespace davoc;
using davoc::testing::TempDir;

namespace {

// Hand-assembled RIFF/WAVE bytes, independent of WriteWav.
struct WavBytes {
  uint16_t format = 1;
  uint16_t channels = 1;
  uint32_t rate = 44100;
  uint16_t bits = 16;
  std::vector<int16_t> samples;
  bool extra_chunk = false;

  std::string Build() const {
    std::string out;
    auto u32 = [&](uint32_t v) {
      for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    auto u16 = [&](uint16_t v) {
      out.push_back(static_cast<char>(v & 0xff));
      out.push_back(static_cast<char>(v >> 8));
    };
    const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
    out += "RIFF";
    u32(36 + data_bytes + (extra_chunk ? 12 : 0));
    out += "WAVE";
    out += "fmt ";
    u32(16);
    u16(format);
    u16(channels);
    u32(rate);
    u32(rate * channels * bits / 8);
    u16(static_cast<uint16_t>(channels * bits / 8));
    u16(bits);
    if (extra_chunk) {
      out += "LIST";
      u32(4);
      out += "abcd";
    }
    out += "data";
    u32(data_bytes);
    for (int16_t s : samples) u16(static_cast<uint16_t>(s));
    return out;
  }
};

void WriteBytes(const std::string& path, const std::string& bytes) {
  std::ofstream(path, std::ios::binary) << bytes;
}

WavErrorCode ReadError(const std::string& path) {
  try {
    ReadWav(path);
  } catch (const WavError& e) {
    return e.code();
  }
  FAIL("expected a WavError");
  return WavErrorCode::kOpenFailed;
}

std::vector<double> RandomSignal(size_t n, uint64_t seed) {
  Rng rng = MakeRng(seed, 0);
  std::vector<double> x(n);
  for (double& v : x) v = UniformRange(rng, -1.0, 1.0);
  return x;
}

// O(n^2) DFT power spectrum with an independently written Hamming window.
std::vector<double> DirectPowerSpectrum(const std::vector<double>& frame, int n_fft) {
  const int n = static_cast<int>(frame.size());
  std::vector<double> out(n_fft / 2 + 1);
  for (int k = 0; k <= n_fft / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int t = 0; t < n; ++t) {
      const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * t / (n - 1));
      acc += frame[t] * w * std::polar(1.0, -2.0 * std::numbers::pi * k * t / n_fft);
    }
    out[k] = std::norm(acc) / n_fft;
  }
  return out;
}

Utterance Tone(double seconds, uint64_t seed) {
  Utterance u;
  u.sample_rate = 44100;
  const size_t n = static_cast<size_t>(seconds * u.sample_rate);
  Rng rng = MakeRng(seed, 1);
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / u.sample_rate;
    u.samples.push_back(0.3 * std::sin(2 * std::numbers::pi * 180 * t) +
                        0.1 * std::sin(2 * std::numbers::pi * 1230 * t) +
                        0.01 * Gaussian(rng));
  }
  u.id = "tone";
  return u;
}

}  // namespace

TEST_CASE("read_wav scales PCM16 by 1/32768 and keeps the header rate") {
  TempDir dir;
  WavBytes w;
  w.samples = {16384, 0, -32768, 32767};
  WriteBytes(dir.File("a.wav"), w.Build());
  const Utterance u = ReadWav(dir.File("a.wav"));
  CHECK(u.sample_rate == 44100);
  REQUIRE(u.samples.size() == 4);
  CHECK(u.samples[0] == 0.5);
  CHECK(u.samples[1] == 0.0);
  CHECK(u.samples[2] == -1.0);
  CHECK(u.samples[3] == 32767.0 / 32768.0);
  CHECK(u.id == "a");
}

TEST_CASE("read_wav of an all-zero file gives all-zero samples") {
  TempDir dir;
  WavBytes w;
  w.samples.assign(100, 0);
  WriteBytes(dir.File("z.wav"), w.Build());
  for (double s : ReadWav(dir.File("z.wav")).samples) CHECK(s == 0.0);
}

TEST_CASE("read_wav averages stereo channels and skips unknown chunks") {
  TempDir dir;
  WavBytes w;
  w.channels = 2;
  w.extra_chunk = true;
  w.samples = {16384, 0, -16384, -16384};
  WriteBytes(dir.File("s.wav"), w.Build());
  const Utterance u = ReadWav(dir.File("s.wav"));
  REQUIRE(u.samples.size() == 2);
  CHECK(u.samples[0] == 0.25);
  CHECK(u.samples[1] == -0.5);
}

TEST_CASE("read_wav reports each failure with its own code") {
  TempDir dir;
  CHECK(ReadError(dir.File("missing.wav")) == WavErrorCode::kOpenFailed);

  WriteBytes(dir.File("junk.wav"), "RIFX1234WAVEjunk");
  CHECK(ReadError(dir.File("junk.wav")) == WavErrorCode::kMalformedHeader);

  WavBytes truncated;
  truncated.samples = {1, 2, 3};
  std::string bytes = truncated.Build();
  WriteBytes(dir.File("trunc.wav"), bytes.substr(0, 30));
  CHECK(ReadError(dir.File("trunc.wav")) == WavErrorCode::kMalformedHeader);

  WavBytes floaty;
  floaty.format = 3;
  floaty.bits = 32;
  floaty.samples = {0, 0};
  WriteBytes(dir.File("float.wav"), floaty.Build());
  CHECK(ReadError(dir.File("float.wav")) == WavErrorCode::kUnsupportedCodec);

  WavBytes eight;
  eight.bits = 8;
  eight.samples = {0};
  WriteBytes(dir.File("eight.wav"), eight.Build());
  CHECK(ReadError(dir.File("eight.wav")) == WavErrorCode::kUnsupportedCodec);

  WavBytes empty;
  WriteBytes(dir.File("empty.wav"), empty.Build());
  CHECK(ReadError(dir.File("empty.wav")) == WavErrorCode::kEmptyPayload);
}

TEST_CASE("write_wav then read_wav equals PCM16 quantization") {
  TempDir dir;
  std::vector<double> x = RandomSignal(500, 3);
  x.push_back(1.5);   // clamps
  x.push_back(-2.0);  // clamps
  WriteWav(dir.File("rt.wav"), x, 44100);
  const Utterance u = ReadWav(dir.File("rt.wav"));
  std::vector<double> q = x;
  QuantizePcm16(q);
  REQUIRE(u.samples.size() == q.size());
  for (size_t i = 0; i < q.size(); ++i) CHECK(u.samples[i] == q[i]);
  CHECK(q[q.size() - 2] == 32767.0 / 32768.0);
  CHECK(q.back() == -1.0);
}

TEST_CASE("pre_emphasize") {
  const std::vector<double> x = RandomSignal(16, 5);
  CHECK(PreEmphasize(x, 0.0) == x);

  const std::vector<double> c(10, 0.4);
  const std::vector<double> y = PreEmphasize(c, 0.97);
  CHECK(y[0] == 0.4);
  for (size_t n = 1; n < y.size(); ++n) CHECK(y[n] == doctest::Approx(0.03 * 0.4).epsilon(1e-12));

  const std::vector<double> e = PreEmphasize(x, 0.97);
  CHECK(e[0] == x[0]);
  for (size_t n = 1; n < x.size(); ++n) CHECK(e[n] == x[n] - 0.97 * x[n - 1]);
}

TEST_CASE("frame counts follow the half-window shift and padded tail") {
  FeatureConfig cfg;
  cfg.window_ms = 32.0;
  // 1 kHz makes the window an even 32 samples with shift 16.
  CHECK(cfg.WindowLength(1000) == 32);
  CHECK(cfg.FrameShift(1000) == 16);
  CHECK(FrameSignal(RandomSignal(96, 1), cfg, 1000).rows() == 5);
  CHECK(FrameSignal(RandomSignal(32, 1), cfg, 1000).rows() == 1);
  CHECK_THROWS_AS(FrameSignal(RandomSignal(31, 1), cfg, 1000), Error);

  // At 44.1 kHz the window is 1411 samples (odd) and the shift 705, so three
  // windows leave two samples after the last full frame.
  CHECK(cfg.WindowLength(44100) == 1411);
  CHECK(cfg.FrameShift(44100) == 705);
  const size_t len = 3 * 1411;
  const size_t full = (len - 1411) / 705 + 1;
  CHECK(full == 5);
  CHECK(FrameSignal(RandomSignal(len, 2), cfg, 44100).rows() == 6);
  cfg.window_ms = 100.0;
  CHECK(cfg.WindowLength(44100) == 4410);
  CHECK(cfg.FrameShift(44100) == 2205);
  CHECK(cfg.FftSize(44100) == 8192);
  cfg.window_ms = 32.0;
  CHECK(cfg.FftSize(44100) == 2048);
}

TEST_CASE("frames are contiguous slices and the tail is zero-padded") {
  FeatureConfig cfg;
  const std::vector<double> x = RandomSignal(100, 4);
  const Matrix f = FrameSignal(x, cfg, 1000);
  REQUIRE(f.cols() == 32);
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    for (Eigen::Index c = 0; c < 32; ++c) {
      const size_t i = static_cast<size_t>(r * 16 + c);
      CHECK(f(r, c) == (i < x.size() ? x[i] : 0.0));
    }
  }
}

TEST_CASE("FFT matches a direct DFT") {
  Rng rng = MakeRng(9, 0);
  std::vector<std::complex<double>> x(64);
  for (auto& v : x) v = {Gaussian(rng), Gaussian(rng)};
  std::vector<std::complex<double>> y = x;
  Fft(y);
  for (size_t k = 0; k < x.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (size_t t = 0; t < x.size(); ++t) {
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * k * t / x.size());
    }
    CHECK(std::abs(acc - y[k]) < 1e-10);
  }
  CHECK(IsPowerOfTwo(1024));
  CHECK_FALSE(IsPowerOfTwo(1411));
  CHECK(NextPowerOfTwo(1411) == 2048);
}

TEST_CASE("power spectrum agrees with the O(n^2) DFT to 1e-9 relative") {
  for (int len : {32, 100, 1411}) {
    const std::vector<double> frame = RandomSignal(len, len);
    const int n_fft = static_cast<int>(NextPowerOfTwo(len));
    const Vector fast = PowerSpectrum(frame, n_fft);
    const std::vector<double> slow = DirectPowerSpectrum(frame, n_fft);
    REQUIRE(fast.size() == static_cast<Eigen::Index>(slow.size()));
    double peak = 0.0;
    for (double v : slow) peak = std::max(peak, v);
    for (size_t k = 0; k < slow.size(); ++k) {
      CHECK(std::abs(fast[k] - slow[k]) <= 1e-9 * std::max(slow[k], 1e-3 * peak));
    }
  }
}

TEST_CASE("mel scale and filter bank") {
  CHECK(HzToMel(0.0) == 0.0);
  CHECK(HzToMel(1000.0) == doctest::Approx(2595.0 * std::log10(1.0 + 1000.0 / 700.0)));
  CHECK(MelToHz(HzToMel(3210.0)) == doctest::Approx(3210.0).epsilon(1e-12));

  const std::vector<double> centers = MelCenterFrequencies(40, 44100);
  REQUIRE(centers.size() == 40);
  const double top = 2595.0 * std::log10(1.0 + 22050.0 / 700.0);
  for (int i = 0; i < 40; ++i) {
    const double mel = top * (i + 1) / 41.0;
    CHECK(centers[i] == doctest::Approx(700.0 * (std::pow(10.0, mel / 2595.0) - 1.0)));
  }

  const Matrix fb = MelFilterbankMatrix(40, 2048, 44100);
  CHECK(fb.rows() == 40);
  CHECK(fb.cols() == 1025);
  CHECK(fb.minCoeff() >= 0.0);
  CHECK(fb.maxCoeff() <= 1.0);
  for (int m = 0; m < 40; ++m) {
    CHECK(fb.row(m).sum() > 0.0);
    const double lo = m == 0 ? 0.0 : centers[m - 1];
    const double hi = m == 39 ? 22050.0 : centers[m + 1];
    for (int k = 0; k < 1025; ++k) {
      const double hz = k * 44100.0 / 2048.0;
      double expect = 0.0;
      if (hz > lo && hz <= centers[m]) expect = (hz - lo) / (centers[m] - lo);
      else if (hz > centers[m] && hz < hi) expect = (hi - hz) / (hi - centers[m]);
      CHECK(fb(m, k) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  // Too many filters for the resolution leaves some of them empty.
  CHECK_THROWS_AS(MelFilterbankMatrix(200, 64, 8000), Error);
}

TEST_CASE("DCT block is orthonormal and matches the closed form") {
  const Matrix d = DctMatrix(40, 40);
  const Matrix eye = Matrix::Identity(40, 40);
  CHECK((d * d.transpose() - eye).cwiseAbs().maxCoeff() < 1e-9);
  const Matrix part = DctMatrix(26, 40);
  for (int k = 0; k < 26; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / 40) : std::sqrt(2.0 / 40);
    for (int n = 0; n < 40; ++n) {
      const double v = scale * std::cos(std::numbers::pi * k * (2 * n + 1) / 80.0);
      CHECK(part(k, n) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("MFCCs are the DCT of the log filter bank") {
  const Utterance u = Tone(0.2, 1);
  FeatureConfig fb_cfg;
  fb_cfg.kind = FeatureKind::kFilterBank;
  FeatureConfig mfcc_cfg = fb_cfg;
  mfcc_cfg.kind = FeatureKind::kMfcc;
  const FeatureMatrix fb = LogFilterbankFeatures(u, fb_cfg);
  const FeatureMatrix mfcc = MfccFeatures(u, mfcc_cfg);
  CHECK(fb.dims() == 40);
  CHECK(mfcc.dims() == 26);
  CHECK(fb.frames() == mfcc.frames());
  for (Eigen::Index t = 0; t < fb.data.rows(); ++t) {
    for (int k = 0; k < 26; ++k) {
      double acc = 0.0;
      for (int n = 0; n < 40; ++n) {
        const double scale = k == 0 ? std::sqrt(1.0 / 40) : std::sqrt(2.0 / 40);
        acc += scale * std::cos(std::numbers::pi * k * (2 * n + 1) / 80.0) * fb.data(t, n);
      }
      CHECK(mfcc.data(t, k) == doctest::Approx(acc).epsilon(1e-10));
    }
  }
  CHECK(fb.data.allFinite());
}

TEST_CASE("log filter bank of silence sits at the log floor") {
  Utterance u;
  u.samples.assign(4410, 0.0);
  FeatureConfig cfg;
  const FeatureMatrix fb = LogFilterbankFeatures(u, cfg);
  CHECK((fb.data.array() == std::log(kLogFloor)).all());
}

TEST_CASE("normalization over time is idempotent with zero column means") {
  const Utterance u = Tone(0.3, 2);
  for (FeatureKind kind : {FeatureKind::kMfcc, FeatureKind::kFilterBank}) {
    FeatureConfig cfg;
    cfg.kind = kind;
    const FeatureMatrix raw = ExtractFeatures(u, cfg);
    const FeatureMatrix once = NormalizeOverTime(raw);
    const FeatureMatrix twice = NormalizeOverTime(once);
    CHECK(once.data.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
    CHECK((once.data - twice.data).cwiseAbs().maxCoeff() < 1e-9);
    const Matrix centered = once.data.rowwise() - once.data.colwise().mean();
    const RowVector var = centered.array().square().colwise().mean();
    CHECK((var.array() - 1.0).abs().maxCoeff() < 1e-9);
    cfg.normalized = true;
    CHECK((ExtractFeatures(u, cfg).data - once.data).cwiseAbs().maxCoeff() == 0.0);
  }
  FeatureMatrix flat;
  flat.data = Matrix::Constant(5, 3, 2.0);
  CHECK(NormalizeOverTime(flat).data.cwiseAbs().maxCoeff() == 0.0);
  flat.data = Matrix::Constant(1, 3, 2.0);
  CHECK_THROWS_AS(NormalizeOverTime(flat), Error);
}

TEST_CASE("context stacking widths and edge replication") {
  const Utterance u = Tone(0.2, 3);
  FeatureConfig mfcc;
  mfcc.kind = FeatureKind::kMfcc;
  FeatureConfig fbank;
  fbank.kind = FeatureKind::kFilterBank;
  CHECK(StackContext(ExtractFeatures(u, mfcc), 11).dims() == 286);
  CHECK(StackContext(ExtractFeatures(u, fbank), 11).dims() == 440);
  CHECK(mfcc.StackedDims() == 286);
  CHECK(fbank.StackedDims() == 440);

  FeatureMatrix m;
  m.data.resize(4, 2);
  m.data << 1, 2, 3, 4, 5, 6, 7, 8;
  const FeatureMatrix s = StackContext(m, 3);
  REQUIRE(s.data.rows() == 4);
  REQUIRE(s.data.cols() == 6);
  CHECK(s.data.row(0) == (RowVector(6) << 1, 2, 1, 2, 3, 4).finished());
  CHECK(s.data.row(3) == (RowVector(6) << 5, 6, 7, 8, 7, 8).finished());
  CHECK_THROWS_AS(StackContext(m, 4), Error);
  CHECK_THROWS_AS(StackContext(m, 0), Error);
}

TEST_CASE("feature config validation") {
  FeatureConfig cfg;
  cfg.n_cepstra = 41;
  cfg.kind = FeatureKind::kMfcc;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = FeatureConfig{};
  cfg.window_ms = -1.0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = FeatureConfig{};
  cfg.pre_emphasis = 1.0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  CHECK(FeatureConfig{}.Tag() == "fbank-32ms-raw");
  CHECK(ParseFeatureKind("mfcc") == FeatureKind::kMfcc);
  CHECK_THROWS_AS(ParseFeatureKind("plp"), Error);
}

TEST_CASE("feature cache round trip is exact") {
  TempDir dir;
  Rng rng = MakeRng(11, 0);
  Matrix m(7, 5);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Gaussian(rng);
  WriteFeatureCache(dir.File("f.davf"), m);
  const Matrix back = ReadFeatureCache(dir.File("f.davf"));
  CHECK(back == m);
  WriteBytes(dir.File("bad.davf"), "NOPE");
  CHECK_THROWS_AS(ReadFeatureCache(dir.File("bad.davf")), Error);
}
