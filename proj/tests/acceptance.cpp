// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every reference value is recomputed here from first principles.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "cli_runner.hpp"
#include "scatnet/classifier.hpp"
#include "scatnet/config.hpp"
#include "scatnet/conv_engine.hpp"
#include "scatnet/features.hpp"
#include "scatnet/fft.hpp"
#include "scatnet/filterbank.hpp"
#include "scatnet/image_io.hpp"
#include "scatnet/scattering.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace scatnet;
using namespace scatnet::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = since(start);
  std::ostringstream line;
  line.precision(4);
  if (limit_s > 0 && t > limit_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s budget";
  }
  line << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << o.detail << " (" << t
       << " s)";
  std::cout << line.str() << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("scatnet_accept_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Number after `key` on the line that contains it.
double read_number(const std::string& text, const std::string& key) {
  const auto at = text.find(key);
  if (at == std::string::npos) throw std::runtime_error("missing '" + key + "' in output");
  return std::stod(text.substr(at + key.size()));
}

ComplexGrid to_spatial(const ComplexGrid& hat) {
  ComplexGrid g = hat;
  fft::inverse(g);
  return g;
}

// out(u) = sum_v x(v) f(s u - v), periodic; written out here so the oracle
// shares no code with the engine.
ComplexGrid brute_conv(const ComplexGrid& x, const ComplexGrid& f, int stride) {
  const int n = x.rows();
  ComplexGrid out(n / stride, n / stride);
  for (int oy = 0; oy < out.rows(); ++oy)
    for (int ox = 0; ox < out.cols(); ++ox) {
      Complex acc = 0.0;
      for (int vy = 0; vy < n; ++vy)
        for (int vx = 0; vx < n; ++vx)
          acc += x(vy, vx) * f(((oy * stride - vy) % n + n) % n, ((ox * stride - vx) % n + n) % n);
      out(oy, ox) = acc;
    }
  return out;
}

ComplexGrid complexify(const RealGrid& g) {
  ComplexGrid out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.size(); ++i) out.values()[i] = g.values()[i];
  return out;
}

double rel_err(std::span<const Complex> got, std::span<const Complex> ref) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - ref[i]));
    scale = std::max(scale, std::abs(ref[i]));
  }
  return diff / std::max(scale, 1e-300);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

RealGrid block_grid(const ScatteringFeatures& f, std::size_t p) {
  RealGrid g(f.paths[p].rows, f.paths[p].cols);
  std::copy(f.block(p).begin(), f.block(p).end(), g.values().begin());
  return g;
}

// Max |a - b| over max |a|, with b given block-wise by `expect(p)`.
double blockwise_rel(const ScatteringFeatures& got, const std::function<RealGrid(std::size_t)>& expect) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < got.paths.size(); ++p) {
    const auto e = expect(p);
    const auto g = got.block(p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      diff = std::max(diff, std::abs(g[i] - e.values()[i]));
      scale = std::max(scale, std::abs(e.values()[i]));
    }
  }
  return diff / std::max(scale, 1e-300);
}

// Stationary texture: Gaussian white noise smoothed by a Gaussian of random
// width between 0.5 and 2 pixels.
Plane texture(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
  ComplexGrid hat(n, n);
  for (auto& v : hat.values()) v = normal(rng);
  fft::forward(hat);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double wy = 2 * std::numbers::pi * (r < n / 2 ? r : r - n) / n;
      const double wx = 2 * std::numbers::pi * (c < n / 2 ? c : c - n) / n;
      hat(r, c) *= std::exp(-s * s * (wx * wx + wy * wy) / 2);
    }
  fft::inverse(hat);
  Plane x = make_plane(n, n);
  for (std::size_t i = 0; i < x.grid.size(); ++i) x.grid.values()[i] = hat.values()[i].real();
  return x;
}

FeatureMatrix scatter_all(const ScatteringTransform& t, const std::vector<Plane>& images) {
  FeatureMatrix m(t.feature_count());
  m.reserve_rows(images.size());
  for (const auto& x : images) m.append_row(t.scatter(x).values);
  return m;
}

FeatureMatrix pixels_all(const std::vector<Plane>& images) {
  FeatureMatrix m(images.front().grid.size());
  for (const auto& x : images) m.append_row(x.grid.values());
  return m;
}

// Standardize on train, fit the SVM, return test accuracy.
double train_and_test(FeatureMatrix train, std::span<const std::uint32_t> train_labels, FeatureMatrix test,
                      std::span<const std::uint32_t> test_labels) {
  const auto s = fit_standardizer(train);
  apply_standardizer_inplace(s, train);
  apply_standardizer_inplace(s, test);
  const auto model = train_linear_svm(train, train_labels, TrainOptions{});
  return evaluate(model, test, test_labels).accuracy;
}

struct DeskData {
  SyntheticSet train, test;
};

const DeskData& desk_data() {
  static const DeskData d = [] {
    auto all = grating_set(200, 64, 0);
    DeskData out;
    for (std::size_t i = 0; i < all.images.size(); ++i) {
      auto& part = i < 400 ? out.train : out.test;
      part.images.push_back(std::move(all.images[i]));
      part.labels.push_back(all.labels[i]);
    }
    return out;
  }();
  return d;
}

ScatteringConfig desk_config() {
  ScatteringConfig c;
  c.image_size = 64;
  c.J = 5;
  return c;
}

double scattering_accuracy(const ScatteringConfig& config) {
  const auto& d = desk_data();
  const ScatteringTransform t(config);
  return train_and_test(scatter_all(t, d.train.images), d.train.labels, scatter_all(t, d.test.images),
                        d.test.labels);
}

double average_pool_accuracy = -1.0;

// ---------------------------------------------------------------------------

Outcome frame_health() {
  const auto start = Clock::now();
  const auto r = run_cli("frame-check");
  const double t = since(start);
  if (r.code != 0) return {false, "frame-check exited " + std::to_string(r.code) + ": " + r.output};
  const double a = read_number(r.output, "A (lower frame bound):");
  const double b = read_number(r.output, "B (upper frame bound):");

  // Independent Littlewood-Paley sum over the same filters.
  const auto bank = build_filter_bank(ScatteringConfig{}).layer1;
  const int n = bank.grid_size;
  double lo = 1e300, hi = -1e300;
  for (int r0 = 0; r0 < n; ++r0)
    for (int c0 = 0; c0 < n; ++c0) {
      double v = bank.phi(r0, c0) * bank.phi(r0, c0);
      for (const auto& g : bank.psi)
        v += 0.5 * (std::norm(g(r0, c0)) + std::norm(g((n - r0) % n, (n - c0) % n)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const bool ok = std::abs(b - 1.0) <= 1e-6 && a >= 0.5 && std::abs(a - lo) <= 1e-6 &&
                  std::abs(b - hi) <= 1e-6 && t < 2.0;
  return {ok, "A=" + fmt(a) + " B=" + fmt(b, 10) + " (recomputed A=" + fmt(lo) + " B=" + fmt(hi, 10) +
                  "), frame-check " + fmt(t, 3) + " s"};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2);
  double worst_conv = 0.0;
  for (int n : {8, 16, 32}) {
    const int max_log = std::countr_zero(static_cast<unsigned>(n)) - 1;
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_real(rng, n, n);
      const auto f = random_complex(rng, n, n);
      const int sub = std::uniform_int_distribution<int>(0, max_log)(rng);
      const auto got = conv2d_fft(Plane{x, 0}, fft::forward_copy(f), sub);
      const auto ref = brute_conv(complexify(x), f, 1 << sub);
      worst_conv = std::max(worst_conv, rel_err(got.grid.values(), ref.values()));
    }
  }

  // Layer-2 path oracle on 16x16, K1 = 8: every stage by brute force.
  ScatteringConfig c;
  c.image_size = 16;
  c.J = 2;
  const auto banks = build_filter_bank(c);
  const auto x = random_real(rng, 16, 16);
  const auto u1 = layer1(Plane{x, 0}, banks.layer1, c);
  const auto u2 = layer2(u1, banks.layer2, banks.angular, c);
  double worst_l2 = 0.0;
  int checked = 0;
  for (std::size_t i = 0; i < u2.paths.size(); i += 5) {
    const auto& p = u2.paths[i];
    const int s1 = 1 << c.stride_log2(p.j1);
    const int s2 = 1 << c.stride_log2(p.j2);
    const int sp1 = banks.layer1.scale_position(p.j1);
    std::vector<ComplexGrid> filtered;
    for (int m = 0; m < 8; ++m) {
      // U1 at stride s1 from the full-resolution wavelet.
      const auto w1 = brute_conv(complexify(x), to_spatial(banks.layer1.psi[sp1 * 8 + m]), s1);
      ComplexGrid mod(w1.rows(), w1.cols());
      for (std::size_t k = 0; k < w1.size(); ++k) mod.values()[k] = std::abs(w1.values()[k]);
      // Layer-2 wavelet sampled every s1 pixels: spatial samples psi2(s1 v) times s1^2.
      const auto psi2 = to_spatial(banks.layer2.psi[banks.layer2.scale_position(p.j2) * 8 + p.theta2]);
      ComplexGrid sampled(16 / s1, 16 / s1);
      for (int r0 = 0; r0 < sampled.rows(); ++r0)
        for (int c0 = 0; c0 < sampled.cols(); ++c0) sampled(r0, c0) = psi2(r0 * s1, c0 * s1) * double(s1 * s1);
      filtered.push_back(brute_conv(mod, sampled, s2 / s1));
    }
    const auto g = banks.angular.filter(p.angular);
    const auto& got = u2.planes[i];
    ComplexGrid ref(got.rows(), got.cols()), have(got.rows(), got.cols());
    for (int r0 = 0; r0 < got.rows(); ++r0)
      for (int c0 = 0; c0 < got.cols(); ++c0) {
        Complex acc = 0.0;
        for (int m = 0; m < 8; ++m) acc += filtered[m](r0, c0) * g[((p.theta1 - m) % 8 + 8) % 8];
        ref(r0, c0) = std::abs(acc);
        have(r0, c0) = got(r0, c0);
      }
    worst_l2 = std::max(worst_l2, rel_err(have.values(), ref.values()));
    ++checked;
  }
  const bool ok = worst_conv <= 1e-10 && worst_l2 <= 1e-9;
  return {ok, "conv2d_fft vs brute force max rel err " + fmt(worst_conv, 3) + " over 60 triples; layer-2 " +
                  std::to_string(checked) + " paths max rel err " + fmt(worst_l2, 3)};
}

Outcome nonexpansive() {
  const ScatteringTransform t(desk_config());
  std::mt19937_64 rng(3);
  double worst_ratio = 0.0, worst_energy = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    const Plane x{random_real(rng, 64, 64), 0};
    Plane y = x;
    if (pair % 2 == 0) {
      y = Plane{random_real(rng, 64, 64), 0};
    } else {
      // Nearby pair: small perturbation, where any local gain would show.
      const auto d = random_real(rng, 64, 64, -1e-3, 1e-3);
      for (std::size_t i = 0; i < y.grid.size(); ++i) y.grid.values()[i] += d.values()[i];
    }
    const auto sx = t.scatter(x).values;
    const auto sy = t.scatter(y).values;
    worst_ratio = std::max(worst_ratio, dist2(sx, sy) / dist2(x.grid.values(), y.grid.values()));
    const double ex = norm2(x.grid.values());
    worst_energy = std::max(worst_energy, norm2(sx) * norm2(sx) / (ex * ex));
  }
  const bool ok = worst_ratio <= 1 + 1e-6 && worst_energy <= 1 + 1e-6;
  return {ok, "max |Sx-Sy|/|x-y| = " + fmt(worst_ratio) + ", max |Sx|^2/|x|^2 = " + fmt(worst_energy)};
}

Outcome covariance() {
  const ScatteringConfig c;
  const ScatteringTransform t(c);
  std::mt19937_64 rng(4);
  Plane x = texture(rng, 128);
  for (auto& v : x.grid.values()) v += 0.3 * std::uniform_real_distribution<double>(-1, 1)(rng);
  std::vector<std::string> notes;
  double worst = 0.0;
  auto note = [&](const std::string& what, double e) {
    worst = std::max(worst, e);
    notes.push_back(what + " " + fmt(e, 2));
  };

  // U1 under shifts by stride multiples, per scale.
  const auto u1 = layer1(x, t.banks().layer1, c);
  double e_shift = 0.0;
  for (int sp = 0; sp < static_cast<int>(u1.scales.size()); ++sp) {
    const int s = 1 << c.stride_log2(u1.scales[sp]);
    const auto moved = layer1(Plane{circular_shift(x.grid, 3 * s, -2 * s), 0}, t.banks().layer1, c);
    for (int k = 0; k < c.K1; ++k) {
      const auto expect = circular_shift(u1.at(sp, k).grid, 3, -2);
      e_shift = std::max(e_shift, max_abs_diff(moved.at(sp, k).grid.values(), expect.values()) /
                                      max_abs(expect.values()));
    }
  }
  note("U1 shift", e_shift);

  // U1 under a quarter turn: orientation index moves by K1/4.
  const auto u1r = layer1(Plane{rotate90(x.grid), 0}, t.banks().layer1, c);
  const int quarter = c.K1 / 4;
  double e_rot = 0.0;
  for (int sp = 0; sp < static_cast<int>(u1.scales.size()); ++sp)
    for (int k = 0; k < c.K1; ++k) {
      const auto expect = rotate90(u1.at(sp, (k - quarter + c.K1) % c.K1).grid);
      e_rot = std::max(e_rot, max_abs_diff(u1r.at(sp, k).grid.values(), expect.values()) /
                                  max_abs(expect.values()));
    }
  note("U1 rotation", e_rot);

  // Full S under a shift by the output stride: every block moves one cell.
  const int cell = 1 << c.resolved_output_stride_log2();
  const auto s = t.scatter(x);
  const auto s_shift = t.scatter(Plane{circular_shift(x.grid, cell, -2 * cell), 0});
  note("S shift", blockwise_rel(s_shift, [&](std::size_t p) { return circular_shift(block_grid(s, p), 1, -2); }));

  // S0 and S1 under a quarter turn: blocks rotate and orientations permute.
  const auto s_rot = t.scatter(Plane{rotate90(x.grid), 0});
  double e_srot = 0.0, scale = 0.0;
  for (std::size_t p = 0; p < s.paths.size(); ++p) {
    const auto& info = s.paths[p];
    if (info.order > 1) continue;
    std::size_t src = p;
    if (info.order == 1)
      for (std::size_t q2 = 0; q2 < s.paths.size(); ++q2)
        if (s.paths[q2].order == 1 && s.paths[q2].j1 == info.j1 &&
            s.paths[q2].theta1 == (info.theta1 - quarter + c.K1) % c.K1)
          src = q2;
    const auto expect = rotate90(block_grid(s, src));
    e_srot = std::max(e_srot, max_abs_diff(s_rot.block(p), expect.values()));
    scale = std::max(scale, max_abs(expect.values()));
  }
  note("S0/S1 rotation", e_srot / scale);

  std::string detail = "max rel err";
  for (const auto& n : notes) detail += " | " + n;
  return {worst <= 1e-8, detail};
}

Outcome translation_trend() {
  ScatteringConfig wide;  // 2^J = 32
  ScatteringConfig narrow;
  narrow.J = 3;  // 2^J = 8
  const ScatteringTransform tw(wide), tn(narrow);
  std::mt19937_64 rng(5);
  std::vector<double> change_w, change_n;
  for (int i = 0; i < 20; ++i) {
    const Plane x = texture(rng, 128);
    const Plane xs{circular_shift(x.grid, 0, 8), 0};
    for (auto [t, out] : {std::pair{&tw, &change_w}, std::pair{&tn, &change_n}}) {
      const auto a = t->scatter(x).values;
      const auto b = t->scatter(xs).values;
      out->push_back(dist2(a, b) / norm2(a));
    }
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  const double mw = median(change_w), mn = median(change_n);
  return {mw <= 0.05 && mw < mn,
          "median relative change under an 8 px shift: " + fmt(100 * mw, 4) + "% at 2^J=32, " +
              fmt(100 * mn, 4) + "% at 2^J=8"};
}

Outcome desk_classification() {
  const auto& d = desk_data();
  const double scat = scattering_accuracy(desk_config());
  average_pool_accuracy = scat;
  const double raw = train_and_test(pixels_all(d.train.images), d.train.labels, pixels_all(d.test.images),
                                    d.test.labels);
  return {scat - raw >= 0.10, "scattering " + fmt(100 * scat, 4) + "% vs raw pixels " + fmt(100 * raw, 4) +
                                  "% (margin " + fmt(100 * (scat - raw), 4) + " points, need 10)"};
}

Outcome pooling_ablation() {
  auto c = desk_config();
  c.pooling = Pooling::MaxNonOverlap;
  c.pool_window_log2 = 5;
  const double maxp = scattering_accuracy(c);
  const double avg = average_pool_accuracy >= 0 ? average_pool_accuracy : scattering_accuracy(desk_config());
  return {avg >= maxp - 0.01, "average pooling " + fmt(100 * avg, 4) + "% vs max pooling (window 32) " +
                                  fmt(100 * maxp, 4) + "%"};
}

Outcome determinism_and_formats() {
  std::vector<std::string> problems;
  const auto dir = scratch("determinism");
  {
    const auto set = grating_set(8, 32, 8);
    for (std::size_t i = 0; i < set.images.size(); ++i) {
      const auto cls = dir / "ds" / ("class" + std::to_string(set.labels[i]));
      fs::create_directories(cls);
      write_png_gray((cls / ("img" + std::to_string(100 + i) + ".png")).string(), set.images[i].grid);
    }
  }
  std::ofstream(dir / "desk.cfg") << "image_size = 32\nJ = 3\n";
  const std::string base = "extract --config " + q(dir / "desk.cfg") + " --dataset " + q(dir / "ds") +
                           " --train-per-class 5 --seed 1";
  auto run = [&](const std::string& args) {
    const auto r = run_cli(args);
    if (r.code != 0) problems.push_back("'" + args + "' exited " + std::to_string(r.code));
  };
  for (const char* threads : {"1", "8"}) {
    const std::string tag = threads;
    run(base + " --subset train --threads " + tag + " -o " + q(dir / ("train" + tag + ".scf")));
    run(base + " --subset test --threads " + tag + " -o " + q(dir / ("test" + tag + ".scf")));
    run(base + " --subset train --threads " + tag + " -o " + q(dir / ("train" + tag + "b.scf")));
    run("fit --train " + q(dir / ("train" + tag + ".scf")) + " --model " + q(dir / ("m" + tag + ".scm")) +
        " --standardizer " + q(dir / ("s" + tag + ".scs")) + " --threads " + tag);
  }
  auto same = [&](const std::string& a, const std::string& b) {
    if (slurp_file(dir / a).empty() || slurp_file(dir / a) != slurp_file(dir / b))
      problems.push_back(a + " != " + b);
  };
  same("train1.scf", "train8.scf");
  same("train1.scf", "train1b.scf");
  same("train8.scf", "train8b.scf");
  same("test1.scf", "test8.scf");
  same("m1.scm", "m8.scm");
  same("s1.scs", "s8.scs");
  const std::string eval_args = " --standardizer " + q(dir / "s1.scs") + " --test " + q(dir / "test1.scf");
  const auto e1 = run_cli("eval --model " + q(dir / "m1.scm") + eval_args);
  const auto e8 = run_cli("eval --model " + q(dir / "m8.scm") + eval_args);
  if (e1.code != 0 || e1.output != e8.output) problems.push_back("eval reports differ");

  // Format round trips on random instances.
  std::mt19937_64 rng(8);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::normal_distribution<double> normal(0.0, 10.0);
  int scf_ok = 0, scm_ok = 0;
  for (int i = 0; i < 100; ++i) {
    FeatureFile f;
    const int rows = pick(0, 12), cols = pick(1, 40);
    f.matrix = FeatureMatrix(cols);
    std::vector<double> row(cols);
    for (int r0 = 0; r0 < rows; ++r0) {
      // SCF1 stores f32; magnitudes span 1e-30 .. 1e30 with either sign.
      for (auto& v : row)
        v = static_cast<float>((pick(0, 1) ? 1 : -1) *
                               std::pow(10.0, std::uniform_real_distribution<double>(-30, 30)(rng)));
      f.matrix.append_row(row);
    }
    f.paths.push_back(PathInfo{0, 0, -1, -1, -1, -1, -1, 1, cols, 0});
    if (pick(0, 1)) {
      f.labels.emplace();
      for (int r0 = 0; r0 < rows; ++r0) f.labels->push_back(static_cast<std::uint32_t>(pick(0, 1000)));
    }
    std::stringstream a, b;
    write_features(a, f);
    const auto back = read_features(a);
    write_features(b, back);
    if (back.matrix == f.matrix && back.labels == f.labels && back.paths == f.paths && a.str() == b.str())
      ++scf_ok;

    LinearModel m;
    const int k = pick(1, 6);
    m.dim = pick(1, 50);
    for (int c0 = 0; c0 < k; ++c0) m.classes.push_back(static_cast<std::uint32_t>(c0 * 3 + pick(0, 2)));
    for (std::size_t w = 0; w < k * m.dim; ++w) m.weights.push_back(normal(rng));
    for (int c0 = 0; c0 < k; ++c0) m.biases.push_back(normal(rng));
    m.C = std::exp(normal(rng) / 5);
    m.seed = rng();
    std::stringstream ma, mb;
    write_model(ma, m);
    const auto mback = read_model(ma);
    write_model(mb, mback);
    if (mback == m && ma.str() == mb.str()) ++scm_ok;
  }
  if (scf_ok != 100) problems.push_back("SCF1 round trips " + std::to_string(scf_ok) + "/100");
  if (scm_ok != 100) problems.push_back("SCM1 round trips " + std::to_string(scm_ok) + "/100");

  std::string detail = "extract/fit/eval identical across runs and --threads 1/8; SCF1 " +
                       std::to_string(scf_ok) + "/100, SCM1 " + std::to_string(scm_ok) + "/100 bit-exact";
  if (!problems.empty()) {
    detail = "problems:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  std::cout << "scatnet acceptance suite" << std::endl;
  criterion(1, "frame health (default bank)", 0, frame_health);
  criterion(2, "oracle equivalence", 30, oracle_equivalence);
  criterion(3, "nonexpansiveness (50 pairs, 64x64)", 120, nonexpansive);
  criterion(4, "shift and rotation covariance", 60, covariance);
  criterion(5, "translation-invariance trend", 0, translation_trend);
  criterion(6, "desk-scale classification", 600, desk_classification);
  criterion(7, "pooling ablation direction", 0, pooling_ablation);
  criterion(8, "determinism and file formats", 0, determinism_and_formats);
  std::cout << "[INFO] 9 full-scale Caltech-101/256 accuracies: not reproducible at desk scale and not "
               "a gate; see the README recipe (configs/caltech101.cfg, configs/caltech256.cfg)"
            << std::endl;
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
