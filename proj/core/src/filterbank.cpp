#include "scatnet/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scatnet/config.hpp"
#include "scatnet/conv_engine.hpp"
#include "scatnet/error.hpp"
#include "scatnet/fft.hpp"

namespace scatnet {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_grid_size(int n) {
  if (!is_power_of_two(n) || n < 2)
    throw ParameterError("grid size " + std::to_string(n) + " is not a power of two >= 2");
}

// Signed frequency of DFT bin k on an n-point grid, radians / sample.
double bin_frequency(int k, int n) {
  const int signed_k = k < n / 2 ? k : k - n;
  return kTwoPi * signed_k / n;
}

// Alias count such that every omitted term of exp(-s^2 d^2 / 2) is below
// e^-50 for a Gaussian of std 1/s centered within `center` of the origin.
int alias_reach(double s, double center) {
  const double needed = std::sqrt(100.0) / s + std::numbers::pi * std::sqrt(2.0) + center;
  return std::max(1, static_cast<int>(std::ceil(needed / kTwoPi)) - 1);
}

double angle_of(int k, int num_angles, AngleSpan span) {
  const double full = span == AngleSpan::FullCircle ? kTwoPi : std::numbers::pi;
  return full * k / num_angles;
}

}  // namespace

void MorletParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("morlet sigma must be > 0");
  if (!(xi > 0.0 && xi < std::numbers::pi)) throw ParameterError("morlet xi must lie in (0, pi)");
  if (!(slant > 0.0 && slant <= 1.0)) throw ParameterError("morlet slant must lie in (0, 1]");
}

int SpatialFilterBank::scale_position(int scale) const {
  auto it = std::find(scales.begin(), scales.end(), scale);
  if (it == scales.end())
    throw ParameterError("scale index " + std::to_string(scale) + " not in filter bank");
  return static_cast<int>(it - scales.begin());
}

const ComplexGrid& SpatialFilterBank::wavelet(int scale_pos, int k) const {
  if (scale_pos < 0 || scale_pos >= num_scales() || k < 0 || k >= num_angles)
    throw ParameterError("wavelet index out of range");
  return psi[static_cast<std::size_t>(scale_pos) * num_angles + k];
}

const ComplexGrid& SpatialFilterBank::wavelet(int scale_pos, int k, int resolution_log2) const {
  if (resolution_log2 == 0) return wavelet(scale_pos, k);
  if (resolution_log2 < 0 || resolution_log2 > prepared_resolutions())
    throw InternalError("filter resolution 2^-" + std::to_string(resolution_log2) +
                        " was not prepared");
  wavelet(scale_pos, k);  // range check
  return folded_psi_[resolution_log2 - 1][static_cast<std::size_t>(scale_pos) * num_angles + k];
}

const RealGrid& SpatialFilterBank::lowpass(int resolution_log2) const {
  if (resolution_log2 == 0) return phi;
  if (resolution_log2 < 0 || resolution_log2 > prepared_resolutions())
    throw InternalError("lowpass resolution 2^-" + std::to_string(resolution_log2) +
                        " was not prepared");
  return folded_phi_[resolution_log2 - 1];
}

void SpatialFilterBank::scale_by(double c) {
  for (auto& g : psi)
    for (auto& v : g.values()) v *= c;
  for (auto& v : phi.values()) v *= c;
  folded_psi_.clear();
  folded_phi_.clear();
}

void SpatialFilterBank::prepare_resolutions(int max_log2) {
  folded_psi_.clear();
  folded_phi_.clear();
  for (int level = 1; level <= max_log2 && (grid_size >> level) >= 1; ++level) {
    std::vector<ComplexGrid> level_psi;
    level_psi.reserve(psi.size());
    for (const auto& g : psi) level_psi.push_back(fold_spectrum(g, level));
    folded_psi_.push_back(std::move(level_psi));
    folded_phi_.push_back(fold_spectrum(phi, level));
  }
}

std::vector<Complex> AngularFilterBank::filter(int index) const {
  if (index < 0 || index >= num_filters()) throw ParameterError("angular filter index out of range");
  if (index < static_cast<int>(psi.size())) return psi[index];
  return std::vector<Complex>(phi.begin(), phi.end());
}

ComplexGrid make_morlet_2d(double scale_j, int k, int num_angles, const MorletParams& params,
                           int grid_size, AngleSpan span) {
  check_grid_size(grid_size);
  params.validate();
  if (num_angles < 1) throw ParameterError("number of angles must be >= 1");
  if (k < 0 || k >= num_angles)
    throw ParameterError("angle index " + std::to_string(k) + " outside [0, " +
                         std::to_string(num_angles) + ")");
  if (!(scale_j >= 0.0) || !std::isfinite(scale_j)) throw ParameterError("scale must be >= 0");

  const double dilation = std::exp2(scale_j);
  const double sigma = params.sigma * dilation;
  const double xi = params.xi / dilation;
  const double theta = angle_of(k, num_angles, span);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double s_par = sigma * sigma;                                  // along the wave vector
  const double s_perp = sigma * sigma / (params.slant * params.slant);  // across it
  const int reach = alias_reach(sigma, xi);

  // Continuous transforms of the Gabor atom and of its envelope, both with
  // unit peak; the envelope is shifted to the origin.
  auto gabor_hat = [&](double wy, double wx, double shift) {
    const double dx = wx - shift * ct;
    const double dy = wy - shift * st;
    const double a = dx * ct + dy * st;
    const double b = -dx * st + dy * ct;
    const double e = 0.5 * (s_par * a * a + s_perp * b * b);
    // Same floor as alias_reach: terms below e^-50 do not register.
    return e > 50.0 ? 0.0 : std::exp(-e);
  };
  auto aliased = [&](double wy, double wx, double shift) {
    double acc = 0.0;
    for (int by = -reach; by <= reach; ++by)
      for (int bx = -reach; bx <= reach; ++bx)
        acc += gabor_hat(wy + kTwoPi * by, wx + kTwoPi * bx, shift);
    return acc;
  };

  const double beta = aliased(0.0, 0.0, xi) / aliased(0.0, 0.0, 0.0);
  ComplexGrid out(grid_size, grid_size);
  for (int r = 0; r < grid_size; ++r) {
    const double wy = bin_frequency(r, grid_size);
    for (int c = 0; c < grid_size; ++c) {
      const double wx = bin_frequency(c, grid_size);
      out(r, c) = aliased(wy, wx, xi) - beta * aliased(wy, wx, 0.0);
    }
  }
  return out;
}

RealGrid make_gaussian_lowpass(int J, int grid_size, double lowpass_sigma) {
  check_grid_size(grid_size);
  if (J < 0 || (1LL << J) > grid_size)
    throw ParameterError("lowpass scale 2^" + std::to_string(J) + " exceeds grid size " +
                         std::to_string(grid_size));
  if (!(lowpass_sigma > 0.0)) throw ParameterError("lowpass sigma must be > 0");
  const double sigma = lowpass_sigma * std::exp2(J);
  const int reach = alias_reach(sigma, 0.0);

  // The Gaussian is separable, so the aliased 2D transform is an outer product.
  auto profile = [&](double w) {
    double acc = 0.0;
    for (int b = -reach; b <= reach; ++b) {
      const double d = w + kTwoPi * b;
      acc += std::exp(-0.5 * sigma * sigma * d * d);
    }
    return acc;
  };
  std::vector<double> axis(grid_size);
  for (int i = 0; i < grid_size; ++i) axis[i] = profile(bin_frequency(i, grid_size));
  const double dc = axis[0];
  for (auto& v : axis) v /= dc;

  RealGrid out(grid_size, grid_size);
  for (int r = 0; r < grid_size; ++r)
    for (int c = 0; c < grid_size; ++c) out(r, c) = axis[r] * axis[c];
  return out;
}

AngularFilterBank make_angular_bank(int num_angles, const std::vector<int>& octaves,
                                    const MorletParams& params) {
  if (num_angles < 1) throw ParameterError("angular bank needs at least 1 orientation");
  if (!octaves.empty() && num_angles < 4)
    throw ParameterError("angular wavelets need at least 4 orientations");
  params.validate();
  for (int l : octaves)
    if (l < 0 || (1LL << l) >= num_angles)
      throw ParameterError("angular octave " + std::to_string(l) + " needs 2^l < " +
                           std::to_string(num_angles));

  AngularFilterBank bank;
  bank.num_angles = num_angles;
  bank.octaves = octaves;
  bank.phi.assign(num_angles, 1.0 / num_angles);

  std::vector<std::vector<double>> spectra;
  for (int l : octaves) {
    const double sigma = params.sigma * std::exp2(l);
    const double xi = params.xi / std::exp2(l);
    const int reach = alias_reach(sigma, xi);
    auto aliased = [&](double w, double shift) {
      double acc = 0.0;
      for (int b = -reach; b <= reach; ++b) {
        const double d = w + kTwoPi * b - shift;
        acc += std::exp(-0.5 * sigma * sigma * d * d);
      }
      return acc;
    };
    const double beta = aliased(0.0, xi) / aliased(0.0, 0.0);
    std::vector<double> spectrum(num_angles);
    for (int m = 0; m < num_angles; ++m) {
      const double w = bin_frequency(m, num_angles);
      spectrum[m] = aliased(w, xi) - beta * aliased(w, 0.0);
    }
    spectra.push_back(std::move(spectrum));
  }

  double peak = 0.0;
  for (int m = 0; m < num_angles; ++m) {
    double lp = 0.0;
    for (const auto& s : spectra) lp += s[m] * s[m];
    peak = std::max(peak, lp);
  }
  bank.normalization = peak > 0.0 ? 1.0 / std::sqrt(peak) : 1.0;

  for (const auto& s : spectra) {
    std::vector<Complex> taps(num_angles);
    for (int n = 0; n < num_angles; ++n) {
      Complex acc{0.0, 0.0};
      for (int m = 0; m < num_angles; ++m)
        acc += s[m] * std::polar(1.0, kTwoPi * ((m * n) % num_angles) / num_angles);
      taps[n] = acc * (bank.normalization / num_angles);
    }
    bank.psi.push_back(std::move(taps));
  }
  return bank;
}

SpatialFilterBank make_haar_bank(int J, int num_angles, int grid_size,
                                 const std::vector<int>& scales, double lowpass_sigma) {
  check_grid_size(grid_size);
  if (num_angles != 2 && num_angles != 4)
    throw ParameterError("Haar bank supports 2 or 4 orientations, got " +
                         std::to_string(num_angles));
  SpatialFilterBank bank;
  bank.grid_size = grid_size;
  bank.num_angles = num_angles;
  bank.span = AngleSpan::HalfCircle;
  bank.family = WaveletFamily::HaarReal;
  if (scales.empty()) {
    for (int j = 0; j < J; ++j) bank.scales.push_back(j);
  } else {
    bank.scales = scales;
  }
  bank.phi = make_gaussian_lowpass(J, grid_size, lowpass_sigma);

  for (int j : bank.scales) {
    const int h = 1 << j;
    if (2 * h > grid_size)
      throw ParameterError("Haar scale 2^" + std::to_string(j) + " does not fit the grid");
    for (int k = 0; k < num_angles; ++k) {
      // Orientation in half-turn units of pi / num_angles, mapped to the four
      // supported shapes: 0 = d/dx, 1 = diagonal, 2 = d/dy, 3 = anti-diagonal.
      const int shape = num_angles == 2 ? 2 * k : k;
      RealGrid spatial(grid_size, grid_size);
      auto put = [&](int y, int x, double v) {
        spatial(((y % grid_size) + grid_size) % grid_size, ((x % grid_size) + grid_size) % grid_size) = v;
      };
      const double axis_amp = 1.0 / (static_cast<double>(h) * h);
      const double diag_amp = 0.5 * axis_amp;
      const int box_lo = h == 1 ? 0 : -h / 2;
      const int box_hi = h == 1 ? 0 : h / 2 - 1;
      if (shape == 0 || shape == 2) {
        for (int a = -h; a < h; ++a)
          for (int b = box_lo; b <= box_hi; ++b) {
            const double v = a < 0 ? axis_amp : -axis_amp;
            if (shape == 0) put(b, a, v);
            else put(a, b, v);
          }
      } else {
        for (int y = -h; y < h; ++y)
          for (int x = -h; x < h; ++x) {
            // Twice the signed distance of the pixel center from the diagonal.
            const int d = shape == 1 ? (2 * x + 1) + (2 * y + 1) : (2 * y + 1) - (2 * x + 1);
            if (d != 0) put(y, x, d < 0 ? diag_amp : -diag_amp);
          }
      }
      bank.psi.push_back(fft::forward(spatial));
    }
  }
  return bank;
}

LittlewoodPaley littlewood_paley_scan(const SpatialFilterBank& bank) {
  const int n = bank.grid_size;
  LittlewoodPaley out;
  out.values = RealGrid(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.values(r, c) = bank.phi(r, c) * bank.phi(r, c);
  for (const auto& g : bank.psi)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        out.values(r, c) += 0.5 * (std::norm(g(r, c)) + std::norm(g.wrapped(-r, -c)));

  out.lower = std::numeric_limits<double>::infinity();
  out.upper = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double v = out.values(r, c);
      if (v < out.lower) {
        out.lower = v;
        out.lower_row = r;
        out.lower_col = c;
      }
      if (v > out.upper) {
        out.upper = v;
        out.upper_row = r;
        out.upper_col = c;
      }
    }
  return out;
}

void normalize_frame(SpatialFilterBank& bank, bool require_cover) {
  const int n = bank.grid_size;
  // Largest c with |phi|^2 + c^2 W <= 1 wherever the wavelets carry energy.
  double c2 = std::numeric_limits<double>::infinity();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double w = 0.0;
      for (const auto& g : bank.psi) w += 0.5 * (std::norm(g(r, c)) + std::norm(g.wrapped(-r, -c)));
      const double room = 1.0 - bank.phi(r, c) * bank.phi(r, c);
      if (w > 1e-300 && room > 0.0) c2 = std::min(c2, room / w);
    }
  const double scale = std::isfinite(c2) ? std::sqrt(c2) : 1.0;
  for (auto& g : bank.psi)
    for (auto& v : g.values()) v *= scale;
  bank.normalization *= scale;

  const LittlewoodPaley lp = littlewood_paley_scan(bank);
  bank.lower_bound = lp.lower;
  if (require_cover && lp.lower < kMinLowerFrameBound)
    throw DegenerateBankError(
        "degenerate filter bank: Littlewood-Paley lower bound " + std::to_string(lp.lower) +
            " < " + std::to_string(kMinLowerFrameBound) + " at frequency bin (" +
            std::to_string(lp.lower_row) + ", " + std::to_string(lp.lower_col) +
            "); the parameters leave frequency holes",
        lp.lower);
}

namespace {

SpatialFilterBank make_morlet_bank(const ScatteringConfig& config, const std::vector<int>& scales,
                                   int num_angles, AngleSpan span) {
  SpatialFilterBank bank;
  bank.grid_size = config.image_size;
  bank.Q = config.Q;
  bank.num_angles = num_angles;
  bank.span = span;
  bank.family = WaveletFamily::MorletComplex;
  bank.scales = scales;
  bank.phi = make_gaussian_lowpass(config.J, config.image_size, config.lowpass_sigma);
  for (int s : scales)
    for (int k = 0; k < num_angles; ++k)
      bank.psi.push_back(make_morlet_2d(static_cast<double>(s) / config.Q, k, num_angles,
                                        config.morlet, config.image_size, span));
  return bank;
}

}  // namespace

FilterBanks build_filter_bank(const ScatteringConfig& config) {
  config.validate();
  FilterBanks banks;
  const bool haar = config.family == WaveletFamily::HaarReal;
  const auto j1 = config.resolved_j1_set();
  const auto j2 = config.layer2_scales();

  banks.layer1 = haar ? make_haar_bank(config.J, config.K1, config.image_size, j1, config.lowpass_sigma)
                      : make_morlet_bank(config, j1, config.K1, AngleSpan::FullCircle);
  normalize_frame(banks.layer1);

  banks.layer2 = haar ? make_haar_bank(config.J, config.K2, config.image_size, j2, config.lowpass_sigma)
                      : make_morlet_bank(config, j2, config.K2, AngleSpan::HalfCircle);
  // Layer-2 scales follow the j2 rule and may skip the finest octaves on purpose;
  // only the bank that sees the image has to cover every frequency.
  normalize_frame(banks.layer2, false);

  banks.angular = make_angular_bank(config.K1, config.l2_set, config.morlet);

  int deepest = config.resolved_output_stride_log2();
  for (int s : j2) deepest = std::max(deepest, config.stride_log2(s));
  banks.layer1.prepare_resolutions(deepest);
  banks.layer2.prepare_resolutions(deepest);
  return banks;
}

}  // namespace scatnet
