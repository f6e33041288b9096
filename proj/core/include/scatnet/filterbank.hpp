#pragma once

#include <numbers>
#include <vector>

#include "scatnet/grid.hpp"

namespace scatnet {

struct ScatteringConfig;

// Std of the mother lowpass at J = 0, pixels; phi_J has std 0.5 * 2^J.
inline constexpr double kDefaultLowpassSigma = 0.5;

/// Shape of the mother Morlet wavelet at scale j = 0.
struct MorletParams {
  double sigma = 0.55;                    // envelope std along the wave vector, pixels
  double xi = 0.8 * std::numbers::pi;     // center frequency, radians / pixel
  double slant = 0.75;                    // envelope aspect ratio (1 = isotropic)

  void validate() const;
  bool operator==(const MorletParams&) const = default;
};

enum class WaveletFamily { MorletComplex, HaarReal };

// Orientation grid: FullCircle gives theta = 2 pi k / K, HalfCircle pi k / K.
enum class AngleSpan { FullCircle, HalfCircle };

/// Frequency-domain spatial filters at full grid resolution.
///
/// Wavelets are stored per (scale position, orientation); scales are
/// sub-octave indices, the dilation being 2^(scale / Q). Copies of every
/// filter periodized onto coarser grids (frequency folding) are prepared by
/// prepare_resolutions() and looked up by the resolution's log2 factor.
class SpatialFilterBank {
 public:
  int grid_size = 0;
  int Q = 1;
  int num_angles = 0;
  AngleSpan span = AngleSpan::FullCircle;
  WaveletFamily family = WaveletFamily::MorletComplex;
  std::vector<int> scales;
  std::vector<ComplexGrid> psi;  // index: scale_pos * num_angles + k
  RealGrid phi;
  double normalization = 1.0;  // factor already applied to every wavelet
  double lower_bound = 0.0;    // min Littlewood-Paley value after normalization

  int num_scales() const { return static_cast<int>(scales.size()); }
  int scale_position(int scale) const;

  const ComplexGrid& wavelet(int scale_pos, int k) const;
  const ComplexGrid& wavelet(int scale_pos, int k, int resolution_log2) const;
  const RealGrid& lowpass(int resolution_log2 = 0) const;

  /// Multiply every filter by c (drops folded copies).
  void scale_by(double c);
  void prepare_resolutions(int max_log2);
  int prepared_resolutions() const { return static_cast<int>(folded_phi_.size()); }

 private:
  std::vector<std::vector<ComplexGrid>> folded_psi_;  // [level - 1][filter]
  std::vector<RealGrid> folded_phi_;                  // [level - 1]
};

/// One-dimensional periodic filters along the orientation axis.
struct AngularFilterBank {
  int num_angles = 0;
  std::vector<int> octaves;               // l2 values, dilation 2^l2
  std::vector<std::vector<Complex>> psi;  // one per octave, length num_angles
  std::vector<double> phi;                // uniform average 1/K
  double normalization = 1.0;

  /// Filters in path order: the wavelets by octave, then the average.
  int num_filters() const { return static_cast<int>(psi.size()) + 1; }
  std::vector<Complex> filter(int index) const;
};

struct LittlewoodPaley {
  double lower = 0.0;  // A
  double upper = 0.0;  // B
  int lower_row = 0, lower_col = 0;
  int upper_row = 0, upper_col = 0;
  RealGrid values;
};

struct FilterBanks {
  SpatialFilterBank layer1;
  AngularFilterBank angular;
  SpatialFilterBank layer2;
};

/// Normalized lower frame bound below which a bank is rejected.
inline constexpr double kMinLowerFrameBound = 0.2;

/// Morlet wavelet dilated by 2^scale_j and rotated by theta_k, sampled on the
/// N x N DFT grid. The continuous transform is aliased exactly, so the result
/// is the DFT of the sampled, periodized spatial wavelet. A multiple of the
/// envelope is subtracted so the DC coefficient vanishes.
ComplexGrid make_morlet_2d(double scale_j, int k, int num_angles, const MorletParams& params,
                           int grid_size, AngleSpan span = AngleSpan::FullCircle);

/// phi_J for a unit-integral Gaussian of std lowpass_sigma * 2^J; phi(0) = 1.
RealGrid make_gaussian_lowpass(int J, int grid_size, double lowpass_sigma = kDefaultLowpassSigma);

/// 1D Morlet filters on Z/K at dilations 2^l, normalized so that their
/// circular Littlewood-Paley sum stays <= 1, plus the uniform average.
/// Wavelets need num_angles >= 4 and 2^l < num_angles.
AngularFilterBank make_angular_bank(int num_angles, const std::vector<int>& octaves,
                                    const MorletParams& params = {});

/// Real Haar wavelets at dyadic scales j = 0..J-1 (or the given scales),
/// K = 2 (axis aligned) or K = 4 (plus diagonals), with the Gaussian phi_J.
/// Not normalized; build_filter_bank applies the frame normalization.
SpatialFilterBank make_haar_bank(int J, int num_angles, int grid_size,
                                 const std::vector<int>& scales = {},
                                 double lowpass_sigma = kDefaultLowpassSigma);

/// LP(w) = |phi(w)|^2 + 1/2 sum (|psi(w)|^2 + |psi(-w)|^2) over the grid.
LittlewoodPaley littlewood_paley_scan(const SpatialFilterBank& bank);

/// Rescales the wavelets by the largest common factor c that keeps LP <= 1
/// while phi keeps unit DC gain, so B = LP(0) = 1; records A. With
/// `require_cover`, throws DegenerateBankError if A < kMinLowerFrameBound.
void normalize_frame(SpatialFilterBank& bank, bool require_cover = true);

FilterBanks build_filter_bank(const ScatteringConfig& config);

}  // namespace scatnet
