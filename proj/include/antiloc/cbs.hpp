#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "antiloc/linalg.hpp"
#include "antiloc/medium.hpp"
#include "antiloc/scatter.hpp"

namespace antiloc {

/// Final-state configurations kept in the coherent channel sum.
enum class DiagramSet {
  SigmaOnly,  ///< one atom carries the whole Zeeman transfer, the rest scatter elastically
  Full,       ///< every distribution of the transfer over the chain
};

/// Detected polarization/Zeeman channel. The probe travels along +z with
/// helicity pol_in (lab mode e_{pol_in}); light is detected along -z with
/// helicity pol_out (lab mode e_{-pol_out}).
struct ChannelSpec {
  int pol_in = +1;
  int pol_out = +1;
  HalfInt final_m;  ///< Zeeman level reached by the Raman transfer; default -F0+2
  DiagramSet diagram_set = DiagramSet::SigmaOnly;

  /// Helicity-preserving channel detecting the -F0 -> -F0+2 Raman transfer
  /// (elastic channel for F0 = 0).
  static ChannelSpec helicity_preserving(const LevelScheme& scheme,
                                         DiagramSet set = DiagramSet::SigmaOnly);

  void validate(const LevelScheme& scheme) const;

  /// Number of Zeeman quanta transferred to the atoms, final_m + F0.
  int transfer(const LevelScheme& scheme) const;
};

/// Per-atom Zeeman transfer (m_out - m_in) along a chain, in scattering order.
using Routing = std::vector<int>;

/// Chain of distinct scatterers, each starting in the stretched state.
struct ScatteringPath {
  std::vector<Vec3> atoms;
  std::vector<HalfInt> m_out;

  int order() const { return static_cast<int>(atoms.size()); }
  ScatteringPath reversed() const;
};

struct CbsOptions {
  bool external_attenuation = true;
  bool interatomic_attenuation = true;
  double r_min = 0.5;  ///< far-field cutoff between scatterers, units 1/k
  /// Routings are enumerated exhaustively up to this order and sampled above it.
  int enumerate_max_order = 3;
  /// Fault injection: wrong sign of the phase towards the detector. Only the
  /// oracle self-test sets this.
  bool flip_outgoing_phase = false;

  static CbsOptions ideal() {
    CbsOptions o;
    o.external_attenuation = false;
    o.interatomic_attenuation = false;
    return o;
  }
};

/// Ladder and crossed terms summed over the final-state configurations of a
/// chain: ladder = sum |A_d|^2 + |A_r|^2, interf = sum 2 Re(A_d conj(A_r)).
struct PairTerms {
  double ladder = 0.0;
  double interf = 0.0;
};

double angular_factor_sigma(double theta);
double angular_factor_pi(double theta);

/// Routings of `order` atoms carrying `transfer` Zeeman quanta in total whose
/// summed Zeeman energy matches the detected channel.
std::vector<Routing> channel_routings(const LevelScheme& scheme, const ChannelSpec& channel,
                                      int order, DiagramSet set);

/// Everything needed to evaluate backscattering amplitudes at one detuning.
/// Immutable after construction and safe to share between threads.
class CbsEvaluator {
 public:
  /// Calibrates the peak density to cloud.target_b for the probe mode.
  CbsEvaluator(const ScatteringModel& model, const CloudConfig& cloud, const ChannelSpec& channel,
               double delta, const CbsOptions& options = {});
  /// Uses the given peak density.
  CbsEvaluator(const ScatteringModel& model, const CloudConfig& cloud, const ChannelSpec& channel,
               double delta, double n0, const CbsOptions& options = {});

  double delta() const { return delta_; }
  double n0() const { return medium_.n0(); }
  double atom_number() const { return cloud_.atom_number(medium_.n0()); }
  const CloudConfig& cloud() const { return cloud_; }
  const ChannelSpec& channel() const { return channel_; }
  const CbsOptions& options() const { return options_; }
  const OpticalMedium& medium() const { return medium_; }
  const ScatteringModel& model() const { return model_; }
  int transfer() const { return transfer_; }

  /// Scattering tensor (units 1/k) for a Zeeman transfer out of the stretched state.
  const CMat3& tensor(int dm) const;

  /// Routings in the channel's diagram set (cached up to order 10).
  const std::vector<Routing>& routings(int order) const;

  /// Amplitude of one ordered chain into the detected mode. Throws
  /// DegeneratePath when neighbouring scatterers are closer than r_min.
  complex path_amplitude(std::span<const Vec3> atoms, std::span<const int> routing,
                         bool reversed = false) const;
  complex path_amplitude(const ScatteringPath& path) const;

  /// Upper bound on |path_amplitude| in either direction from the norms of
  /// the factors. Natural scale for comparing amplitudes of one chain.
  double path_amplitude_bound(std::span<const Vec3> atoms, std::span<const int> routing) const;

  /// Single-scattering amplitude into the detected channel (zero when the
  /// channel needs more than one scattering event).
  complex single_amplitude(const Vec3& r) const;

  PairTerms pair_contribution(const Vec3& r1, const Vec3& r2) const;
  PairTerms pair_contribution(const Vec3& r1, const Vec3& r2,
                              std::span<const Routing> routings) const;

  /// Direct/reversed sums for an arbitrary chain over the given routings.
  PairTerms chain_contribution(std::span<const Vec3> atoms,
                               std::span<const Routing> routings) const;

 private:
  void init();

  ScatteringModel model_;
  CloudConfig cloud_;
  ChannelSpec channel_;
  double delta_;
  CbsOptions options_;
  OpticalMedium medium_;
  int transfer_ = 0;
  std::vector<CMat3> tensors_;
  std::vector<std::vector<Routing>> routings_;
  CVec3 e_in_;
  CVec3 e_out_;
};

/// Free-function form of CbsEvaluator::path_amplitude.
complex path_amplitude(const ScatteringPath& path, const ChannelSpec& channel,
                       const LevelScheme& scheme, const CloudConfig& cloud, double n0,
                       double delta, const CbsOptions& options = {});

PairTerms pair_contribution(const Vec3& r1, const Vec3& r2, const ChannelSpec& channel,
                            const LevelScheme& scheme, const CloudConfig& cloud, double n0,
                            double delta, const CbsOptions& options = {});

/// Accumulated cross sections at one detuning (units 1/k^2 per unit solid angle).
struct SpectrumRecord {
  double delta = 0.0;
  double n0 = 0.0;
  double sigma_single = 0.0;
  double sigma_ladder = 0.0;  ///< orders 2..n_max
  double sigma_interf = 0.0;  ///< orders 2..n_max
  double X_EF = 0.0;
  double R2 = 0.0;  ///< interf/ladder at order 2
  double stderr_single = 0.0;
  double stderr_ladder = 0.0;
  double stderr_interf = 0.0;
  double stderr_X_EF = 0.0;
  double stderr_R2 = 0.0;
  /// Indexed by scattering order; entries 0 and 1 unused.
  std::vector<double> ladder_by_order;
  std::vector<double> interf_by_order;
  std::vector<double> stderr_ladder_by_order;
  std::vector<double> stderr_interf_by_order;
  std::uint64_t samples = 0;
  std::uint64_t resampled_paths = 0;

  /// Cauchy-Schwarz per order and non-negativity; false signals a bug.
  bool invariants_hold() const;
};

struct McSettings {
  std::uint64_t n_samples = 10000;
  int n_max_order = 2;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Samples per independent random stream; fixes the partition so results do
  /// not depend on the thread count.
  std::uint64_t block_size = 1024;
  CbsOptions options;
};

/// Monte-Carlo scan. Samples chains r1 ~ n(r), r_{i+1} drawn along a random
/// ray from r_i, and accumulates single, ladder and crossed cross sections per
/// detuning. Density is recalibrated to cloud.target_b at every detuning.
std::vector<SpectrumRecord> mc_spectrum(const ChannelSpec& channel, const LevelScheme& scheme,
                                        const CloudConfig& cloud, std::span<const double> deltas,
                                        const McSettings& settings);

/// Grid point minimizing X_EF - 1.
struct XefMinimum {
  double delta = 0.0;
  double xef = 0.0;
  std::size_t index = 0;
};
XefMinimum xef_minimum(std::span<const SpectrumRecord> records);

/// Deterministic quadrature of the order-2 ladder and crossed cross sections.
struct QuadratureNodes {
  int radial = 16;   ///< rho (or x, y) of the first atom
  int axial = 24;    ///< z of the first atom
  int distance = 32;
  int polar = 24;
  int azimuth = 16;
};
struct QuadratureResult {
  double sigma_ladder = 0.0;
  double sigma_interf = 0.0;
  double R2() const { return sigma_interf / sigma_ladder; }
};
QuadratureResult quadrature_order2(const CbsEvaluator& evaluator, const QuadratureNodes& nodes = {});

}  // namespace antiloc
