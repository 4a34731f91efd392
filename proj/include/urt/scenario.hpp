#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "urt/mappings.hpp"

namespace urt {

/// Propagation parameters for the synthetic cell-free deployment.
/// Log-distance path loss PL(d) = ref_loss_db + 10 a log10(max(d, 1m)),
/// i.i.d. log-normal shadowing per user-AP link, Rayleigh small-scale
/// fading. Channels are noise-normalized at generation (scaled by
/// 1/sqrt(noise_power_w)), so downstream noise terms are plain
/// beamformer energies.
struct ChannelParams {
  double path_loss_exponent = 3.67;
  double ref_loss_db = 30.5;
  double shadowing_std_db = 4.0;
  double noise_power_w = 1e-10;
};

struct ScenarioConfig {
  double area_side = 100.0;      // square side, meters
  int num_aps = 4;
  int antennas_per_ap = 2;
  int num_users = 3;
  int aps_per_user = 2;          // strongest-AP service set size
  int num_realizations = 100;
  double p_max = 0.2;            // per-user power budget, watts
  std::uint64_t seed = 1;
  ChannelParams channel;
  /// Fraction of channel-estimate energy replaced by independent noise
  /// (0 = beamformers use true channels).
  double estimation_noise_fraction = 0.0;

  void validate() const;
};

/// Empirical channel statistics reduced from the fading realizations.
/// cross(k, n) = avg |h_k^H v_n|^2 for k != n (diagonal kept at zero;
/// the own-signal variance lives in self_var).
struct ScenarioMoments {
  Vector b;         // |avg h_n^H v_n|^2
  Vector self_var;  // variance of h_n^H v_n (biased, 1/R)
  Matrix cross;
  Vector noise;     // avg ||v_n||^2
};

struct Scenario {
  ScenarioConfig config;
  Matrix ap_positions;    // num_aps x 2
  Matrix user_positions;  // num_users x 2
  /// Per-user service sets: indices of the assigned APs, strongest
  /// first (ties broken toward the lower AP index).
  std::vector<std::vector<int>> assignment;
  ScenarioMoments moments;
  /// Raw fading realizations (channels[r] is (M*L) x N, column = user),
  /// retained only on request.
  std::optional<std::vector<Eigen::MatrixXcd>> channels;
};

/// Generates a deployment: uniform AP/user positions, large-scale gains,
/// per-realization fading from substreams (realization r uses substream
/// r + 1; positions and shadowing use substream 0), strongest-AP
/// assignment by average squared channel norm, maximum-ratio beamformers
/// masked to the service set, and moment reduction by deterministic
/// pairwise summation. The result is a pure function of the config.
Scenario generate(const ScenarioConfig& config, bool store_channels = false);

/// Reduces the moments to the affine model row by row: coordinate n
/// divides its own-signal variance, the cross powers received by the
/// other users' beamformers, and the beamformer energy by b_n. Raw
/// (b, C, sigma) ride along. Throws DegenerateScenario when some
/// b_n <= 0.
AffineInterferenceModel to_affine_model(const Scenario& scenario);

/// The per-user budget norm max_n p_n / p_max for this config.
PolyhedralMonotoneNorm power_constraint_norm(const ScenarioConfig& config);

}  // namespace urt
