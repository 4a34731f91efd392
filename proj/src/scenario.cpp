#include "urt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "urt/errors.hpp"
#include "urt/rng.hpp"

namespace urt {

namespace {

using Complex = std::complex<double>;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

/// Deterministic pairwise reduction; independent of any later chunking
/// choices and far more stable than a running sum.
template <typename T>
T pairwise_sum(const std::vector<T>& values, std::size_t lo, std::size_t hi) {
  const std::size_t len = hi - lo;
  if (len == 0) return T{};
  if (len == 1) return values[lo];
  if (len == 2) return values[lo] + values[lo + 1];
  const std::size_t mid = lo + len / 2;
  return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

template <typename T>
T pairwise_mean(const std::vector<T>& values) {
  return pairwise_sum(values, 0, values.size()) / static_cast<double>(values.size());
}

struct LargeScale {
  Matrix ap_positions;    // M x 2
  Matrix user_positions;  // N x 2
  Matrix gain;            // N x M, noise-normalized power gains
};

LargeScale draw_large_scale(const ScenarioConfig& cfg) {
  LargeScale ls;
  Rng master = Rng::substream(cfg.seed, 0);
  ls.ap_positions.resize(cfg.num_aps, 2);
  for (int a = 0; a < cfg.num_aps; ++a) {
    ls.ap_positions(a, 0) = master.uniform(0.0, cfg.area_side);
    ls.ap_positions(a, 1) = master.uniform(0.0, cfg.area_side);
  }
  ls.user_positions.resize(cfg.num_users, 2);
  for (int n = 0; n < cfg.num_users; ++n) {
    ls.user_positions(n, 0) = master.uniform(0.0, cfg.area_side);
    ls.user_positions(n, 1) = master.uniform(0.0, cfg.area_side);
  }
  ls.gain.resize(cfg.num_users, cfg.num_aps);
  for (int n = 0; n < cfg.num_users; ++n) {
    for (int a = 0; a < cfg.num_aps; ++a) {
      const double dx = ls.user_positions(n, 0) - ls.ap_positions(a, 0);
      const double dy = ls.user_positions(n, 1) - ls.ap_positions(a, 1);
      const double dist = std::max(std::hypot(dx, dy), 1.0);  // clamp inside 1 m
      const double shadow_db = cfg.channel.shadowing_std_db * master.normal();
      const double loss_db = cfg.channel.ref_loss_db +
                             10.0 * cfg.channel.path_loss_exponent * std::log10(dist);
      // Noise-normalized power gain; downstream noise terms become
      // plain beamformer energies.
      ls.gain(n, a) =
          std::pow(10.0, (-loss_db + shadow_db) / 10.0) / cfg.channel.noise_power_w;
    }
  }
  return ls;
}

/// Draws one realization's channels (and, with estimation noise, the
/// beamformer-side estimates). Draw order is fixed: users outer, APs
/// middle, antennas inner; estimate noise follows all channels.
void draw_realization(const ScenarioConfig& cfg, const LargeScale& ls, std::uint64_t r,
                      Eigen::MatrixXcd& H, Eigen::MatrixXcd& Hest) {
  const int L = cfg.antennas_per_ap;
  Rng rng = Rng::substream(cfg.seed, r + 1);
  for (int n = 0; n < cfg.num_users; ++n) {
    for (int a = 0; a < cfg.num_aps; ++a) {
      const double amp = std::sqrt(ls.gain(n, a));
      for (int l = 0; l < L; ++l) {
        H(a * L + l, n) = amp * rng.cnormal();
      }
    }
  }
  const double tau = cfg.estimation_noise_fraction;
  if (tau == 0.0) {
    Hest = H;
    return;
  }
  const double keep = std::sqrt(1.0 - tau);
  const double add = std::sqrt(tau);
  for (int n = 0; n < cfg.num_users; ++n) {
    for (int a = 0; a < cfg.num_aps; ++a) {
      const double amp = std::sqrt(ls.gain(n, a));
      for (int l = 0; l < L; ++l) {
        Hest(a * L + l, n) = keep * H(a * L + l, n) + add * amp * rng.cnormal();
      }
    }
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  require(area_side > 0.0, "scenario config: area_side must be positive");
  require(num_aps >= 1, "scenario config: num_aps must be at least 1");
  require(antennas_per_ap >= 1, "scenario config: antennas_per_ap must be at least 1");
  require(num_users >= 1, "scenario config: num_users must be at least 1");
  require(aps_per_user >= 1 && aps_per_user <= num_aps,
          "scenario config: aps_per_user must lie in [1, num_aps]");
  require(num_realizations >= 1, "scenario config: num_realizations must be at least 1");
  require(p_max > 0.0, "scenario config: p_max must be positive");
  require(channel.path_loss_exponent > 0.0,
          "scenario config: path_loss_exponent must be positive");
  require(channel.shadowing_std_db >= 0.0,
          "scenario config: shadowing_std_db must be nonnegative");
  require(channel.noise_power_w > 0.0, "scenario config: noise_power_w must be positive");
  require(estimation_noise_fraction >= 0.0 && estimation_noise_fraction < 1.0,
          "scenario config: estimation_noise_fraction must lie in [0, 1)");
}

Scenario generate(const ScenarioConfig& config, bool store_channels) {
  config.validate();
  const int N = config.num_users;
  const int M = config.num_aps;
  const int L = config.antennas_per_ap;
  const int R = config.num_realizations;
  const int dim = M * L;

  Scenario scenario;
  scenario.config = config;

  const LargeScale ls = draw_large_scale(config);
  scenario.ap_positions = ls.ap_positions;
  scenario.user_positions = ls.user_positions;

  // Pass 1: average squared channel norms per AP decide the service
  // sets. Realizations are replayed from substreams, not stored.
  Eigen::MatrixXcd H(dim, N), Hest(dim, N);
  std::vector<std::vector<double>> norm2(
      static_cast<std::size_t>(N) * M, std::vector<double>(static_cast<std::size_t>(R)));
  for (int r = 0; r < R; ++r) {
    draw_realization(config, ls, static_cast<std::uint64_t>(r), H, Hest);
    for (int n = 0; n < N; ++n) {
      for (int a = 0; a < M; ++a) {
        norm2[static_cast<std::size_t>(n) * M + a][static_cast<std::size_t>(r)] =
            H.col(n).segment(a * L, L).squaredNorm();
      }
    }
  }
  scenario.assignment.resize(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    std::vector<int> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> avg(static_cast<std::size_t>(M));
    for (int a = 0; a < M; ++a) {
      avg[static_cast<std::size_t>(a)] =
          pairwise_mean(norm2[static_cast<std::size_t>(n) * M + a]);
    }
    // Strongest first; ties fall to the lower AP index.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return avg[static_cast<std::size_t>(a)] > avg[static_cast<std::size_t>(b)];
    });
    order.resize(static_cast<std::size_t>(config.aps_per_user));
    scenario.assignment[static_cast<std::size_t>(n)] = std::move(order);
  }

  // Pass 2: replay the same realizations, mask the estimates to the
  // service sets (maximum-ratio beamformers), and buffer the per-
  // realization statistics for pairwise reduction.
  std::vector<std::vector<Complex>> z(static_cast<std::size_t>(N),
                                      std::vector<Complex>(static_cast<std::size_t>(R)));
  std::vector<std::vector<double>> z2(static_cast<std::size_t>(N),
                                      std::vector<double>(static_cast<std::size_t>(R)));
  std::vector<std::vector<double>> cross(
      static_cast<std::size_t>(N) * N, std::vector<double>(static_cast<std::size_t>(R)));
  std::vector<std::vector<double>> v2(static_cast<std::size_t>(N),
                                      std::vector<double>(static_cast<std::size_t>(R)));
  if (store_channels) scenario.channels.emplace();

  Eigen::MatrixXcd V(dim, N);
  for (int r = 0; r < R; ++r) {
    draw_realization(config, ls, static_cast<std::uint64_t>(r), H, Hest);
    V.setZero();
    for (int n = 0; n < N; ++n) {
      for (int a : scenario.assignment[static_cast<std::size_t>(n)]) {
        V.col(n).segment(a * L, L) = Hest.col(n).segment(a * L, L);
      }
    }
    for (int n = 0; n < N; ++n) {
      const Complex zn = H.col(n).dot(V.col(n));  // conjugates the channel
      z[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] = zn;
      z2[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] = std::norm(zn);
      v2[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] = V.col(n).squaredNorm();
      for (int k = 0; k < N; ++k) {
        if (k == n) continue;
        cross[static_cast<std::size_t>(k) * N + n][static_cast<std::size_t>(r)] =
            std::norm(H.col(k).dot(V.col(n)));
      }
    }
    if (store_channels) scenario.channels->push_back(H);
  }

  ScenarioMoments& m = scenario.moments;
  m.b.resize(N);
  m.self_var.resize(N);
  m.noise.resize(N);
  m.cross = Matrix::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    const Complex mean_z = pairwise_mean(z[static_cast<std::size_t>(n)]);
    const double second = pairwise_mean(z2[static_cast<std::size_t>(n)]);
    m.b(n) = std::norm(mean_z);
    // Biased (1/R) variance; roundoff can nudge it below zero.
    m.self_var(n) = std::max(second - m.b(n), 0.0);
    m.noise(n) = pairwise_mean(v2[static_cast<std::size_t>(n)]);
    for (int k = 0; k < N; ++k) {
      if (k == n) continue;
      m.cross(k, n) = pairwise_mean(cross[static_cast<std::size_t>(k) * N + n]);
    }
  }
  return scenario;
}

AffineInterferenceModel to_affine_model(const Scenario& scenario) {
  const Eigen::Index N = scenario.moments.b.size();
  AffineInterferenceModel model;
  model.M.resize(N, N);
  model.u.resize(N);
  model.b = scenario.moments.b;
  model.sigma = scenario.moments.noise;
  Matrix C(N, N);
  for (Eigen::Index n = 0; n < N; ++n) {
    const double bn = scenario.moments.b(n);
    if (bn <= 0.0) {
      throw DegenerateScenario("scenario: useful-signal coefficient b_" +
                               std::to_string(n + 1) + " is not positive");
    }
    for (Eigen::Index k = 0; k < N; ++k) {
      // Coefficient of p_k in user n's interference: |h_n^H v_k|^2 lives
      // at cross(n, k) (rows of the moment matrix index the channel owner).
      C(k, n) = k == n ? scenario.moments.self_var(n) : scenario.moments.cross(n, k);
      model.M(n, k) = C(k, n) / bn;
    }
    model.u(n) = scenario.moments.noise(n) / bn;
  }
  model.C = std::move(C);
  model.validate();
  return model;
}

PolyhedralMonotoneNorm power_constraint_norm(const ScenarioConfig& config) {
  return PolyhedralMonotoneNorm::weighted_linf(
      Vector::Constant(config.num_users, config.p_max));
}

}  // namespace urt
