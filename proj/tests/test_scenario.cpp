#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "urt/errors.hpp"
#include "urt/rng.hpp"
#include "urt/scenario.hpp"

namespace {

urt::ScenarioConfig small_config() {
  urt::ScenarioConfig config;
  config.area_side = 60.0;
  config.num_aps = 3;
  config.antennas_per_ap = 2;
  config.num_users = 2;
  config.aps_per_user = 2;
  config.num_realizations = 40;
  config.p_max = 0.2;
  config.seed = 11;
  return config;
}

/// Naive-sum replay of the moment reduction from stored realizations.
/// Deliberately accumulates left to right (the library reduces pairwise)
/// so the comparison exercises both orderings.
struct RecomputedMoments {
  Eigen::VectorXd b, self_var, noise;
  Eigen::MatrixXd cross;
};

RecomputedMoments recompute_moments(const urt::Scenario& scenario) {
  const auto& channels = scenario.channels.value();
  const int N = scenario.config.num_users;
  const int L = scenario.config.antennas_per_ap;
  const int R = static_cast<int>(channels.size());

  Eigen::VectorXcd mean_z = Eigen::VectorXcd::Zero(N);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(N);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(N, N);

  for (const Eigen::MatrixXcd& H : channels) {
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(H.rows(), N);
    for (int n = 0; n < N; ++n) {
      for (int a : scenario.assignment[static_cast<std::size_t>(n)]) {
        V.col(n).segment(a * L, L) = H.col(n).segment(a * L, L);
      }
    }
    for (int n = 0; n < N; ++n) {
      std::complex<double> zn{0.0, 0.0};
      for (Eigen::Index i = 0; i < H.rows(); ++i) zn += std::conj(H(i, n)) * V(i, n);
      mean_z(n) += zn;
      second(n) += std::norm(zn);
      noise(n) += V.col(n).squaredNorm();
      for (int k = 0; k < N; ++k) {
        if (k == n) continue;
        std::complex<double> zkn{0.0, 0.0};
        for (Eigen::Index i = 0; i < H.rows(); ++i) zkn += std::conj(H(i, k)) * V(i, n);
        cross(k, n) += std::norm(zkn);
      }
    }
  }

  RecomputedMoments out;
  out.b.resize(N);
  out.self_var.resize(N);
  out.noise = noise / R;
  out.cross = cross / R;
  for (int n = 0; n < N; ++n) {
    const std::complex<double> mz = mean_z(n) / static_cast<double>(R);
    out.b(n) = std::norm(mz);
    out.self_var(n) = std::max(second(n) / R - out.b(n), 0.0);
  }
  return out;
}

}  // namespace

TEST_CASE("random source replays the frozen reference streams") {
  urt::Rng raw(42);
  CHECK(raw.bits() == 13930160852258120406ULL);
  CHECK(raw.bits() == 11788048577503494824ULL);
  CHECK(raw.bits() == 13874630024467741450ULL);

  // uniform01 is pure integer arithmetic on the raw stream, so the
  // doubles must match bit for bit.
  urt::Rng uni(42);
  CHECK(uni.uniform01() == 0.75515553295453897);
  CHECK(uni.uniform01() == 0.63903139385469743);

  urt::Rng open(42);
  CHECK(open.uniform_open01() == 1.0 - 0.75515553295453897);

  CHECK(urt::mix64(0) == 16294208416658607535ULL);
  CHECK(urt::mix64(1) == 10451216379200822465ULL);
  CHECK(urt::mix64(42ULL ^ 7ULL) == 17864077645780634326ULL);

  urt::Rng sub = urt::Rng::substream(1, 3);
  CHECK(sub.uniform01() == 0.29256831403381145);

  // The transcendental conversions go through libm, so allow a few ulps.
  urt::Rng gauss(2024);
  CHECK(gauss.normal() == doctest::Approx(0.38190196815831567).epsilon(1e-15));
  CHECK(gauss.normal() == doctest::Approx(-0.39703874527460181).epsilon(1e-15));

  urt::Rng cplx(7);
  const std::complex<double> z1 = cplx.cnormal();
  CHECK(z1.real() == doctest::Approx(1.1252896436493911).epsilon(1e-15));
  CHECK(z1.imag() == doctest::Approx(-0.37109899741651659).epsilon(1e-15));
  const std::complex<double> z2 = cplx.cnormal();
  CHECK(z2.real() == doctest::Approx(0.27499611448554145).epsilon(1e-15));
  CHECK(z2.imag() == doctest::Approx(-0.22198310732424481).epsilon(1e-15));
}

TEST_CASE("uniform range helper is an affine replay of the base stream") {
  urt::Rng a(3);
  urt::Rng b(3);
  const double lo = 2.0, hi = 5.0;
  for (int i = 0; i < 32; ++i) {
    const double x = a.uniform(lo, hi);
    CHECK(x == lo + (hi - lo) * b.uniform01());
    CHECK(x >= lo);
    CHECK(x < hi);
  }
}

TEST_CASE("scenario config validation rejects nonsense") {
  auto expect_throw = [](auto mutate) {
    urt::ScenarioConfig config = small_config();
    mutate(config);
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  };
  expect_throw([](urt::ScenarioConfig& c) { c.num_users = 0; });
  expect_throw([](urt::ScenarioConfig& c) { c.num_aps = 0; });
  expect_throw([](urt::ScenarioConfig& c) { c.antennas_per_ap = 0; });
  expect_throw([](urt::ScenarioConfig& c) { c.aps_per_user = 0; });
  expect_throw([](urt::ScenarioConfig& c) { c.aps_per_user = c.num_aps + 1; });
  expect_throw([](urt::ScenarioConfig& c) { c.num_realizations = 0; });
  expect_throw([](urt::ScenarioConfig& c) { c.p_max = 0.0; });
  expect_throw([](urt::ScenarioConfig& c) { c.area_side = -1.0; });
  expect_throw([](urt::ScenarioConfig& c) { c.channel.noise_power_w = 0.0; });
  expect_throw([](urt::ScenarioConfig& c) { c.channel.path_loss_exponent = 0.0; });
  expect_throw([](urt::ScenarioConfig& c) { c.channel.shadowing_std_db = -0.5; });
  expect_throw([](urt::ScenarioConfig& c) { c.estimation_noise_fraction = 1.0; });
  expect_throw([](urt::ScenarioConfig& c) { c.estimation_noise_fraction = -0.1; });
  CHECK_NOTHROW(small_config().validate());
}

TEST_CASE("generation is a pure function of the config") {
  const urt::ScenarioConfig config = small_config();
  const urt::Scenario first = urt::generate(config, true);
  const urt::Scenario second = urt::generate(config, true);

  CHECK((first.ap_positions.array() == second.ap_positions.array()).all());
  CHECK((first.user_positions.array() == second.user_positions.array()).all());
  CHECK(first.assignment == second.assignment);
  CHECK((first.moments.b.array() == second.moments.b.array()).all());
  CHECK((first.moments.self_var.array() == second.moments.self_var.array()).all());
  CHECK((first.moments.noise.array() == second.moments.noise.array()).all());
  CHECK((first.moments.cross.array() == second.moments.cross.array()).all());
  REQUIRE(first.channels.has_value());
  REQUIRE(second.channels.has_value());
  REQUIRE(first.channels->size() == second.channels->size());
  for (std::size_t r = 0; r < first.channels->size(); ++r) {
    CHECK(((*first.channels)[r].array() == (*second.channels)[r].array()).all());
  }

  // A different seed moves every statistic.
  urt::ScenarioConfig other = config;
  other.seed = 12;
  const urt::Scenario third = urt::generate(other);
  CHECK(third.moments.b(0) != first.moments.b(0));
  CHECK_FALSE(third.channels.has_value());
}

TEST_CASE("generated scenarios have well-formed geometry and moments") {
  const urt::ScenarioConfig config = small_config();
  const urt::Scenario scenario = urt::generate(config);

  REQUIRE(scenario.ap_positions.rows() == config.num_aps);
  REQUIRE(scenario.ap_positions.cols() == 2);
  REQUIRE(scenario.user_positions.rows() == config.num_users);
  REQUIRE(scenario.user_positions.cols() == 2);
  CHECK((scenario.ap_positions.array() >= 0.0).all());
  CHECK((scenario.ap_positions.array() <= config.area_side).all());
  CHECK((scenario.user_positions.array() >= 0.0).all());
  CHECK((scenario.user_positions.array() <= config.area_side).all());

  REQUIRE(scenario.assignment.size() == static_cast<std::size_t>(config.num_users));
  for (const auto& set : scenario.assignment) {
    REQUIRE(set.size() == static_cast<std::size_t>(config.aps_per_user));
    for (int a : set) {
      CHECK(a >= 0);
      CHECK(a < config.num_aps);
    }
    std::vector<int> unique = set;
    std::sort(unique.begin(), unique.end());
    CHECK(std::adjacent_find(unique.begin(), unique.end()) == unique.end());
  }

  const urt::ScenarioMoments& m = scenario.moments;
  REQUIRE(m.b.size() == config.num_users);
  REQUIRE(m.self_var.size() == config.num_users);
  REQUIRE(m.noise.size() == config.num_users);
  REQUIRE(m.cross.rows() == config.num_users);
  REQUIRE(m.cross.cols() == config.num_users);
  CHECK((m.b.array() > 0.0).all());
  CHECK((m.noise.array() > 0.0).all());
  CHECK((m.self_var.array() >= 0.0).all());
  for (int k = 0; k < config.num_users; ++k) {
    CHECK(m.cross(k, k) == 0.0);
    for (int n = 0; n < config.num_users; ++n) {
      if (k != n) CHECK(m.cross(k, n) > 0.0);
    }
  }
}

TEST_CASE("service sets pick the strongest access points") {
  urt::ScenarioConfig config = small_config();
  config.num_aps = 4;
  config.aps_per_user = 2;
  config.num_realizations = 60;
  const urt::Scenario scenario = urt::generate(config, true);
  REQUIRE(scenario.channels.has_value());
  REQUIRE(scenario.channels->size() == static_cast<std::size_t>(config.num_realizations));
  for (const auto& H : *scenario.channels) {
    REQUIRE(H.rows() == config.num_aps * config.antennas_per_ap);
    REQUIRE(H.cols() == config.num_users);
  }

  const int L = config.antennas_per_ap;
  for (int n = 0; n < config.num_users; ++n) {
    std::vector<double> avg(static_cast<std::size_t>(config.num_aps), 0.0);
    for (const auto& H : *scenario.channels) {
      for (int a = 0; a < config.num_aps; ++a) {
        avg[static_cast<std::size_t>(a)] += H.col(n).segment(a * L, L).squaredNorm();
      }
    }
    for (double& v : avg) v /= static_cast<double>(config.num_realizations);

    const auto& set = scenario.assignment[static_cast<std::size_t>(n)];
    // Listed strongest first, and nothing left out beats anything kept.
    for (std::size_t i = 0; i + 1 < set.size(); ++i) {
      CHECK(avg[static_cast<std::size_t>(set[i])] >=
            avg[static_cast<std::size_t>(set[i + 1])] - 1e-12);
    }
    double weakest_kept = avg[static_cast<std::size_t>(set.back())];
    for (int a = 0; a < config.num_aps; ++a) {
      if (std::find(set.begin(), set.end(), a) == set.end()) {
        CHECK(avg[static_cast<std::size_t>(a)] <= weakest_kept + 1e-12);
      }
    }
  }
}

TEST_CASE("stored realizations reproduce the reduced moments") {
  const urt::Scenario scenario = urt::generate(small_config(), true);
  const RecomputedMoments ref = recompute_moments(scenario);
  const urt::ScenarioMoments& m = scenario.moments;
  const int N = scenario.config.num_users;
  for (int n = 0; n < N; ++n) {
    CHECK(m.b(n) == doctest::Approx(ref.b(n)).epsilon(1e-12));
    CHECK(m.self_var(n) == doctest::Approx(ref.self_var(n)).epsilon(1e-12));
    CHECK(m.noise(n) == doctest::Approx(ref.noise(n)).epsilon(1e-12));
    for (int k = 0; k < N; ++k) {
      if (k == n) continue;
      CHECK(m.cross(k, n) == doctest::Approx(ref.cross(k, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("interference reduction matches the per-user signal quotients") {
  const urt::Scenario scenario = urt::generate(small_config());
  const urt::AffineInterferenceModel model = urt::to_affine_model(scenario);
  const urt::ScenarioMoments& m = scenario.moments;
  const int N = scenario.config.num_users;

  Eigen::VectorXd p(N);
  for (int n = 0; n < N; ++n) p(n) = 0.7 / (1.0 + n);
  const Eigen::VectorXd t = model.M * p + model.u;
  for (int n = 0; n < N; ++n) {
    // Denominator of user n's signal quotient at power p, normalized by
    // its useful-signal coefficient: own-signal variance, then the
    // energy user n's channel leaks into every other beamformer.
    double denom = m.self_var(n) * p(n) + m.noise(n);
    for (int k = 0; k < N; ++k) {
      if (k != n) denom += m.cross(n, k) * p(k);
    }
    CHECK(t(n) == doctest::Approx(denom / m.b(n)).epsilon(1e-12));
  }

  // Raw statistics ride along unchanged.
  REQUIRE(model.b.has_value());
  REQUIRE(model.sigma.has_value());
  REQUIRE(model.C.has_value());
  CHECK((model.b->array() == m.b.array()).all());
  CHECK((model.sigma->array() == m.noise.array()).all());
}

TEST_CASE("hand-built moments reduce to the exact affine model") {
  urt::Scenario scenario;
  scenario.moments.b = testutil::vec({2.0, 1.0});
  scenario.moments.self_var = testutil::vec({0.2, 0.3});
  scenario.moments.noise = testutil::vec({0.1, 0.2});
  scenario.moments.cross = testutil::mat2(0.0, 0.5, 0.25, 0.0);

  const urt::AffineInterferenceModel model = urt::to_affine_model(scenario);
  // Every quotient divides by 1 or 2, so the results are exact doubles.
  CHECK(model.M(0, 0) == 0.1);
  CHECK(model.M(0, 1) == 0.25);
  CHECK(model.M(1, 0) == 0.25);
  CHECK(model.M(1, 1) == 0.3);
  CHECK(model.u(0) == 0.05);
  CHECK(model.u(1) == 0.2);
  REQUIRE(model.C.has_value());
  CHECK((*model.C)(0, 0) == 0.2);
  CHECK((*model.C)(1, 0) == 0.5);
  CHECK((*model.C)(0, 1) == 0.25);
  CHECK((*model.C)(1, 1) == 0.3);
}

TEST_CASE("degenerate scenarios are reported by coordinate") {
  urt::Scenario scenario;
  scenario.moments.b = testutil::vec({0.0, 1.0});
  scenario.moments.self_var = testutil::vec({0.2, 0.3});
  scenario.moments.noise = testutil::vec({0.1, 0.2});
  scenario.moments.cross = testutil::mat2(0.0, 0.5, 0.25, 0.0);
  try {
    urt::to_affine_model(scenario);
    FAIL("expected DegenerateScenario");
  } catch (const urt::DegenerateScenario& e) {
    CHECK(std::string(e.what()).find("b_1") != std::string::npos);
  }
}

TEST_CASE("estimation noise perturbs the beamformers") {
  urt::ScenarioConfig clean = small_config();
  urt::ScenarioConfig noisy = clean;
  noisy.estimation_noise_fraction = 0.3;
  const urt::Scenario a = urt::generate(clean);
  const urt::Scenario b = urt::generate(noisy);
  // Same geometry (positions come from substream 0 either way) but
  // different beamformers, hence different statistics.
  CHECK((a.ap_positions.array() == b.ap_positions.array()).all());
  CHECK((a.user_positions.array() == b.user_positions.array()).all());
  CHECK(a.moments.b(0) != b.moments.b(0));
  CHECK(a.moments.noise(0) != b.moments.noise(0));
}

TEST_CASE("halving the sample count leaves the moments near their limits") {
  urt::ScenarioConfig config;
  config.area_side = 80.0;
  config.num_aps = 2;
  config.antennas_per_ap = 1;
  config.num_users = 2;
  config.aps_per_user = 2;
  config.p_max = 0.2;
  config.seed = 5;
  config.num_realizations = 50000;
  const urt::Scenario half = urt::generate(config);
  config.num_realizations = 100000;
  const urt::Scenario full = urt::generate(config);

  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  for (int n = 0; n < 2; ++n) {
    CHECK(rel(half.moments.b(n), full.moments.b(n)) < 0.02);
    CHECK(rel(half.moments.noise(n), full.moments.noise(n)) < 0.02);
    CHECK(rel(half.moments.self_var(n), full.moments.self_var(n)) < 0.03);
    const int k = 1 - n;
    CHECK(rel(half.moments.cross(k, n), full.moments.cross(k, n)) < 0.03);
  }
}

TEST_CASE("power budget norm normalizes the full-power profile") {
  urt::ScenarioConfig config = small_config();
  config.num_users = 3;
  config.p_max = 0.2;
  const urt::PolyhedralMonotoneNorm norm = urt::power_constraint_norm(config);
  const Eigen::VectorXd full = Eigen::VectorXd::Constant(3, config.p_max);
  CHECK(norm.evaluate(full) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(norm.evaluate(testutil::vec({0.1, 0.05, 0.02})) == doctest::Approx(0.5).epsilon(1e-15));
}
