#include "urt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace urt::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument("io: " + message);
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail("field '" + field + "' must be a number");
  return j.get<double>();
}

Vector read_vector(const json& j, const std::string& field, Eigen::Index expected = -1) {
  if (!j.is_array()) fail("field '" + field + "' must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = as_number(j[static_cast<std::size_t>(i)], field);
  }
  if (expected >= 0 && v.size() != expected) {
    fail("field '" + field + "' must have length " + std::to_string(expected));
  }
  return v;
}

/// Row-major flat layout; length fixes the square dimension.
Matrix read_square_matrix(const json& j, const std::string& field) {
  const Vector flat = read_vector(j, field);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(flat.size()))));
  if (n * n != flat.size()) fail("field '" + field + "' must have a square length");
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat(r * n + c);
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_flat_json(const Matrix& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

std::string membership_name(Membership status) {
  switch (status) {
    case Membership::Interior: return "interior";
    case Membership::Boundary: return "boundary";
    case Membership::Exterior: return "exterior";
  }
  return "unknown";
}

std::string feasibility_name(Feasibility status) {
  switch (status) {
    case Feasibility::FeasibleInterior: return "feasible_interior";
    case Feasibility::FeasibleBoundary: return "feasible_boundary";
    case Feasibility::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::string verdict_name(CertificateVerdict verdict) {
  switch (verdict) {
    case CertificateVerdict::ZCompatibleUnconstrained: return "z_compatible_unconstrained";
    case CertificateVerdict::ZCompatibleConstrained: return "z_compatible_constrained";
    case CertificateVerdict::NotCertified: return "not_certified";
  }
  return "unknown";
}

std::string reason_name(InverseZReason reason) {
  switch (reason) {
    case InverseZReason::Ok: return "ok";
    case InverseZReason::ZeroDiagonal: return "nonpositive_diagonal";
    case InverseZReason::Singular: return "singular";
    case InverseZReason::PositiveOffDiagonal: return "positive_off_diagonal";
  }
  return "unknown";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

json model_to_json(const AffineInterferenceModel& model) {
  json j;
  j["M"] = matrix_to_flat_json(model.M);
  j["u"] = vector_to_json(model.u);
  if (model.b) j["b"] = vector_to_json(*model.b);
  if (model.C) j["C"] = matrix_to_flat_json(*model.C);
  if (model.sigma) j["sigma"] = vector_to_json(*model.sigma);
  return j;
}

AffineInterferenceModel model_from_json(const json& j) {
  if (!j.is_object()) fail("model must be a JSON object");
  if (!j.contains("M")) fail("model is missing field 'M'");
  if (!j.contains("u")) fail("model is missing field 'u'");
  AffineInterferenceModel model;
  model.M = read_square_matrix(j.at("M"), "M");
  model.u = read_vector(j.at("u"), "u", model.M.rows());
  if (j.contains("b")) model.b = read_vector(j.at("b"), "b", model.M.rows());
  if (j.contains("C")) model.C = read_square_matrix(j.at("C"), "C");
  if (j.contains("sigma")) model.sigma = read_vector(j.at("sigma"), "sigma", model.M.rows());
  model.validate();
  return model;
}

json norm_to_json(const PolyhedralMonotoneNorm& norm) {
  json rows = json::array();
  const Matrix& g = norm.generators();
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    rows.push_back(vector_to_json(g.row(r).transpose()));
  }
  return json{{"generators", rows}};
}

PolyhedralMonotoneNorm norm_from_json(const json& j) {
  if (!j.is_object() || !j.contains("generators")) {
    fail("norm must be an object with field 'generators'");
  }
  const json& rows = j.at("generators");
  if (!rows.is_array() || rows.empty()) fail("field 'generators' must be a nonempty array");
  const auto k = static_cast<Eigen::Index>(rows.size());
  Vector first = read_vector(rows[0], "generators");
  Matrix g(k, first.size());
  g.row(0) = first.transpose();
  for (Eigen::Index r = 1; r < k; ++r) {
    g.row(r) = read_vector(rows[static_cast<std::size_t>(r)], "generators", first.size())
                   .transpose();
  }
  return PolyhedralMonotoneNorm(std::move(g));
}

json scenario_config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["area_side"] = cfg.area_side;
  j["num_aps"] = cfg.num_aps;
  j["antennas_per_ap"] = cfg.antennas_per_ap;
  j["num_users"] = cfg.num_users;
  j["aps_per_user"] = cfg.aps_per_user;
  j["num_realizations"] = cfg.num_realizations;
  j["p_max"] = cfg.p_max;
  j["seed"] = cfg.seed;
  j["estimation_noise_fraction"] = cfg.estimation_noise_fraction;
  j["channel"] = json{{"path_loss_exponent", cfg.channel.path_loss_exponent},
                      {"ref_loss_db", cfg.channel.ref_loss_db},
                      {"shadowing_std_db", cfg.channel.shadowing_std_db},
                      {"noise_power_w", cfg.channel.noise_power_w}};
  return j;
}

ScenarioConfig scenario_config_from_json(const json& j) {
  if (!j.is_object()) fail("scenario config must be a JSON object");
  ScenarioConfig cfg;
  auto opt_num = [&](const char* field, double& slot) {
    if (j.contains(field)) slot = as_number(j.at(field), field);
  };
  auto opt_int = [&](const char* field, int& slot) {
    if (j.contains(field)) slot = static_cast<int>(as_number(j.at(field), field));
  };
  opt_num("area_side", cfg.area_side);
  opt_int("num_aps", cfg.num_aps);
  opt_int("antennas_per_ap", cfg.antennas_per_ap);
  opt_int("num_users", cfg.num_users);
  opt_int("aps_per_user", cfg.aps_per_user);
  opt_int("num_realizations", cfg.num_realizations);
  opt_num("p_max", cfg.p_max);
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  opt_num("estimation_noise_fraction", cfg.estimation_noise_fraction);
  if (j.contains("channel")) {
    const json& c = j.at("channel");
    auto chan = [&](const char* field, double& slot) {
      if (c.contains(field)) slot = as_number(c.at(field), field);
    };
    chan("path_loss_exponent", cfg.channel.path_loss_exponent);
    chan("ref_loss_db", cfg.channel.ref_loss_db);
    chan("shadowing_std_db", cfg.channel.shadowing_std_db);
    chan("noise_power_w", cfg.channel.noise_power_w);
  }
  cfg.validate();
  return cfg;
}

json scenario_to_json(const Scenario& scenario) {
  json j;
  j["config"] = scenario_config_to_json(scenario.config);
  json aps = json::array();
  for (Eigen::Index a = 0; a < scenario.ap_positions.rows(); ++a) {
    aps.push_back(json::array({scenario.ap_positions(a, 0), scenario.ap_positions(a, 1)}));
  }
  j["ap_positions"] = aps;
  json users = json::array();
  for (Eigen::Index n = 0; n < scenario.user_positions.rows(); ++n) {
    users.push_back(
        json::array({scenario.user_positions(n, 0), scenario.user_positions(n, 1)}));
  }
  j["user_positions"] = users;
  json assign = json::array();
  for (const auto& setn : scenario.assignment) {
    json one = json::array();
    for (int a : setn) one.push_back(a + 1);  // 1-based on the wire
    assign.push_back(one);
  }
  j["assignment"] = assign;
  j["moments"] = json{{"b", vector_to_json(scenario.moments.b)},
                      {"self_var", vector_to_json(scenario.moments.self_var)},
                      {"cross", matrix_to_flat_json(scenario.moments.cross)},
                      {"noise", vector_to_json(scenario.moments.noise)}};
  if (scenario.channels) {
    // Row-major [re, im] pairs per realization; present only when the
    // generator was asked to retain raw fading.
    json reals = json::array();
    for (const Eigen::MatrixXcd& H : *scenario.channels) {
      json flat = json::array();
      for (Eigen::Index r = 0; r < H.rows(); ++r) {
        for (Eigen::Index c = 0; c < H.cols(); ++c) {
          flat.push_back(H(r, c).real());
          flat.push_back(H(r, c).imag());
        }
      }
      reals.push_back(std::move(flat));
    }
    j["channels"] = std::move(reals);
  }
  return j;
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) fail("scenario must be a JSON object");
  for (const char* field : {"config", "ap_positions", "user_positions", "assignment",
                            "moments"}) {
    if (!j.contains(field)) fail(std::string("scenario is missing field '") + field + "'");
  }
  Scenario s;
  s.config = scenario_config_from_json(j.at("config"));

  auto read_positions = [&](const json& rows, const char* field, Eigen::Index count) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != count) {
      fail(std::string("field '") + field + "' must list " + std::to_string(count) +
           " positions");
    }
    Matrix m(count, 2);
    for (Eigen::Index i = 0; i < count; ++i) {
      const Vector xy = read_vector(rows[static_cast<std::size_t>(i)], field, 2);
      m.row(i) = xy.transpose();
    }
    return m;
  };
  s.ap_positions = read_positions(j.at("ap_positions"), "ap_positions", s.config.num_aps);
  s.user_positions =
      read_positions(j.at("user_positions"), "user_positions", s.config.num_users);

  const json& assign = j.at("assignment");
  if (!assign.is_array() || static_cast<int>(assign.size()) != s.config.num_users) {
    fail("field 'assignment' must list one service set per user");
  }
  s.assignment.resize(assign.size());
  for (std::size_t n = 0; n < assign.size(); ++n) {
    const json& one = assign[n];
    if (!one.is_array() || one.empty()) fail("field 'assignment' entries must be nonempty");
    for (const json& ap : one) {
      const int idx = static_cast<int>(as_number(ap, "assignment"));
      if (idx < 1 || idx > s.config.num_aps) fail("field 'assignment' index out of range");
      s.assignment[n].push_back(idx - 1);  // wire format is 1-based
    }
  }

  const json& m = j.at("moments");
  if (!m.is_object()) fail("field 'moments' must be an object");
  ScenarioMoments& mom = s.moments;
  const Eigen::Index N = s.config.num_users;
  mom.b = read_vector(m.value("b", json::array()), "moments.b", N);
  mom.self_var = read_vector(m.value("self_var", json::array()), "moments.self_var", N);
  mom.noise = read_vector(m.value("noise", json::array()), "moments.noise", N);
  mom.cross = read_square_matrix(m.value("cross", json::array()), "moments.cross");
  if (mom.cross.rows() != N) fail("field 'moments.cross' must be N x N");

  if (j.contains("channels")) {
    const json& reals = j.at("channels");
    if (!reals.is_array()) fail("field 'channels' must be an array");
    const Eigen::Index dim =
        static_cast<Eigen::Index>(s.config.num_aps) * s.config.antennas_per_ap;
    s.channels.emplace();
    for (const json& flat : reals) {
      const Vector v = read_vector(flat, "channels", 2 * dim * N);
      Eigen::MatrixXcd H(dim, N);
      Eigen::Index pos = 0;
      for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < N; ++c) {
          H(r, c) = std::complex<double>(v(pos), v(pos + 1));
          pos += 2;
        }
      }
      s.channels->push_back(std::move(H));
    }
  }
  return s;
}

json verdict_to_json(const FeasibilityVerdict& verdict) {
  json j;
  j["status"] = feasibility_name(verdict.status);
  j["spectral_radius"] = verdict.spectral_radius;
  if (verdict.power) j["power"] = vector_to_json(*verdict.power);
  return j;
}

json membership_to_json(const MembershipResult& result) {
  json j;
  j["status"] = membership_name(result.status);
  j["spectral_radius"] = result.spectral_radius;
  j["achievable"] = result.achievable;
  return j;
}

json boundary_to_json(const RadialBoundaryResult& result) {
  json j;
  j["t_star"] = result.t_star;
  j["sinr"] = vector_to_json(result.sinr);
  j["rate"] = vector_to_json(result.rate);
  j["radius_check"] = result.radius_check;
  if (result.power) j["power"] = vector_to_json(*result.power);
  return j;
}

json certificate_to_json(const CertificateReport& report) {
  json j;
  j["matrices_tested"] = report.matrices_tested;
  json mats = json::array();
  for (const MatrixVerdict& v : report.verdicts) {
    json one;
    one["label"] = v.label;
    one["inverse_z"] = v.inverse_z;
    one["reason"] = reason_name(v.reason);
    if (v.off_diag_max) one["off_diag_max"] = *v.off_diag_max;
    mats.push_back(one);
  }
  j["verdicts"] = mats;
  json pairs = json::array();
  for (const auto& [a, b] : report.failing_pairs) {
    pairs.push_back(json::array({a + 1, b + 1}));  // 1-based on the wire
  }
  j["failing_pairs"] = pairs;
  j["overall"] = verdict_name(report.overall);
  return j;
}

json conjecture_to_json(const ConjectureReport& report) {
  json j;
  j["sym_psd"] = report.sym_psd;
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["quasiconvexity_violated"] = report.quasiconvexity_violated;
  return j;
}

json solution_to_json(const SumRateSolution& solution) {
  json j;
  j["rates"] = vector_to_json(solution.rates);
  j["value"] = solution.value;
  if (solution.power) j["power"] = vector_to_json(*solution.power);
  j["boundary_residual"] = solution.boundary_residual;
  j["certified_convex"] = solution.certified_convex;
  return j;
}

json probe_to_json(const ConvexityProbeReport& report) {
  json j;
  j["trials"] = report.trials;
  j["violations"] = report.violations;
  j["worst_margin"] = report.worst_margin;
  return j;
}

void write_cloud_csv(std::ostream& os, const std::vector<BoundaryPoint>& cloud,
                     Eigen::Index dimension) {
  const Eigen::Index n = dimension;
  if (n < 1) fail("cloud dimension must be at least 1");
  for (const BoundaryPoint& pt : cloud) {
    if (pt.power.size() != n) fail("cloud point dimension does not match header");
  }
  for (Eigen::Index i = 1; i <= n; ++i) os << "p" << i << ",";
  for (Eigen::Index i = 1; i <= n; ++i) os << "s" << i << ",";
  for (Eigen::Index i = 1; i <= n; ++i) os << "r" << i << ",";
  os << "rho\n";
  for (const BoundaryPoint& pt : cloud) {
    for (Eigen::Index i = 0; i < n; ++i) os << format_number(pt.power(i)) << ",";
    for (Eigen::Index i = 0; i < n; ++i) os << format_number(pt.sinr(i)) << ",";
    for (Eigen::Index i = 0; i < n; ++i) os << format_number(pt.rate(i)) << ",";
    os << format_number(pt.radius_check) << "\n";
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

AffineInterferenceModel load_model(const std::string& path) {
  return model_from_json(load_json_file(path));
}

PolyhedralMonotoneNorm load_norm(const std::string& path) {
  return norm_from_json(load_json_file(path));
}

Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

ScenarioConfig load_scenario_config(const std::string& path) {
  return scenario_config_from_json(load_json_file(path));
}

}  // namespace urt::io
