/// Command-line front end: scenario generation and reduction, convexity
/// certificates, region queries, boundary sampling, sum-rate solving,
/// and bundled reference datasets.
///
/// Exit codes: 0 = success (negative verdicts such as "infeasible" or
/// "not_certified" are still successes), 1 = domain error (bad input
/// files, non-convergence), 2 = usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "urt/certificates.hpp"
#include "urt/errors.hpp"
#include "urt/io.hpp"
#include "urt/mappings.hpp"
#include "urt/parallel.hpp"
#include "urt/regions.hpp"
#include "urt/scenario.hpp"
#include "urt/spectral.hpp"
#include "urt/sumrate.hpp"

namespace {

using urt::io::format_number;
using json = nlohmann::json;

urt::Vector parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(token, &pos));
      if (pos != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": cannot parse '" + token + "' as a number");
    }
  }
  if (values.empty()) throw std::invalid_argument(flag + ": empty list");
  return Eigen::Map<urt::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string join_numbers(const urt::Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_number(v(i));
  }
  return out;
}

void emit(const std::optional<std::string>& out_path, const json& j) {
  if (out_path) {
    urt::io::save_json_file(*out_path, j);
    std::cout << "out=" << *out_path << "\n";
  }
}

std::string feasibility_token(urt::Feasibility f) {
  switch (f) {
    case urt::Feasibility::FeasibleInterior: return "feasible_interior";
    case urt::Feasibility::FeasibleBoundary: return "feasible_boundary";
    case urt::Feasibility::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::string membership_token(urt::Membership m) {
  switch (m) {
    case urt::Membership::Interior: return "interior";
    case urt::Membership::Boundary: return "boundary";
    case urt::Membership::Exterior: return "exterior";
  }
  return "unknown";
}

std::string verdict_token(urt::CertificateVerdict v) {
  switch (v) {
    case urt::CertificateVerdict::ZCompatibleUnconstrained:
      return "z_compatible_unconstrained";
    case urt::CertificateVerdict::ZCompatibleConstrained:
      return "z_compatible_constrained";
    case urt::CertificateVerdict::NotCertified: return "not_certified";
  }
  return "unknown";
}

std::string reason_token(urt::InverseZReason r) {
  switch (r) {
    case urt::InverseZReason::Ok: return "ok";
    case urt::InverseZReason::ZeroDiagonal: return "nonpositive_diagonal";
    case urt::InverseZReason::Singular: return "singular";
    case urt::InverseZReason::PositiveOffDiagonal: return "positive_off_diagonal";
  }
  return "unknown";
}

/// Bundled datasets for one-command reproduction of the published
/// examples (a 2-user model under dominant cross interference and a
/// 3-user model whose (1,3) pair breaks the certificate).
urt::AffineInterferenceModel builtin_model(const std::string& name) {
  if (name == "dominant2") {
    urt::AffineInterferenceModel model;
    model.M.resize(2, 2);
    model.M << 2.0, 10.0, 0.1, 1.0;
    model.u = urt::Vector::Constant(2, 1.0);
    return model;
  }
  if (name == "uncertified3") {
    urt::AffineInterferenceModel model;
    model.M.resize(3, 3);
    model.M << 0.34, 1.4e-4, 9.4e-2,
               5.8e-2, 0.44, 4.3e-2,
               3.4, 7.4e-4, 0.5;
    model.u = urt::Vector::Constant(3, 1.0);
    return model;
  }
  throw std::invalid_argument("--builtin-paper: unknown dataset '" + name +
                              "' (expected dominant2 or uncertified3)");
}

struct ModelArgs {
  std::string model_path;
  std::string norm_path;
  std::string builtin;

  urt::AffineInterferenceModel model() const {
    if (!builtin.empty()) {
      if (!model_path.empty()) {
        throw std::invalid_argument("--model and --builtin-paper are mutually exclusive");
      }
      return builtin_model(builtin);
    }
    if (model_path.empty()) throw std::invalid_argument("--model is required");
    return urt::io::load_model(model_path);
  }

  std::optional<urt::PolyhedralMonotoneNorm> norm() const {
    if (norm_path.empty()) return std::nullopt;
    return urt::io::load_norm(norm_path);
  }
};

void add_model_options(CLI::App* cmd, ModelArgs& args, bool with_builtin = false) {
  cmd->add_option("--model", args.model_path, "Model JSON file");
  cmd->add_option("--norm", args.norm_path, "Norm JSON file (generators)");
  if (with_builtin) {
    cmd->add_option("--builtin-paper", args.builtin,
                    "Bundled dataset: dominant2 | uncertified3");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utility-region toolkit: interference mappings, spectral radii,\n"
               "convexity certificates, and sum-rate optimization"};
  app.require_subcommand(1);

  std::optional<std::string> out_path;
  auto add_out = [&out_path](CLI::App* cmd) {
    out_path.reset();
    cmd->add_option("--out", out_path, "Write the result to this file");
  };

  // ---- scenario gen / scenario reduce -------------------------------
  CLI::App* scenario = app.add_subcommand("scenario", "Synthetic network deployments");
  scenario->require_subcommand(1);

  CLI::App* gen = scenario->add_subcommand("gen", "Generate a deployment");
  {
    static std::string config_path;
    static urt::ScenarioConfig knobs;
    static bool store_channels = false;
    static std::optional<std::string> gen_out;
    gen->add_option("--config", config_path, "Scenario config JSON file");
    gen->add_option("--seed", knobs.seed, "RNG seed");
    gen->add_option("--users", knobs.num_users, "Number of users");
    gen->add_option("--aps", knobs.num_aps, "Number of access points");
    gen->add_option("--antennas", knobs.antennas_per_ap, "Antennas per access point");
    gen->add_option("--aps-per-user", knobs.aps_per_user, "Service-set size");
    gen->add_option("--realizations", knobs.num_realizations, "Fading realizations");
    gen->add_option("--pmax", knobs.p_max, "Per-user power budget (W)");
    gen->add_option("--area-side", knobs.area_side, "Deployment square side (m)");
    gen->add_option("--noise-power", knobs.channel.noise_power_w, "Noise power (W)");
    gen->add_option("--estimation-noise", knobs.estimation_noise_fraction,
                    "Fraction of estimate energy replaced by noise");
    gen->add_flag("--store-channels", store_channels, "Keep raw fading in the output");
    gen->add_option("--out", gen_out, "Write the scenario JSON to this file");
    gen->callback([gen]() {
      urt::ScenarioConfig cfg;
      if (!config_path.empty()) cfg = urt::io::load_scenario_config(config_path);
      auto override_if = [&](const char* flag, auto member) {
        if (gen->count(flag)) cfg.*member = knobs.*member;
      };
      override_if("--seed", &urt::ScenarioConfig::seed);
      override_if("--users", &urt::ScenarioConfig::num_users);
      override_if("--aps", &urt::ScenarioConfig::num_aps);
      override_if("--antennas", &urt::ScenarioConfig::antennas_per_ap);
      override_if("--aps-per-user", &urt::ScenarioConfig::aps_per_user);
      override_if("--realizations", &urt::ScenarioConfig::num_realizations);
      override_if("--pmax", &urt::ScenarioConfig::p_max);
      override_if("--area-side", &urt::ScenarioConfig::area_side);
      override_if("--estimation-noise", &urt::ScenarioConfig::estimation_noise_fraction);
      if (gen->count("--noise-power")) cfg.channel.noise_power_w = knobs.channel.noise_power_w;

      const urt::Scenario s = urt::generate(cfg, store_channels);
      const json j = urt::io::scenario_to_json(s);
      if (gen_out) {
        urt::io::save_json_file(*gen_out, j);
        std::cout << "users=" << cfg.num_users << " aps=" << cfg.num_aps
                  << " realizations=" << cfg.num_realizations << " seed=" << cfg.seed
                  << "\n";
        std::cout << "out=" << *gen_out << "\n";
      } else {
        std::cout << j.dump(2) << "\n";
      }
    });
  }

  CLI::App* reduce = scenario->add_subcommand("reduce", "Reduce a deployment to a model");
  {
    static std::string in_path;
    static std::optional<std::string> model_out;
    static std::optional<std::string> norm_out;
    reduce->add_option("--in", in_path, "Scenario JSON file")->required();
    reduce->add_option("--out", model_out, "Write the model JSON to this file");
    reduce->add_option("--norm-out", norm_out, "Write the budget norm JSON to this file");
    reduce->callback([]() {
      const urt::Scenario s = urt::io::load_scenario(in_path);
      const urt::AffineInterferenceModel model = urt::to_affine_model(s);
      const json j = urt::io::model_to_json(model);
      if (norm_out) {
        urt::io::save_json_file(*norm_out,
                                urt::io::norm_to_json(urt::power_constraint_norm(s.config)));
        std::cout << "norm_out=" << *norm_out << "\n";
      }
      if (model_out) {
        urt::io::save_json_file(*model_out, j);
        std::cout << "users=" << model.dimension() << "\n";
        std::cout << "out=" << *model_out << "\n";
      } else {
        std::cout << j.dump(2) << "\n";
      }
    });
  }

  // ---- check-zcompat ------------------------------------------------
  CLI::App* zc = app.add_subcommand("check-zcompat", "Convexity certificate for a model");
  {
    static ModelArgs args;
    static double tol = 1e-9;
    args = {};
    add_model_options(zc, args, true);
    zc->add_option("--tol", tol, "Certificate tolerance");
    add_out(zc);
    zc->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      const auto norm = args.norm();
      const urt::CertificateReport report = urt::zcompat_certificate(model, norm, tol);
      for (const urt::MatrixVerdict& v : report.verdicts) {
        std::cout << "matrix " << v.label << ": inverse_z="
                  << (v.inverse_z ? "true" : "false") << " reason=" << reason_token(v.reason);
        if (v.off_diag_max) std::cout << " off_diag_max=" << format_number(*v.off_diag_max);
        std::cout << "\n";
      }
      if (report.failing_pairs.empty()) {
        std::cout << "failing_pairs=none\n";
      } else {
        std::cout << "failing_pairs=";
        for (std::size_t i = 0; i < report.failing_pairs.size(); ++i) {
          const auto& [a, b] = report.failing_pairs[i];
          std::cout << (i ? " " : "") << "(" << a + 1 << "," << b + 1 << ")";
        }
        std::cout << "\n";
      }
      std::cout << "overall=" << verdict_token(report.overall) << "\n";
      emit(out_path, urt::io::certificate_to_json(report));
    });
  }

  // ---- radius -------------------------------------------------------
  CLI::App* radius = app.add_subcommand(
      "radius", "Spectral radius of the scaled (norm-augmented) mapping at an SINR point");
  {
    static ModelArgs args;
    static std::string sinr_text;
    args = {};
    add_model_options(radius, args);
    radius->add_option("--sinr", sinr_text, "Target SINRs s1,s2,...")->required();
    add_out(radius);
    radius->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      const auto norm = args.norm();
      const urt::Vector s = parse_number_list(sinr_text, "--sinr");
      const urt::InterferenceMapping T = urt::InterferenceMapping::affine(model);
      const double rho = norm ? urt::spectral_radius_scaled(T, *norm, s)
                              : urt::asymptotic_radius(T.scaled(s));
      std::cout << "rho=" << format_number(rho) << "\n";
      emit(out_path, json{{"rho", rho}});
    });
  }

  // ---- feasible -----------------------------------------------------
  CLI::App* feasible = app.add_subcommand("feasible", "Feasibility of an SINR target");
  {
    static ModelArgs args;
    static std::string sinr_text;
    static double cls_tol = urt::kClassifyTol;
    args = {};
    add_model_options(feasible, args);
    feasible->add_option("--sinr", sinr_text, "Target SINRs s1,s2,...")->required();
    feasible->add_option("--tol", cls_tol, "Classification tolerance against 1");
    add_out(feasible);
    feasible->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      const auto norm = args.norm();
      const urt::Vector s = parse_number_list(sinr_text, "--sinr");
      const urt::InterferenceMapping T = urt::InterferenceMapping::affine(model);
      urt::FeasibilityVerdict verdict;
      if (norm) {
        verdict = urt::feasible_under_constraint(T, *norm, s, cls_tol);
      } else {
        // Without a budget the region is open: a target is feasible
        // exactly when the scaled mapping still has a fixed point.
        const urt::FixedPointResult fp = urt::fixed_point(T.scaled(s));
        verdict.spectral_radius = fp.asymptotic_radius;
        verdict.status = fp.power ? urt::Feasibility::FeasibleInterior
                                  : urt::Feasibility::Infeasible;
        verdict.power = fp.power;
      }
      std::cout << "status=" << feasibility_token(verdict.status) << "\n";
      std::cout << "spectral_radius=" << format_number(verdict.spectral_radius) << "\n";
      if (verdict.power) std::cout << "power=" << join_numbers(*verdict.power) << "\n";
      emit(out_path, urt::io::verdict_to_json(verdict));
    });
  }

  // ---- rate-member --------------------------------------------------
  CLI::App* member = app.add_subcommand("rate-member", "Rate-region membership");
  {
    static ModelArgs args;
    static std::string rate_text;
    static double tol = 1e-9;
    args = {};
    add_model_options(member, args);
    member->add_option("--rate", rate_text, "Rates r1,r2,... (nats)")->required();
    member->add_option("--tol", tol, "Boundary band tolerance");
    add_out(member);
    member->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      urt::RegionQuery query{urt::InterferenceMapping::affine(model), args.norm(),
                             urt::RegionSpace::Rate};
      const urt::Vector r = parse_number_list(rate_text, "--rate");
      const urt::MembershipResult res = urt::rate_membership(query, r, tol);
      std::cout << "status=" << membership_token(res.status) << "\n";
      std::cout << "spectral_radius=" << format_number(res.spectral_radius) << "\n";
      std::cout << "achievable=" << (res.achievable ? "true" : "false") << "\n";
      emit(out_path, urt::io::membership_to_json(res));
    });
  }

  // ---- pareto-sample --------------------------------------------------
  CLI::App* sample = app.add_subcommand("pareto-sample", "Sample the weak Pareto boundary");
  {
    static ModelArgs args;
    static int count = 100;
    static std::uint64_t seed = 7;
    static int threads = 0;
    static std::optional<std::string> csv_out;
    args = {};
    add_model_options(sample, args);
    sample->add_option("--count", count, "Number of boundary points")
        ->check(CLI::NonNegativeNumber);
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--threads", threads,
                       "Worker threads (0 = URT_THREADS or hardware)");
    sample->add_option("--out", csv_out, "Write the CSV to this file");
    sample->callback([]() {
      const urt::AffineInterferenceModel model = args.model();
      const auto norm = args.norm();
      if (!norm) throw std::invalid_argument("--norm is required for boundary sampling");
      const urt::InterferenceMapping T = urt::InterferenceMapping::affine(model);
      const auto cloud = urt::sample_pareto_cloud(T, *norm, count, seed, threads);
      if (csv_out) {
        std::ofstream out(*csv_out);
        if (!out) throw std::invalid_argument("cannot open '" + *csv_out + "' for writing");
        urt::io::write_cloud_csv(out, cloud, model.dimension());
        std::cout << "points=" << cloud.size() << "\n";
        std::cout << "out=" << *csv_out << "\n";
      } else {
        urt::io::write_cloud_csv(std::cout, cloud, model.dimension());
      }
    });
  }

  // ---- sumrate ------------------------------------------------------
  CLI::App* sumrate = app.add_subcommand("sumrate", "Maximize the weighted sum rate");
  {
    static ModelArgs args;
    static std::string weight_text;
    static urt::SumRateOptions options;
    args = {};
    options = {};
    add_model_options(sumrate, args);
    sumrate->add_option("--weights", weight_text, "Weights w1,w2,...")->required();
    sumrate->add_option("--starts", options.starts, "Multi-start count");
    sumrate->add_option("--seed", options.seed, "Multi-start seed");
    add_out(sumrate);
    sumrate->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      const auto norm = args.norm();
      if (!norm) throw std::invalid_argument("--norm is required for sum-rate solving");
      const urt::Vector w = parse_number_list(weight_text, "--weights");
      const urt::SumRateSolution sol = urt::maximize_weighted_sumrate(model, *norm, w, options);
      std::cout << "value=" << format_number(sol.value) << "\n";
      std::cout << "rates=" << join_numbers(sol.rates) << "\n";
      if (sol.power) std::cout << "power=" << join_numbers(*sol.power) << "\n";
      std::cout << "boundary_residual=" << format_number(sol.boundary_residual) << "\n";
      std::cout << "certified_convex=" << (sol.certified_convex ? "true" : "false") << "\n";
      emit(out_path, urt::io::solution_to_json(sol));
    });
  }

  // ---- shift-min ----------------------------------------------------
  CLI::App* shift = app.add_subcommand(
      "shift-min", "Minimal self-interference shift reaching the certificate");
  {
    static ModelArgs args;
    static double tol = 1e-6;
    args = {};
    add_model_options(shift, args);
    shift->add_option("--tol", tol, "Relative bisection tolerance");
    add_out(shift);
    shift->callback([&out_path]() {
      const urt::AffineInterferenceModel model = args.model();
      const double alpha = urt::min_self_interference_shift(model, args.norm(), tol);
      std::cout << "alpha_star=" << format_number(alpha) << "\n";
      emit(out_path, json{{"alpha_star", alpha}});
    });
  }

  // ---- conjecture ---------------------------------------------------
  CLI::App* conjecture = app.add_subcommand(
      "conjecture", "Quasiconvexity check of v -> rho(diag(v) M) on a segment");
  {
    static bool builtin = false;
    static std::string model_path, x1_text, x2_text;
    static double alpha = 0.5;
    static double tol = 1e-9;
    conjecture->add_flag("--builtin-paper", builtin,
                         "Use the bundled counterexample data");
    conjecture->add_option("--model", model_path, "Model JSON file (its M is used)");
    conjecture->add_option("--x1", x1_text, "First endpoint v1,v2,...");
    conjecture->add_option("--x2", x2_text, "Second endpoint v1,v2,...");
    conjecture->add_option("--alpha", alpha, "Combination weight in (0,1)");
    conjecture->add_option("--tol", tol, "Comparison tolerance");
    add_out(conjecture);
    conjecture->callback([&out_path]() {
      urt::Matrix M;
      urt::Vector x1, x2;
      double a = alpha;
      if (builtin) {
        M.resize(3, 3);
        M << 11, 10, 1, 1, 11, 10, 10, 10, 10;
        x1 = urt::Vector(3);
        x1 << 0.5, 0.1, 1.0;
        x2 = urt::Vector::Constant(3, 0.5);
        a = 0.9;
      } else {
        if (model_path.empty() || x1_text.empty() || x2_text.empty()) {
          throw std::invalid_argument(
              "conjecture needs --model, --x1 and --x2 (or --builtin-paper)");
        }
        M = urt::io::load_model(model_path).M;
        x1 = parse_number_list(x1_text, "--x1");
        x2 = parse_number_list(x2_text, "--x2");
      }
      const urt::ConjectureReport report = urt::conjecture_check(M, x1, x2, a, tol);
      std::cout << "sym_psd=" << (report.sym_psd ? "true" : "false") << "\n";
      std::cout << "lhs=" << format_number(report.lhs) << "\n";
      std::cout << "rhs=" << format_number(report.rhs) << "\n";
      std::cout << "quasiconvexity_violated="
                << (report.quasiconvexity_violated ? "true" : "false") << "\n";
      emit(out_path, urt::io::conjecture_to_json(report));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const urt::NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (residual=" << format_number(e.residual)
              << " iterations=" << e.iterations << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
