/// Python bindings: a thin numpy-facing layer over the core library.
/// Matrices arrive as 2-D arrays, vectors as 1-D arrays; verdict-shaped
/// results come back as plain dicts with string status tokens. Indices
/// in returned data are 0-based.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "urt/certificates.hpp"
#include "urt/mappings.hpp"
#include "urt/regions.hpp"
#include "urt/scenario.hpp"
#include "urt/spectral.hpp"
#include "urt/sumrate.hpp"

namespace py = pybind11;

namespace {

urt::AffineInterferenceModel make_model(const urt::Matrix& M, const urt::Vector& u) {
  urt::AffineInterferenceModel model;
  model.M = M;
  model.u = u;
  model.validate();
  return model;
}

urt::PolyhedralMonotoneNorm make_norm(const urt::Matrix& generators) {
  return urt::PolyhedralMonotoneNorm(generators);
}

std::optional<urt::PolyhedralMonotoneNorm> make_opt_norm(
    const std::optional<urt::Matrix>& generators) {
  if (!generators) return std::nullopt;
  return make_norm(*generators);
}

urt::RegionSpace parse_space(const std::string& space) {
  if (space == "sinr") return urt::RegionSpace::Sinr;
  if (space == "rate") return urt::RegionSpace::Rate;
  throw std::invalid_argument("space must be 'sinr' or 'rate'");
}

std::string membership_token(urt::Membership m) {
  switch (m) {
    case urt::Membership::Interior: return "interior";
    case urt::Membership::Boundary: return "boundary";
    case urt::Membership::Exterior: return "exterior";
  }
  return "unknown";
}

py::dict certificate_dict(const urt::CertificateReport& report) {
  py::dict out;
  out["matrices_tested"] = report.matrices_tested;
  py::list verdicts;
  for (const urt::MatrixVerdict& v : report.verdicts) {
    py::dict one;
    one["label"] = v.label;
    one["inverse_z"] = v.inverse_z;
    if (v.off_diag_max) one["off_diag_max"] = *v.off_diag_max;
    verdicts.append(one);
  }
  out["verdicts"] = verdicts;
  out["failing_pairs"] = report.failing_pairs;
  switch (report.overall) {
    case urt::CertificateVerdict::ZCompatibleUnconstrained:
      out["overall"] = "z_compatible_unconstrained";
      break;
    case urt::CertificateVerdict::ZCompatibleConstrained:
      out["overall"] = "z_compatible_constrained";
      break;
    case urt::CertificateVerdict::NotCertified:
      out["overall"] = "not_certified";
      break;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_urt, m) {
  m.doc() = "Utility-region toolkit: interference mappings, nonlinear spectral "
            "radii, convexity certificates, and sum-rate optimization.";

  m.def(
      "norm_eval",
      [](const urt::Matrix& generators, const urt::Vector& x) {
        return make_norm(generators).evaluate(x);
      },
      py::arg("generators"), py::arg("x"),
      "Polyhedral monotone norm max_k generators[k] . |x|.");

  m.def(
      "radius",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         const urt::Vector& s) {
        return urt::spectral_radius_scaled(
            urt::InterferenceMapping::affine(make_model(M, u)), make_norm(generators), s);
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("s"),
      "Spectral radius of the scaled norm-augmented mapping, g(s).");

  m.def(
      "eigenpair",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators) {
        const urt::EigenResult r = urt::conditional_eigenpair(
            urt::InterferenceMapping::affine(make_model(M, u)), make_norm(generators));
        return py::make_tuple(r.vector, r.value);
      },
      py::arg("M"), py::arg("u"), py::arg("generators"),
      "Conditional eigenpair (vector, value) of the norm-augmented mapping.");

  m.def(
      "spectral_radius",
      [](const urt::Matrix& A) { return urt::spectral_radius_linear(A); }, py::arg("A"),
      "Classical spectral radius of a dense square matrix.");

  m.def(
      "feasible",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         const urt::Vector& s) {
        const urt::FeasibilityVerdict v = urt::feasible_under_constraint(
            urt::InterferenceMapping::affine(make_model(M, u)), make_norm(generators), s);
        py::dict out;
        switch (v.status) {
          case urt::Feasibility::FeasibleInterior: out["status"] = "feasible_interior"; break;
          case urt::Feasibility::FeasibleBoundary: out["status"] = "feasible_boundary"; break;
          case urt::Feasibility::Infeasible: out["status"] = "infeasible"; break;
        }
        out["spectral_radius"] = v.spectral_radius;
        out["power"] = v.power ? py::cast(*v.power) : py::none();
        return out;
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("s"),
      "Feasibility of the SINR target s under the budget norm.");

  m.def(
      "sinr_membership",
      [](const urt::Matrix& M, const urt::Vector& u,
         const std::optional<urt::Matrix>& generators, const urt::Vector& s) {
        urt::RegionQuery q{urt::InterferenceMapping::affine(make_model(M, u)),
                           make_opt_norm(generators), urt::RegionSpace::Sinr};
        return membership_token(urt::sinr_membership(q, s).status);
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("s"),
      "SINR-region membership token; generators=None queries the unconstrained region.");

  m.def(
      "rate_membership",
      [](const urt::Matrix& M, const urt::Vector& u,
         const std::optional<urt::Matrix>& generators, const urt::Vector& r) {
        urt::RegionQuery q{urt::InterferenceMapping::affine(make_model(M, u)),
                           make_opt_norm(generators), urt::RegionSpace::Rate};
        return membership_token(urt::rate_membership(q, r).status);
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("r"),
      "Rate-region membership token (rates in nats).");

  m.def(
      "radial_boundary",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         const urt::Vector& direction, const std::string& space) {
        urt::RegionQuery q{urt::InterferenceMapping::affine(make_model(M, u)),
                           make_norm(generators), parse_space(space)};
        const urt::RadialBoundaryResult r = urt::radial_boundary(q, direction);
        py::dict out;
        out["t_star"] = r.t_star;
        out["sinr"] = r.sinr;
        out["rate"] = r.rate;
        out["radius_check"] = r.radius_check;
        out["power"] = r.power ? py::cast(*r.power) : py::none();
        return out;
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("direction"),
      py::arg("space") = "sinr",
      "Boundary point t* . direction along a positive direction.");

  m.def(
      "sample_boundary",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         int count, std::uint64_t seed, int threads) {
        const auto cloud = urt::sample_pareto_cloud(
            urt::InterferenceMapping::affine(make_model(M, u)), make_norm(generators),
            count, seed, threads);
        const Eigen::Index n = M.rows();
        urt::Matrix power(cloud.size(), n), sinr(cloud.size(), n), rate(cloud.size(), n);
        urt::Vector rho(static_cast<Eigen::Index>(cloud.size()));
        for (std::size_t i = 0; i < cloud.size(); ++i) {
          const auto row = static_cast<Eigen::Index>(i);
          power.row(row) = cloud[i].power.transpose();
          sinr.row(row) = cloud[i].sinr.transpose();
          rate.row(row) = cloud[i].rate.transpose();
          rho(row) = cloud[i].radius_check;
        }
        py::dict out;
        out["power"] = power;
        out["sinr"] = sinr;
        out["rate"] = rate;
        out["rho"] = rho;
        return out;
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("count"),
      py::arg("seed") = 7, py::arg("threads") = 0,
      "Weak-Pareto boundary cloud as stacked arrays (one row per point).");

  m.def(
      "convexity_probe",
      [](const urt::Matrix& M, const urt::Vector& u,
         const std::optional<urt::Matrix>& generators, int trials, std::uint64_t seed,
         const std::string& space, int threads) {
        urt::RegionQuery q{urt::InterferenceMapping::affine(make_model(M, u)),
                           make_opt_norm(generators), parse_space(space)};
        const urt::ConvexityProbeReport r =
            urt::midpoint_convexity_probe(q, trials, seed, 1e-9, threads);
        py::dict out;
        out["trials"] = r.trials;
        out["violations"] = r.violations;
        out["worst_margin"] = r.worst_margin;
        return out;
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("trials"),
      py::arg("seed") = 11, py::arg("space") = "sinr", py::arg("threads") = 0,
      "Midpoint convexity probe: counts exterior midpoints of random segment pairs.");

  m.def(
      "is_inverse_z",
      [](const urt::Matrix& A) { return urt::is_inverse_z(A); }, py::arg("A"),
      "True when the nonnegative matrix has a Z-matrix inverse.");

  m.def(
      "det2_screen",
      [](const urt::Matrix& A) { return urt::det2_screen(A); }, py::arg("A"),
      "0-based pairs (i, j) whose 2x2 principal minor is nonpositive.");

  m.def(
      "zcompat",
      [](const urt::Matrix& M, const urt::Vector& u,
         const std::optional<urt::Matrix>& generators) {
        return certificate_dict(
            urt::zcompat_certificate(make_model(M, u), make_opt_norm(generators)));
      },
      py::arg("M"), py::arg("u"), py::arg("generators") = py::none(),
      "Convexity certificate report as a dict.");

  m.def(
      "min_shift",
      [](const urt::Matrix& M, const urt::Vector& u,
         const std::optional<urt::Matrix>& generators) {
        return urt::min_self_interference_shift(make_model(M, u), make_opt_norm(generators));
      },
      py::arg("M"), py::arg("u"), py::arg("generators") = py::none(),
      "Smallest diagonal shift alpha making the certificate pass.");

  m.def(
      "conjecture",
      [](const urt::Matrix& M, const urt::Vector& x1, const urt::Vector& x2, double alpha) {
        const urt::ConjectureReport r = urt::conjecture_check(M, x1, x2, alpha);
        py::dict out;
        out["sym_psd"] = r.sym_psd;
        out["lhs"] = r.lhs;
        out["rhs"] = r.rhs;
        out["quasiconvexity_violated"] = r.quasiconvexity_violated;
        return out;
      },
      py::arg("M"), py::arg("x1"), py::arg("x2"), py::arg("alpha"),
      "Quasiconvexity check of v -> rho(diag(v) M) on the segment [x1, x2].");

  m.def(
      "sumrate",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         const urt::Vector& weights, int starts, std::uint64_t seed) {
        urt::SumRateOptions options;
        options.starts = starts;
        options.seed = seed;
        const urt::SumRateSolution sol = urt::maximize_weighted_sumrate(
            make_model(M, u), make_norm(generators), weights, options);
        py::dict out;
        out["rates"] = sol.rates;
        out["value"] = sol.value;
        out["power"] = sol.power ? py::cast(*sol.power) : py::none();
        out["boundary_residual"] = sol.boundary_residual;
        out["certified_convex"] = sol.certified_convex;
        return out;
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("weights"),
      py::arg("starts") = 8, py::arg("seed") = urt::SumRateOptions{}.seed,
      "Weighted sum-rate maximization over the constrained rate region.");

  m.def(
      "recover_power",
      [](const urt::Matrix& M, const urt::Vector& u, const urt::Matrix& generators,
         const urt::Vector& rates) {
        return urt::recover_power(urt::InterferenceMapping::affine(make_model(M, u)),
                                  make_norm(generators), rates);
      },
      py::arg("M"), py::arg("u"), py::arg("generators"), py::arg("rates"),
      "Power allocation attaining strictly positive rates (nats).");

  m.def(
      "generate_scenario",
      [](std::uint64_t seed, int users, int aps, int antennas, int aps_per_user,
         int realizations, double pmax, double area_side, double noise_power,
         double estimation_noise) {
        urt::ScenarioConfig cfg;
        cfg.seed = seed;
        cfg.num_users = users;
        cfg.num_aps = aps;
        cfg.antennas_per_ap = antennas;
        cfg.aps_per_user = aps_per_user;
        cfg.num_realizations = realizations;
        cfg.p_max = pmax;
        cfg.area_side = area_side;
        cfg.channel.noise_power_w = noise_power;
        cfg.estimation_noise_fraction = estimation_noise;
        const urt::Scenario s = urt::generate(cfg);
        const urt::AffineInterferenceModel model = urt::to_affine_model(s);
        py::dict out;
        out["M"] = model.M;
        out["u"] = model.u;
        out["b"] = *model.b;
        out["C"] = *model.C;
        out["sigma"] = *model.sigma;
        out["generators"] = urt::power_constraint_norm(cfg).generators();
        out["ap_positions"] = s.ap_positions;
        out["user_positions"] = s.user_positions;
        out["assignment"] = s.assignment;
        return out;
      },
      py::arg("seed") = 1, py::arg("users") = 3, py::arg("aps") = 4,
      py::arg("antennas") = 2, py::arg("aps_per_user") = 2, py::arg("realizations") = 100,
      py::arg("pmax") = 0.2, py::arg("area_side") = 100.0, py::arg("noise_power") = 1e-10,
      py::arg("estimation_noise") = 0.0,
      "Generate a synthetic deployment and reduce it to (M, u) plus the budget norm.");
}
