#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "urt/mappings.hpp"

using namespace testutil;
using urt::AffineInterferenceModel;
using urt::InfFamilyPiece;
using urt::InterferenceMapping;
using urt::PolyhedralMonotoneNorm;

TEST_CASE("polyhedral norm evaluates the generator maximum") {
  const auto linf = PolyhedralMonotoneNorm::linf(2);
  CHECK(linf.evaluate(vec({0.3, 0.7})) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(linf.evaluate(vec({0.3, -0.7})) == doctest::Approx(0.7).epsilon(1e-15));

  const auto l1 = PolyhedralMonotoneNorm::l1(2);
  CHECK(l1.evaluate(vec({0.3, -0.7})) == doctest::Approx(1.0).epsilon(1e-15));

  const auto budget = PolyhedralMonotoneNorm::weighted_linf(vec({0.2, 0.2, 0.2}));
  CHECK(budget.evaluate(vec({0.2, 0.1, 0.05})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(budget.generator_count() == 3);
  CHECK(budget.dimension() == 3);
}

TEST_CASE("norm construction rejects degenerate generators") {
  CHECK_THROWS_AS(PolyhedralMonotoneNorm(mat2(1.0, -0.5, 0.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(PolyhedralMonotoneNorm(mat2(1.0, 0.0, 0.0, 0.0)), std::invalid_argument);
  // Second coordinate uncovered: the formula would vanish on (0, 1).
  urt::Matrix g(2, 2);
  g << 1.0, 0.0, 2.0, 0.0;
  CHECK_THROWS_AS(PolyhedralMonotoneNorm{g}, std::invalid_argument);
  CHECK_THROWS_AS(PolyhedralMonotoneNorm(urt::Matrix(0, 2)), std::invalid_argument);
  CHECK_THROWS_AS(PolyhedralMonotoneNorm::weighted_linf(vec({1.0, 0.0})),
                  std::invalid_argument);

  const auto linf = PolyhedralMonotoneNorm::linf(2);
  CHECK_THROWS_AS(linf.evaluate(vec({1.0, 2.0, 3.0})), std::invalid_argument);
}

TEST_CASE("norm is monotone, homogeneous and positive definite") {
  urt::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.bits() % 4);
    const auto norm = random_budget_norm(rng, n);
    const Vector x = random_positive(rng, n, 0.0, 2.0);
    const Vector y = x + random_positive(rng, n, 0.0, 1.0);

    CHECK(norm.evaluate(x) <= norm.evaluate(y) + 1e-15);
    CHECK(norm.evaluate(2.0 * x) == doctest::Approx(2.0 * norm.evaluate(x)).epsilon(1e-15));
    const double pi = 3.14159265358979323846;
    CHECK(norm.evaluate(pi * x) == doctest::Approx(pi * norm.evaluate(x)).epsilon(1e-12));
    if (x.maxCoeff() > 0.0) CHECK(norm.evaluate(x) > 0.0);
  }
  CHECK(PolyhedralMonotoneNorm::linf(3).evaluate(Vector::Zero(3)) == 0.0);
}

TEST_CASE("restricted norm matches the full norm on embedded vectors") {
  const auto budget = PolyhedralMonotoneNorm::weighted_linf(vec({0.5, 2.0, 4.0}));
  const auto sub = budget.restricted({0, 2});
  const Vector q = vec({0.3, 1.1});
  CHECK(sub.evaluate(q) ==
        doctest::Approx(budget.evaluate(vec({0.3, 0.0, 1.1}))).epsilon(1e-15));

  // Generators supported only on deleted coordinates are dropped.
  const auto linf3 = PolyhedralMonotoneNorm::linf(3);
  const auto kept = linf3.restricted({1});
  CHECK(kept.generator_count() == 1);
  CHECK(kept.evaluate(vec({2.5})) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("model validation pins shapes and signs") {
  AffineInterferenceModel bad = model2();
  bad.M(0, 1) = -0.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = model2();
  bad.u(1) = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = model2();
  bad.M.resize(2, 3);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = model2();
  bad.b = vec({1.0, 2.0, 3.0});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CHECK_NOTHROW(model2().validate());
}

TEST_CASE("affine mapping evaluates M p + u") {
  const auto T = InterferenceMapping::affine(model2());
  CHECK(T.dimension() == 2);
  CHECK(T.is_affine());

  const Vector t = T.evaluate(vec({1.0, 1.0}));
  CHECK(t(0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(t(1) == doctest::Approx(0.6).epsilon(1e-15));

  const Vector a = T.evaluate_asymptotic(vec({1.0, 1.0}));
  CHECK(a(0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(a(1) == doctest::Approx(0.5).epsilon(1e-15));

  // Strictly positive at zero: the noise floor survives.
  CHECK((T.evaluate(Vector::Zero(2)).array() > 0.0).all());
  CHECK_THROWS_AS(T.evaluate(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("standard mappings are monotone and scalable") {
  urt::Rng rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.bits() % 4);
    const auto T = InterferenceMapping::affine(random_model(rng, n));
    const Vector p = random_positive(rng, n, 0.0, 2.0);
    const Vector q = p + random_positive(rng, n, 0.0, 1.0);
    const double alpha = rng.uniform(1.1, 4.0);

    CHECK(((T.evaluate(q) - T.evaluate(p)).array() >= -1e-15).all());
    // Scalability: T(alpha p) < alpha T(p) strictly for alpha > 1.
    CHECK(((alpha * T.evaluate(p) - T.evaluate(alpha * p)).array() > 0.0).all());
  }
}

TEST_CASE("norm-augmented evaluation is homogeneous and agrees on the unit sphere") {
  const auto T = InterferenceMapping::affine(model2());
  const auto norm = linf2();

  const Vector x = vec({1.0, 0.4});  // max-norm 1
  const Vector augmented = T.evaluate_norm_augmented(x, norm);
  const Vector plain = T.evaluate(x);
  CHECK((augmented - plain).cwiseAbs().maxCoeff() <= 1e-15);

  const Vector x2 = 3.0 * x;
  const Vector augmented2 = T.evaluate_norm_augmented(x2, norm);
  CHECK((augmented2 - 3.0 * augmented).cwiseAbs().maxCoeff() <= 1e-14);

  CHECK(urt::norm_eval(norm, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((urt::eval_norm_augmented(T, norm, x) - augmented).cwiseAbs().maxCoeff() == 0.0);
  CHECK((urt::eval_standard(T, x) - plain).cwiseAbs().maxCoeff() == 0.0);
  CHECK((urt::asymptotic(T).evaluate(x) - T.evaluate_asymptotic(x)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("inf-family takes the piecewise minimum") {
  std::vector<std::vector<InfFamilyPiece>> pieces(2);
  pieces[0].push_back({vec({1.0, 0.0}), 1.0, 1.0});   // p1 + 1
  pieces[0].push_back({vec({0.0, 2.0}), 2.0, 2.0});   // p2 + 1
  pieces[1].push_back({vec({0.5, 0.5}), 1.0, 1.0});   // (p1 + p2)/2 + 1
  const auto T = InterferenceMapping::inf_family(pieces);

  CHECK_FALSE(T.is_affine());
  CHECK(T.dimension() == 2);

  const Vector t = T.evaluate(vec({3.0, 1.0}));
  CHECK(t(0) == doctest::Approx(2.0).epsilon(1e-15));  // min(4, 2)
  CHECK(t(1) == doctest::Approx(3.0).epsilon(1e-15));

  const Vector a = T.evaluate_asymptotic(vec({3.0, 1.0}));
  CHECK(a(0) == doctest::Approx(1.0).epsilon(1e-15));  // min(3, 1)
  CHECK(a(1) == doctest::Approx(2.0).epsilon(1e-15));

  // Norm augmentation scales only the sigma terms.
  const auto norm = linf2();
  const Vector x = vec({6.0, 2.0});  // ||x|| = 6
  const Vector g = T.evaluate_norm_augmented(x, norm);
  CHECK(g(0) == doctest::Approx(std::min(6.0 + 6.0, (2.0 * 2.0 + 2.0 * 6.0) / 2.0))
                    .epsilon(1e-15));
  CHECK(g(1) == doctest::Approx((0.5 * 6.0 + 0.5 * 2.0 + 6.0) / 1.0).epsilon(1e-15));

  // Homogeneity of the augmented form.
  const Vector g2 = T.evaluate_norm_augmented(2.0 * x, norm);
  CHECK((g2 - 2.0 * g).cwiseAbs().maxCoeff() <= 1e-14);

  // Validation: dimension mismatch and nonpositive pieces.
  std::vector<std::vector<InfFamilyPiece>> bad(1);
  bad[0].push_back({vec({1.0, 0.0}), 1.0, 1.0});
  CHECK_THROWS_AS(InterferenceMapping::inf_family(bad), std::invalid_argument);
  bad[0][0].c = vec({1.0});
  bad[0][0].sigma = 0.0;
  CHECK_THROWS_AS(InterferenceMapping::inf_family(bad), std::invalid_argument);
}

TEST_CASE("scaled mapping multiplies coordinatewise") {
  urt::Rng rng(303);
  const auto T = InterferenceMapping::affine(random_model(rng, 3));
  const Vector s = vec({2.0, 0.5, 1.5});
  const auto Ts = T.scaled(s);
  const Vector p = random_positive(rng, 3, 0.1, 1.0);
  CHECK((Ts.evaluate(p) - s.cwiseProduct(T.evaluate(p))).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(T.scaled(vec({1.0, 0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("restricted mapping holds deleted inputs at zero") {
  urt::Rng rng(404);
  const auto model = random_model(rng, 3);
  const auto T = InterferenceMapping::affine(model);
  const auto sub = T.restricted({0, 2});

  const Vector q = vec({0.7, 0.3});
  const Vector full = T.evaluate(vec({0.7, 0.0, 0.3}));
  const Vector got = sub.evaluate(q);
  CHECK(got(0) == doctest::Approx(full(0)).epsilon(1e-15));
  CHECK(got(1) == doctest::Approx(full(2)).epsilon(1e-15));

  // Same exercise through an inf-family wrapper of the model rows.
  std::vector<std::vector<InfFamilyPiece>> pieces(3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    pieces[static_cast<std::size_t>(i)].push_back(
        {model.M.row(i).transpose(), model.u(i), 1.0});
  }
  const auto F = InterferenceMapping::inf_family(pieces);
  const auto fsub = F.restricted({0, 2});
  const Vector fgot = fsub.evaluate(q);
  CHECK(fgot(0) == doctest::Approx(full(0)).epsilon(1e-14));
  CHECK(fgot(1) == doctest::Approx(full(2)).epsilon(1e-14));
}
