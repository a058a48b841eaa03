#include <random>

#include "doctest.h"
#include "enclosure/medium.hpp"

using namespace enclosure;

namespace {
MediumSpec make_spec(Tensor2 a0, Tensor2 at) {
    MediumSpec spec;
    spec.domain = PolygonalDomain::rectangle({0, 0}, {1, 1});
    spec.inclusion = PolygonalDomain::rectangle({0.4, 0.4}, {0.6, 0.6});
    spec.a0 = TensorField::constant(a0);
    spec.a_tilde = TensorField::constant(at);
    spec.lambda_hat = (at - a0).eigenvalues()[0];
    return spec;
}
}  // namespace

TEST_CASE("effective tensor is piecewise") {
    auto spec = make_spec({1, 0, 1}, {3, 0, 3});
    CHECK(spec.effective_tensor({0.5, 0.5}).a11 == doctest::Approx(3.0));
    CHECK(spec.effective_tensor({0.1, 0.1}).a11 == doctest::Approx(1.0));
    CHECK_THROWS_AS(spec.effective_tensor({2.0, 2.0}), DomainError);

    auto aniso = make_spec({1, 0, 2}, {3, 0, 4});
    CHECK(aniso.effective_tensor({0.1, 0.9}).a22 == doctest::Approx(2.0));
}

TEST_CASE("hypothesis verification reports jump eigenvalues") {
    std::mt19937_64 rng(7);
    std::vector<Vec2> pts;
    for (double x = 0.05; x < 1.0; x += 0.05)
        for (double y = 0.05; y < 1.0; y += 0.05) pts.push_back({x, y});

    auto spec = make_spec({1, 0, 1}, {3, 0, 3});
    auto rep = verify_hypotheses(spec, pts, rng);
    CHECK(rep.pass);
    CHECK(rep.lambda_hat_emp == doctest::Approx(2.0));
    CHECK(rep.Lambda_hat_emp == doctest::Approx(2.0));

    auto diag = make_spec({1, 0, 2}, {2, 0, 4});
    rep = verify_hypotheses(diag, pts, rng);
    CHECK(rep.lambda_hat_emp == doctest::Approx(1.0));
    CHECK(rep.Lambda_hat_emp == doctest::Approx(2.0));
}

TEST_CASE("rotated anisotropic field matches analytic eigenvalues") {
    std::mt19937_64 rng(11);
    MediumSpec spec;
    spec.domain = PolygonalDomain::rectangle({0, 0}, {1, 1});
    spec.inclusion = PolygonalDomain::rectangle({0.4, 0.4}, {0.6, 0.6});
    spec.a0 = TensorField::rotated_diagonal(1.0, 2.5, 0.3, {0.7, -0.4});
    spec.a_tilde = TensorField::rotated_diagonal(3.0, 5.0, -0.2, {0.1, 0.2});

    std::vector<Vec2> pts;
    for (double x = 0.05; x < 1.0; x += 0.025)
        for (double y = 0.05; y < 1.0; y += 0.025) pts.push_back({x, y});
    auto rep = verify_hypotheses(spec, pts, rng);
    // Rotation preserves the spectrum, so the empirical field bounds equal
    // the diagonal entries to solver precision.
    CHECK(rep.lambda0_emp == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.Lambda0_emp == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(rep.lambda_tilde_emp == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(rep.Lambda_tilde_emp == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(rep.ellipticity_ok);
}

TEST_CASE("null perturbation passes only with a zero declared jump") {
    std::mt19937_64 rng(3);
    std::vector<Vec2> pts;
    for (double x = 0.1; x < 1.0; x += 0.1)
        for (double y = 0.1; y < 1.0; y += 0.1) pts.push_back({x, y});

    auto null_spec = make_spec({1, 0, 1}, {1, 0, 1});
    null_spec.lambda_hat = 0.0;
    CHECK(verify_hypotheses(null_spec, pts, rng).pass);

    null_spec.lambda_hat = 0.5;  // claims a jump that is not there
    CHECK_FALSE(verify_hypotheses(null_spec, pts, rng).pass);
}
