#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rbm/asympt.hpp"
#include "rbm/errors.hpp"
#include "rbm/green.hpp"
#include "support.hpp"

using namespace rbm;
using namespace rbm::test;

TEST_CASE("f closed form")
{
    const auto m = p0();
    CHECK(f_transform(m, {cplx(1), cplx(0)}).real() == doctest::Approx(2.0).epsilon(1e-14));
    try {
        f_transform(m, {cplx(2), cplx(0.3)});
        FAIL("expected AtPole");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AtPole);
    }
    const auto b = theta2_branches(m, 0.7);
    CHECK_THROWS_AS(f_transform(m, {cplx(0.7), b.plus}), Error);
}

TEST_CASE("contour abscissa examples")
{
    const auto m = p0();
    CHECK(contour_abscissa(m) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(contour_abscissa(m, pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(contour_abscissa(m, pi / 6) == doctest::Approx(1.998).epsilon(1e-12));
}

TEST_CASE("density rejects the boundary and the start")
{
    const auto m = p0();
    try {
        density(m, {0.0, 0.0}, 1e-8);
        FAIL("expected BoundaryTooClose");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BoundaryTooClose);
    }
    const auto mx = p0({0.5, 1.0});
    try {
        density(mx, {0.5, 1.0}, 1e-8);
        FAIL("expected SingularAtStart");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularAtStart);
    }
    DensityOptions o;
    o.route = DensityRoute::BoundaryTransform;
    CHECK_THROWS_AS(density(mx, {0.0, 2.0}, 1e-8, o), Error);
    o.route = DensityRoute::StartingPoint;
    CHECK_THROWS_AS(density(mx, {0.0, 0.5}, 1e-8, o), Error);
}

TEST_CASE("density follows the saddle law at rho = 20")
{
    const auto m = p0();
    const double rho = 20.0;
    const auto q = density(m, {0.0, rho}, 1e-10);
    const double c1 = std::sqrt(2 * sqrt2 / pi) * (1 + sqrt2);
    const double ratio = q.value / (c1 * std::pow(rho, -0.5) * std::exp(-rho * (1 + sqrt2)));
    CHECK(ratio >= 0.85);
    CHECK(ratio <= 1.15);
    CHECK(q.abs_error_estimate < 1e-9 * q.value);
}

TEST_CASE("routes agree for a start at the origin")
{
    const auto m = p0();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u1(-4.0, 4.0), u2(0.05, 4.0);
    for (int k = 0; k < 20; ++k) {
        const Vec2 z{u1(rng), u2(rng)};
        DensityOptions a, b, c;
        a.route = DensityRoute::BoundaryTransform;
        b.route = DensityRoute::StartingPoint;
        c.route = DensityRoute::FreePlusReflected;
        const double va = density(m, z, 1e-12, a).value;
        const double vb = density(m, z, 1e-12, b).value;
        const double vc = density(m, z, 1e-12, c).value;
        CHECK(std::abs(va - vb) <= 1e-10 * va);
        CHECK(std::abs(va - vc) <= 1e-10 * va);
    }
}

TEST_CASE("routes agree for an interior start above it")
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const auto base = random_negative_drift(rng);
        const Vec2 x{u(rng) - 0.5, 0.2 + u(rng)};
        const auto m = validate_and_normalize(params(base.mu[0], base.mu[1], base.r, x));
        const Vec2 z{x[0] + 3.0 * (u(rng) - 0.5), x[1] + 0.2 + 2.0 * u(rng)};
        DensityOptions b, c;
        b.route = DensityRoute::StartingPoint;
        c.route = DensityRoute::FreePlusReflected;
        const auto vb = density_normalized(m, z, 1e-11, b);
        const auto vc = density_normalized(m, z, 1e-11, c);
        CHECK(std::abs(vb.value - vc.value) <=
              1e-9 * vc.value + 2 * (vb.abs_error_estimate + vc.abs_error_estimate));
    }
}

TEST_CASE("contour independence across the band")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const auto base = random_negative_drift(rng);
        const Vec2 x = k % 2 ? Vec2{0.3, 0.4} : Vec2{0.0, 0.0};
        const auto m = validate_and_normalize(params(base.mu[0], base.mu[1], base.r, x));
        const auto band = contour_band(m);
        const Vec2 z{4.0 * (u(rng) - 0.5), 0.6 + u(rng)};
        double first = NAN;
        for (double s : {0.05, 0.5, 0.95}) {
            DensityOptions o;
            o.abscissa = band.lower + s * (band.upper - band.lower);
            const auto q = density_normalized(m, z, 1e-10, o);
            if (std::isnan(first))
                first = q.value;
            else
                CHECK(std::abs(q.value - first) <= 1e-8 * first);
        }
    }
}

TEST_CASE("density is positive")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const auto m = k % 2 ? random_negative_drift(rng) : random_positive_drift(rng);
        const Vec2 z{6.0 * (u(rng) - 0.5), 0.01 + 3.0 * u(rng)};
        const auto q = density_normalized(m, z, 1e-8);
        CHECK(q.value > -1e-8 * std::abs(q.value));
        CHECK(q.value > 0.0);
    }
}

TEST_CASE("covariance transport scales by det T")
{
    auto p = params(-1.0, -1.0, 0.0);
    p.sigma = {{{4.0, 1.0}, {1.0, 2.0}}};
    const auto m = validate_and_normalize(p);
    const Vec2 z{0.5, 1.0};
    const auto q = density(m, z, 1e-10);
    const Vec2 tz = mul(m.T, z);
    const auto qn = density_normalized(m, tz, 1e-10);
    CHECK(q.value == doctest::Approx(m.detT * qn.value).epsilon(1e-12));
}

TEST_CASE("the density integrates to the transform")
{
    // f(theta) = int exp(theta . z) pi(z) dz for theta = (1, -1), start at the origin.
    const auto m = p0();
    const Vec2 th{1.0, -1.0};
    const double exact = f_transform(m, {cplx(th[0]), cplx(th[1])}).real();
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double z2) {
        auto fz1 = [&](double z1) {
            return std::exp(th[0] * z1 + th[1] * z2) * density(m, {z1, z2}, 1e-7).value;
        };
        return gauss_kronrod<double, 15>::integrate(fz1, -20.0, 0.0, 5, 1e-6) +
               gauss_kronrod<double, 15>::integrate(fz1, 0.0, 12.0, 5, 1e-6);
    };
    // Very close to the boundary the contour integral needs too many nodes far
    // from the origin, so the strip z2 < 0.05 uses a trapezoid with the value at
    // z2 = 0 extrapolated linearly from 0.05 and 0.1.
    const double a = 0.05;
    const double ia = inner(a), i2a = inner(2 * a);
    const double strip = 0.5 * a * (ia + (2 * ia - i2a));
    const double bulk = gauss_kronrod<double, 15>::integrate(inner, a, 1.0, 4, 1e-5) +
                        gauss_kronrod<double, 15>::integrate(inner, 1.0, 14.0, 4, 1e-5);
    CHECK(bulk + strip == doctest::Approx(exact).epsilon(1e-2));
}

TEST_CASE("box integral matches an independent tensor rule")
{
    const auto m = p0();
    const double coarse = box_integral(m, {0.2, 0.5}, {1.2, 1.5}, 2, 1e-9);
    const double fine = box_integral(m, {0.2, 0.5}, {1.2, 1.5}, 6, 1e-9);
    CHECK(coarse == doctest::Approx(fine).epsilon(1e-7));
}
