#include <doctest.h>

#include <algorithm>

#include "rbm/boundary.hpp"
#include "rbm/errors.hpp"
#include "rbm/green.hpp"
#include "support.hpp"

using namespace rbm;
using namespace rbm::test;

namespace {

const SingularityExpansion& at(const std::vector<SingularityExpansion>& list, double location)
{
    auto it = std::find_if(list.begin(), list.end(), [&](const SingularityExpansion& s) {
        return std::abs(s.location - location) < 1e-9;
    });
    REQUIRE(it != list.end());
    return *it;
}

} // namespace

TEST_CASE("g closed-form values")
{
    const auto m = p0();
    CHECK(g_eval(m, 1.0).real() == doctest::Approx(1 + sqrt2).epsilon(1e-14));
    CHECK(std::abs(g_eval(m, 1.0).imag()) == 0.0);
    const double eps = 1e-6;
    CHECK((eps * g_eval(m, eps)).real() == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(g_eval(m, 0.0), Error);
    CHECK_THROWS_AS(g_eval(m, 2.0), Error);
    CHECK_THROWS_AS(g_eval(m, 3.0), Error); // on the cut beyond theta1+
}

TEST_CASE("g is conjugate symmetric")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 20; ++k) {
        const auto m = random_negative_drift(rng);
        for (int j = 0; j < 20; ++j) {
            const cplx t(u(rng), u(rng));
            if (on_branch_cut(m, t))
                continue;
            const cplx a = g_eval(m, t), b = g_eval(m, std::conj(t));
            CHECK(std::abs(a - std::conj(b)) <= 1e-13 * std::abs(a));
        }
    }
}

TEST_CASE("residue examples")
{
    const auto list = residues(p0());
    CHECK(at(list, 0.0).leading_coefficient == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at(list, 2.0).leading_coefficient == doctest::Approx(-1.0).epsilon(1e-14));
    const auto& br = at(list, 1 + sqrt2);
    CHECK(br.kind == SingularityKind::SquareRootBranch);
    CHECK(br.power == 0.5);
    CHECK(br.constant_term == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(br.leading_coefficient == doctest::Approx(-std::sqrt(2 * sqrt2)).epsilon(1e-13));

    const auto deg = residues(validate_and_normalize(params(-1.0, -1.0, -(sqrt2 - 1))));
    const auto& d = at(deg, 1 + sqrt2);
    CHECK(d.kind == SingularityKind::SquareRootBranch);
    CHECK(d.power == -0.5);
    CHECK(d.leading_coefficient == doctest::Approx(1.0 / std::sqrt(2 * sqrt2)).epsilon(1e-12));
}

TEST_CASE("residue at the origin from a one-sided limit")
{
    const auto m = p0();
    const auto list = residues(m);
    const double eps = 1e-6;
    CHECK((eps * g_eval(m, eps)).real() == doctest::Approx(at(list, 0.0).leading_coefficient).epsilon(1e-5));
    CHECK((eps * g_eval(m, 2.0 + eps)).real() == doctest::Approx(at(list, 2.0).leading_coefficient).epsilon(1e-5));
}

TEST_CASE("expansions agree with numerical limits, with and without a start point")
{
    // Symmetric differences remove the constant from the residue limit and the
    // residue from the constant; Richardson extrapolation removes the O(sqrt u)
    // correction at the branch point. Steps scale with the distance to the
    // nearest other singularity.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const auto base = random_negative_drift(rng);
        const Vec2 x = k % 2 ? Vec2{ux(rng) - 0.5, ux(rng)} : Vec2{0.0, 0.0};
        const auto m = validate_and_normalize(params(base.mu[0], base.mu[1], base.r, x));
        const auto list = residues(m);
        for (const auto& s : list) {
            double d = 1.0;
            for (const auto& o : list)
                if (&o != &s)
                    d = std::min(d, std::abs(o.location - s.location));
            if (s.kind == SingularityKind::SimplePole) {
                auto pair = [&](double e) {
                    const cplx up = g_eval(m, s.location + e), down = g_eval(m, s.location - e);
                    return std::pair{0.5 * e * (up - down).real(), 0.5 * (up + down).real()};
                };
                const double e = 1e-3 * d;
                const auto [r1, c1] = pair(e);
                const auto [r2, c2] = pair(e / 2);
                CHECK((4 * r2 - r1) / 3 == doctest::Approx(s.leading_coefficient).epsilon(1e-7));
                CHECK((4 * c2 - c1) / 3 == doctest::Approx(s.constant_term).epsilon(1e-5));
            } else if (s.power == 0.5) {
                // g(theta1+ - u) = c + k sqrt(u) + O(u); the expansion holds for
                // u well below both d^2 and (c / k)^2.
                auto slope = [&](double u) {
                    return (g_eval(m, s.location - u).real() - s.constant_term) / std::sqrt(u);
                };
                const double scale = std::min(d, std::abs(s.constant_term / s.leading_coefficient));
                const double u = 1e-6 * scale * scale;
                const double k_est = 2.0 * slope(u / 4) - slope(u);
                CHECK(k_est == doctest::Approx(s.leading_coefficient).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("g solves the boundary kernel relation")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ux(0.0, 1.5);
    for (int k = 0; k < 50; ++k) {
        const auto base = random_negative_drift(rng);
        const auto m = validate_and_normalize(params(base.mu[0], base.mu[1], base.r, {u(rng), ux(rng)}));
        for (int j = 0; j < 20; ++j) {
            const cplx t(u(rng), u(rng));
            if (on_branch_cut(m, t))
                continue;
            const auto br = theta2_branches(m, t);
            const cplx den = m.r * t + br.minus;
            if (std::abs(den) < 1e-6)
                continue;
            const cplx lhs = g_eval(m, t) * den;
            const cplx rhs = -std::exp(t * m.x[0] + br.minus * m.x[1]);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("functional equation with f on F")
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int k = 0; k < 100; ++k) {
        const auto base = random_negative_drift(rng);
        const Vec2 x = k % 2 ? Vec2{u(rng) - 0.5, u(rng)} : Vec2{0.0, 0.0};
        const auto m = validate_and_normalize(params(base.mu[0], base.mu[1], base.r, x));
        const auto g = geometry(m);
        const double hi = g.pole_p ? *g.pole_p : g.theta1_plus;
        const CVec2 th{cplx(hi * (0.05 + 0.9 * u(rng)), u(rng) - 0.5), cplx(-2.0 * u(rng), u(rng) - 0.5)};
        cplx f;
        try {
            f = f_transform(m, th);
        } catch (const Error&) {
            continue;
        }
        const cplx res = std::exp(m.x[0] * th[0] + m.x[1] * th[1]) + kernel_Q(m, th) * f +
                         (m.r * th[0] + th[1]) * g_eval(m, th[0]);
        CHECK(std::abs(res) < 1e-10 * std::max(1.0, std::abs(kernel_Q(m, th) * f)));
        ++checked;
    }
    CHECK(checked > 90);
}

TEST_CASE("tail law examples")
{
    const auto m = p0();
    const auto a = nu_tail(m, TailDirection::PlusInfinity, TailObject::Density);
    CHECK(a.prefactor == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.power == 0.0);
    CHECK(a.rate == doctest::Approx(2.0));
    const auto at_ = nu_tail(m, TailDirection::PlusInfinity, TailObject::Tail);
    CHECK(at_.prefactor == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(at_.rate == doctest::Approx(2.0));
    const auto d = nu_tail(m, TailDirection::MinusInfinity, TailObject::Density);
    CHECK(d.prefactor == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.power == 0.0);
    CHECK(d.rate == 0.0);
    CHECK_FALSE(d.derived_by_symmetry);
}

TEST_CASE("pole rate lies below the branch rate")
{
    std::mt19937_64 rng(23);
    for (int k = 0; k < 500; ++k) {
        const auto m = random_negative_drift(rng);
        const auto g = geometry(m);
        const auto t = nu_tail(m, TailDirection::PlusInfinity, TailObject::Density);
        CHECK(t.rate > 0.0);
        CHECK(t.rate <= g.theta1_plus * (1 + 1e-14));
        if (g.pole_p)
            CHECK(*g.pole_p < g.theta1_plus);
        const auto ti = nu_tail(m, TailDirection::PlusInfinity, TailObject::Tail);
        CHECK(ti.rate == t.rate);
    }
}

TEST_CASE("positive drift tails are defined in both directions")
{
    std::mt19937_64 rng(29);
    for (int k = 0; k < 100; ++k) {
        const auto m = random_positive_drift(rng);
        const auto right = nu_tail(m, TailDirection::PlusInfinity, TailObject::Density);
        const auto left = nu_tail(m, TailDirection::MinusInfinity, TailObject::Density);
        CHECK(right.rate > 0.0);
        CHECK(left.rate > 0.0);
        CHECK(left.derived_by_symmetry);
        CHECK(std::isfinite(left.prefactor));
        CHECK(right.evaluate(3.0) > 0.0);
        CHECK(left.evaluate(-3.0) > 0.0);
    }
}

TEST_CASE("convergence domain")
{
    const auto m = p0();
    CHECK(in_convergence_domain(m, {1.0, 0.0}));
    CHECK(in_convergence_domain(m, {1.9, -1.0}));
    CHECK_FALSE(in_convergence_domain(m, {1 + sqrt2 + 1, 0.0}));
    CHECK_FALSE(in_convergence_domain(m, {-1.0, 5.0}));
}
