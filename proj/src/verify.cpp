#include "rbm/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "rbm/asympt.hpp"
#include "rbm/boundary.hpp"
#include "rbm/green.hpp"
#include "rbm/martin.hpp"
#include "rbm/mc.hpp"

namespace rbm {

namespace {

using std::numbers::pi;
using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ModelParams p0()
{
    ModelParams p;
    p.mu = {-1.0, -1.0};
    p.r = 0.0;
    return p;
}

// A random transient model with mu2 < 0 and a start x (x2 >= 0).
ModelParams random_model(std::mt19937_64& rng, bool with_start)
{
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> neg(-3.0, -0.05);
    std::uniform_real_distribution<double> pos(0.0, 1.5);
    for (;;) {
        ModelParams p;
        p.mu = {u(rng), neg(rng)};
        p.r = u(rng);
        if (with_start)
            p.x = {u(rng) / 3.0, pos(rng)};
        if (p.mu[0] + p.r * (-p.mu[1]) < -0.05)
            return p;
    }
}

} // namespace

CriterionResult check_closed_forms()
{
    const auto t0 = Clock::now();
    CriterionResult res{1, "closed-form spot checks", true, "", 0.0};
    const auto m = validate_and_normalize(p0());
    const auto g = geometry(m);
    const double s2 = std::sqrt(2.0);

    double worst = 0.0;
    auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
    check(f_transform(m, {cplx(1.0), cplx(0.0)}).real(), 2.0);
    check(g_eval(m, 1.0).real(), 1.0 + s2);
    for (const auto& e : residues(m)) {
        if (e.kind != SingularityKind::SimplePole)
            continue;
        check(e.leading_coefficient, e.location == 0.0 ? 1.0 : -1.0);
    }
    check(g.pole_p.value_or(NAN), 2.0);
    check(theta2_branches(m, 2.0).plus.real(), 2.0);
    check(g.alpha0, 3.0 * pi / 4.0);
    check(g.alpha1, pi / 4.0);
    check(law(m, pi / 6.0).prefactor, 2.0);
    check(law(m, 5.0 * pi / 6.0).prefactor, 2.0);
    check(law(m, pi / 2.0).prefactor, std::sqrt(2.0 * s2 / pi) * (1.0 + s2));
    res.seconds = seconds_since(t0);
    res.passed = worst < 1e-10 && res.seconds < 1.0;
    res.detail = "max_abs_error=" + fmt("%.3e", worst);
    return res;
}

CriterionResult check_identities(std::uint64_t seed)
{
    const auto t0 = Clock::now();
    CriterionResult res{2, "algebraic identity suite", true, "", 0.0};
    std::mt19937_64 rng(seed);
    double vieta = 0.0, kernel = 0.0, gline = 0.0, conj = 0.0, feq = 0.0;
    constexpr int kModels = 100;
    constexpr int kSamples = 100;
    for (int i = 0; i < kModels; ++i) {
        const auto m = validate_and_normalize(random_model(rng, i % 2 == 1));
        const auto geo = geometry(m);
        std::uniform_real_distribution<double> re(geo.theta1_minus - 2.0, geo.theta1_plus + 2.0);
        std::uniform_real_distribution<double> im(-3.0, 3.0);
        for (int k = 0; k < kSamples; ++k) {
            const cplx t1{re(rng), im(rng)};
            const auto b = theta2_branches(m, t1);
            const double scale = 1.0 + std::norm(t1);
            vieta = std::max(vieta, std::abs(b.plus + b.minus + 2.0 * m.mu[1]) / scale);
            vieta = std::max(vieta,
                             std::abs(b.plus * b.minus - (t1 * t1 + 2.0 * m.mu[0] * t1)) / scale);
            kernel = std::max(kernel, std::abs(kernel_Q(m, {t1, b.plus})) / scale);
            kernel = std::max(kernel, std::abs(kernel_Q(m, {t1, b.minus})) / scale);

            const cplx gv = g_eval(m, t1);
            const cplx start = std::exp(t1 * m.x[0] + b.minus * m.x[1]);
            gline = std::max(gline, std::abs(gv * (m.r * t1 + b.minus) + start) / std::abs(start));

            const auto bc = theta2_branches(m, std::conj(t1));
            conj = std::max(conj, std::abs(bc.plus - std::conj(b.plus)) / std::sqrt(scale));
            conj = std::max(conj, std::abs(g_eval(m, std::conj(t1)) - std::conj(gv)) /
                                      std::max(1.0, std::abs(gv)));
        }
        // Functional equation on the strip 0 < Re theta1 < upper, Re theta2 <= 0.
        const auto band = contour_band(m);
        std::uniform_real_distribution<double> a(band.lower, band.upper);
        std::uniform_real_distribution<double> b2(-3.0, 0.0);
        for (int k = 0; k < kSamples; ++k) {
            const CVec2 th{cplx(a(rng), im(rng)), cplx(b2(rng), im(rng))};
            const cplx ex = std::exp(th[0] * m.x[0] + th[1] * m.x[1]);
            const cplx qf = kernel_Q(m, th) * f_transform(m, th);
            const cplx rg = (m.r * th[0] + th[1]) * g_eval(m, th[0]);
            const double scale = std::max({1.0, std::abs(ex), std::abs(qf), std::abs(rg)});
            feq = std::max(feq, std::abs(ex + qf + rg) / scale);
        }
    }
    const double worst = std::max({vieta, kernel, gline, conj, feq});
    res.seconds = seconds_since(t0);
    res.passed = worst < 1e-10 && res.seconds < 10.0;
    res.detail = "vieta=" + fmt("%.2e", vieta) + ";kernel=" + fmt("%.2e", kernel) +
                 ";g_line=" + fmt("%.2e", gline) + ";conjugate=" + fmt("%.2e", conj) +
                 ";functional_eq=" + fmt("%.2e", feq);
    return res;
}

CriterionResult check_mc_closed_forms_and_tails(const VerifyOptions& options,
                                                CriterionResult& tails)
{
    const auto t0 = Clock::now();
    CriterionResult res{3, "Monte Carlo vs closed forms", true, "", 0.0};
    tails = {6, "boundary tails", true, "", 0.0};

    SimConfig cfg;
    cfg.paths = options.paths;
    cfg.seed = options.seed;
    cfg.threads = options.threads;
    FunctionalSet fs;
    fs.f_thetas = {{1.0, 0.0}};
    fs.g_thetas = {1.0};
    fs.boxes = {{{-0.5, 0.0}, {0.5, 1.0}}};
    std::vector<double> grid;
    for (int i = 0; i <= 6; ++i)
        grid.push_back(2.0 + 0.5 * i);
    for (double z : grid)
        fs.intervals.push_back({z});
    fs.intervals.push_back({-5.0, -4.0});
    const auto est = simulate(p0(), cfg, fs);

    const auto m = validate_and_normalize(p0());
    const double box_exact = box_integral(m, {-0.5, 0.0}, {0.5, 1.0}, 20, 1e-10);
    auto zscore = [](const McEstimate& e, double exact) {
        return (e.value - exact) / e.std_error;
    };
    const double zf = zscore(est.f_values[0], 2.0);
    const double zg = zscore(est.g_values[0], 1.0 + std::sqrt(2.0));
    const double zb = zscore(est.boxes[0], box_exact);
    res.passed = std::abs(zf) <= 3.0 && std::abs(zg) <= 3.0 && std::abs(zb) <= 3.0;
    res.detail = "f=" + fmt("%.5f", est.f_values[0].value) + "(z=" + fmt("%.2f", zf) + ")" +
                 ";g=" + fmt("%.5f", est.g_values[0].value) + "(z=" + fmt("%.2f", zg) + ")" +
                 ";box=" + fmt("%.5f", est.boxes[0].value) + "/" + fmt("%.5f", box_exact) +
                 "(z=" + fmt("%.2f", zb) + ")";

    // Weighted least squares of log nu((z, inf)) on z, weights (value / se)^2.
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& e = est.intervals[i];
        if (!(e.value > 0.0) || !(e.std_error > 0.0))
            continue;
        const double w = (e.value / e.std_error) * (e.value / e.std_error);
        const double y = std::log(e.value);
        sw += w;
        sx += w * grid[i];
        sy += w * y;
        sxx += w * grid[i] * grid[i];
        sxy += w * grid[i] * y;
        ++used;
    }
    const double slope = used >= 3 ? (sw * sxy - sx * sy) / (sw * sxx - sx * sx) : NAN;
    const auto& plateau = est.intervals.back();
    const double zp = zscore(plateau, 1.0);
    tails.passed = used >= 3 && std::abs(slope + 2.0) <= 0.2 && std::abs(zp) <= 3.0;
    tails.detail = "slope=" + fmt("%.4f", slope) + "(points=" + std::to_string(used) + ")" +
                   ";plateau=" + fmt("%.5f", plateau.value) + "(z=" + fmt("%.2f", zp) + ")";
    res.seconds = seconds_since(t0);
    tails.seconds = res.seconds;
    return res;
}

CriterionResult check_density_vs_law()
{
    const auto t0 = Clock::now();
    CriterionResult res{4, "quadrature vs asymptotic law", true, "", 0.0};
    const auto m = validate_and_normalize(p0());
    for (double alpha : {pi / 6.0, pi / 2.0, 5.0 * pi / 6.0}) {
        const auto l = law(m, alpha);
        double dev[2];
        int k = 0;
        for (double rho : {10.0, 20.0}) {
            const auto q = density(m, {rho * std::cos(alpha), rho * std::sin(alpha)}, 1e-10);
            dev[k++] = std::abs(q.value / l.evaluate(rho) - 1.0);
        }
        const bool ok = dev[0] < 0.15 && dev[1] < 0.08 && dev[1] < dev[0];
        res.passed = res.passed && ok;
        res.detail += (res.detail.empty() ? "" : ";") + std::string("alpha=") +
                      fmt("%.4f", alpha) + " dev10=" + fmt("%.4f", dev[0]) +
                      " dev20=" + fmt("%.4f", dev[1]);
    }
    res.seconds = seconds_since(t0);
    res.passed = res.passed && res.seconds < 60.0;
    return res;
}

CriterionResult check_coincidence()
{
    const auto t0 = Clock::now();
    CriterionResult res{5, "coincidence halving", true, "", 0.0};
    const auto m = validate_and_normalize(p0());
    const double alpha = pi / 4.0;
    const auto l = law(m, alpha);
    const double rho = 20.0;
    const auto q = density(m, {rho * std::cos(alpha), rho * std::sin(alpha)}, 1e-10);
    const double ratio = q.value / l.evaluate(rho);
    res.seconds = seconds_since(t0);
    res.passed = std::abs(l.prefactor - 1.0) < 1e-10 && std::abs(ratio - 1.0) <= 0.2 &&
                 res.seconds < 60.0;
    res.detail = "prefactor=" + fmt("%.12f", l.prefactor) + ";ratio20=" + fmt("%.5f", ratio);
    return res;
}

CriterionResult check_regime_thresholds(std::uint64_t seed)
{
    const auto t0 = Clock::now();
    CriterionResult res{7, "regime-threshold property", true, "", 0.0};
    std::mt19937_64 rng(seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> ua(kAlphaGuard, pi - kAlphaGuard);
    int mismatches = 0;
    int compared = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = validate_and_normalize(random_model(rng, false));
        const auto [a1, a0] = angle_thresholds(m);
        for (int k = 0; k < 50; ++k) {
            const double alpha = ua(rng);
            if (std::abs(alpha - a1) < 1e-6 || std::abs(alpha - a0) < 1e-6)
                continue;
            ++compared;
            if (classify(m, alpha).tag != classify_by_angle(m, alpha))
                ++mismatches;
        }
    }
    res.seconds = seconds_since(t0);
    res.passed = mismatches == 0 && res.seconds < 10.0;
    res.detail = "compared=" + std::to_string(compared) + ";mismatches=" + std::to_string(mismatches);
    return res;
}

CriterionResult check_harmonicity_suite()
{
    const auto t0 = Clock::now();
    CriterionResult res{8, "harmonicity and Martin limits", true, "", 0.0};
    const auto m = validate_and_normalize(p0());
    const auto interior = standard_interior_grid();
    const auto boundary = standard_boundary_grid();

    double worst_fd = 0.0;
    auto run = [&](const HarmonicFunction& h) {
        const auto rep = check_harmonicity(h, interior, boundary, 1e-3);
        worst_fd = std::max(worst_fd, std::max(rep.interior_residual, rep.boundary_residual) /
                                          rep.max_abs_h);
    };
    run(harmonic(m, HarmonicFamily::ConstantFamily));
    run(harmonic(m, HarmonicFamily::PoleFamily));
    for (double alpha : {pi / 3.0, pi / 2.0, 2.0 * pi / 3.0})
        run(harmonic(m, HarmonicFamily::SaddleFamily, alpha));

    double worst_ratio = 0.0;
    for (double alpha : {pi / 6.0, pi / 4.0, pi / 3.0, pi / 2.0, 2.0 * pi / 3.0, 5.0 * pi / 6.0}) {
        const double a0 = law(m, alpha).prefactor;
        for (Vec2 x : {Vec2{1.0, 0.0}, Vec2{0.5, 1.0}, Vec2{-1.0, 2.0}}) {
            auto p = p0();
            p.x = x;
            const double ax = law(validate_and_normalize(p), alpha).prefactor;
            const double limit = martin_limit(m, alpha, x);
            worst_ratio = std::max(worst_ratio, std::abs(limit - ax / a0) / std::max(1.0, limit));
        }
    }
    const double e_err = std::abs(martin_limit(m, pi / 2.0, {1.0, 0.0}) - std::exp(1.0));
    res.seconds = seconds_since(t0);
    res.passed = worst_fd < 1e-6 && worst_ratio < 1e-10 && e_err < 1e-10 && res.seconds < 10.0;
    res.detail = "fd_residual=" + fmt("%.2e", worst_fd) + ";limit_vs_ratio=" +
                 fmt("%.2e", worst_ratio) + ";e_error=" + fmt("%.2e", e_err);
    return res;
}

CriterionResult check_covariance(const VerifyOptions& options)
{
    const auto t0 = Clock::now();
    CriterionResult res{9, "covariance generalization", true, "", 0.0};
    ModelParams p;
    p.mu = {-1.0, -1.0};
    p.r = 0.0;
    p.sigma = {{{4.0, 1.0}, {1.0, 2.0}}};
    const auto m = validate_and_normalize(p);

    const std::vector<Vec2> centers{{0.0, 1.0}, {1.0, 0.5}, {-1.5, 1.0}};
    constexpr double half = 0.25;
    FunctionalSet fs;
    for (const auto& c : centers)
        fs.boxes.push_back({{c[0] - half, c[1] - half}, {c[0] + half, c[1] + half}});
    SimConfig cfg;
    cfg.paths = options.paths;
    cfg.seed = options.seed + 1;
    cfg.threads = options.threads;
    const auto est = simulate(p, cfg, fs);

    for (std::size_t i = 0; i < centers.size(); ++i) {
        const auto& bx = fs.boxes[i];
        const double exact = box_integral(m, bx.lo, bx.hi, 4, 1e-10);
        const double point = density(m, centers[i], 1e-10).value;
        const double z = (est.boxes[i].value - exact) / est.boxes[i].std_error;
        res.passed = res.passed && std::abs(z) <= 3.0;
        res.detail += (i ? ";" : "") + std::string("z=(") + fmt("%.2f", centers[i][0]) + " " +
                      fmt("%.2f", centers[i][1]) + ") density=" + fmt("%.5f", point) +
                      " box=" + fmt("%.5f", exact) + " mc=" + fmt("%.5f", est.boxes[i].value) +
                      " zscore=" + fmt("%.2f", z);
    }
    res.seconds = seconds_since(t0);
    return res;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options)
{
    std::vector<CriterionResult> out;
    out.push_back(check_closed_forms());
    out.push_back(check_identities(options.seed));
    CriterionResult tails;
    out.push_back(check_mc_closed_forms_and_tails(options, tails));
    out.push_back(check_density_vs_law());
    out.push_back(check_coincidence());
    out.push_back(tails);
    out.push_back(check_regime_thresholds(options.seed));
    out.push_back(check_harmonicity_suite());
    out.push_back(check_covariance(options));
    return out;
}

} // namespace rbm
