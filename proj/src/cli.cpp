#include "rbm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <variant>

#include "rbm/asympt.hpp"
#include "rbm/boundary.hpp"
#include "rbm/errors.hpp"
#include "rbm/green.hpp"
#include "rbm/martin.hpp"
#include "rbm/mc.hpp"
#include "rbm/verify.hpp"

namespace rbm::cli {

namespace {

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0; // print negative zero as 0
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& out, const std::string& format) const
    {
        if (format == "json") {
            for (const auto& row : rows_) {
                nlohmann::ordered_json obj;
                for (std::size_t i = 0; i < columns_.size(); ++i)
                    obj[columns_[i]] = to_json(row[i]);
                out << obj.dump() << '\n';
            }
            return;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << to_csv(row[i]);
            out << '\n';
        }
    }

private:
    static std::string to_csv(const Cell& c)
    {
        if (auto d = std::get_if<double>(&c))
            return format_double(*d);
        if (auto i = std::get_if<long long>(&c))
            return std::to_string(*i);
        if (auto s = std::get_if<std::string>(&c)) {
            if (s->find_first_of(",\"\n") == std::string::npos)
                return *s;
            std::string q = "\"";
            for (char ch : *s)
                q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        if (auto b = std::get_if<bool>(&c))
            return *b ? "true" : "false";
        return "";
    }

    static nlohmann::ordered_json to_json(const Cell& c)
    {
        if (auto d = std::get_if<double>(&c))
            return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
        if (auto i = std::get_if<long long>(&c))
            return *i;
        if (auto s = std::get_if<std::string>(&c))
            return *s;
        if (auto b = std::get_if<bool>(&c))
            return *b;
        return nullptr;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

struct Flags {
    double mu1 = NAN, mu2 = NAN, r = NAN;
    double s11 = 1.0, s12 = 0.0, s22 = 1.0;
    double x1 = 0.0, x2 = 0.0;
    std::vector<double> alpha;
    std::vector<double> rho;
    double theta1 = NAN, theta2 = NAN;
    double theta1_im = 0.0, theta2_im = 0.0;
    double z1 = NAN, z2 = NAN;
    double tol = 1e-10;
    double tol_coincide = kDefaultCoincideTol;
    int grid = 0;
    double fd_step = 1e-3;
    std::string format = "csv";
    // simulation
    std::uint64_t paths = 200000;
    double step = 1e-3;
    double stop_left = 30.0;
    double tmax = 1e4;
    std::uint64_t seed = 42;
    unsigned threads = 1;
    bool no_antithetic = false;
    bool no_bridge = false;
    std::vector<std::string> boxes;
    std::vector<std::string> intervals;
};

void add_model_flags(CLI::App* app, Flags& f, bool start_flags = true)
{
    app->add_option("--mu1", f.mu1, "first drift component")->required();
    app->add_option("--mu2", f.mu2, "second drift component")->required();
    app->add_option("--r", f.r, "first component of the reflection vector (r, 1)")->required();
    app->add_option("--sigma11", f.s11, "covariance entry (1,1)");
    app->add_option("--sigma12", f.s12, "covariance entry (1,2)");
    app->add_option("--sigma22", f.s22, "covariance entry (2,2)");
    if (start_flags) {
        app->add_option("--x1", f.x1, "starting point, first coordinate");
        app->add_option("--x2", f.x2, "starting point, second coordinate (>= 0)");
    }
    app->add_option("--format", f.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

ModelParams params_from(const Flags& f)
{
    ModelParams p;
    p.mu = {f.mu1, f.mu2};
    p.r = f.r;
    p.sigma = {{{f.s11, f.s12}, {f.s12, f.s22}}};
    p.x = {f.x1, f.x2};
    return p;
}

std::string_view drift_name(DriftSign s)
{
    switch (s) {
    case DriftSign::Mu2Negative: return "Mu2Negative";
    case DriftSign::Mu2Zero: return "Mu2Zero";
    case DriftSign::Mu2Positive: return "Mu2Positive";
    }
    return "";
}

std::vector<double> split_numbers(const std::string& s, std::size_t expected)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto next = s.find(',', pos);
        const std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size())
            throw Error(ErrorCode::InvalidArgument, "cannot parse number list '" + s + "'");
        out.push_back(v);
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    if (out.size() != expected)
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(expected) +
                                                    " comma-separated numbers in '" + s + "'");
    return out;
}

// Parameter lists are echoed with spaces so the CSV cell needs no quoting.
std::string spaced(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ' ');
    return s;
}

Table cmd_inspect(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    const auto g = geometry(m);
    Table t({"mu1", "mu2", "r", "drift_sign", "detT", "theta1_minus", "theta1_plus", "theta1p",
             "pole_zero", "norm_mu", "r_dot_theta_plus", "r_dot_theta_minus", "alpha_mu",
             "alpha_R", "alpha0", "alpha1"});
    t.add({m.mu[0], m.mu[1], m.r, std::string(drift_name(m.drift_sign)), m.detT, g.theta1_minus,
           g.theta1_plus, opt(g.pole_p), opt(g.pole_zero), g.m, g.r_dot_theta_plus,
           g.r_dot_theta_minus, g.alpha_mu, g.alpha_R, g.alpha0, g.alpha1});
    return t;
}

Table cmd_g(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    const cplx t1{f.theta1, f.theta1_im};
    const cplx v = g_eval(m, t1);
    Table t({"theta1_re", "theta1_im", "g_re", "g_im"});
    t.add({t1.real(), t1.imag(), v.real(), v.imag()});
    return t;
}

Table cmd_f(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    const CVec2 th{cplx(f.theta1, f.theta1_im), cplx(f.theta2, f.theta2_im)};
    const cplx v = f_transform(m, th);
    Table t({"theta1_re", "theta1_im", "theta2_re", "theta2_im", "f_re", "f_im"});
    t.add({th[0].real(), th[0].imag(), th[1].real(), th[1].imag(), v.real(), v.imag()});
    return t;
}

Table cmd_density(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    if (!f.rho.empty()) {
        if (f.alpha.size() != 1)
            throw Error(ErrorCode::InvalidArgument, "a ray needs exactly one --alpha");
        const double alpha = f.alpha.front();
        const auto l = law(m, alpha, f.tol_coincide);
        Table t({"rho", "alpha", "value", "abs_err", "regime", "law_value", "ratio"});
        for (double rho : f.rho) {
            const auto q =
                density_normalized(m, {rho * std::cos(alpha), rho * std::sin(alpha)}, f.tol);
            const double lv = l.evaluate(rho);
            t.add({rho, alpha, q.value, q.abs_error_estimate,
                   std::string(to_string(l.regime.tag)), lv, q.value / lv});
        }
        return t;
    }
    if (std::isnan(f.z1) || std::isnan(f.z2))
        throw Error(ErrorCode::InvalidArgument, "density needs --z1 --z2 or --alpha with --rho");
    const auto q = density(m, {f.z1, f.z2}, f.tol);
    Table t({"z1", "z2", "value", "abs_err", "nodes", "contour_abscissa", "truncation_height"});
    t.add({f.z1, f.z2, q.value, q.abs_error_estimate, static_cast<long long>(q.nodes_used),
           q.contour_abscissa, q.truncation_height});
    return t;
}

std::vector<double> alpha_list(const Flags& f)
{
    std::vector<double> out = f.alpha;
    for (int k = 1; k <= f.grid; ++k)
        out.push_back(std::numbers::pi * k / (f.grid + 1));
    if (out.empty())
        throw Error(ErrorCode::InvalidArgument, "give --alpha values or --grid N");
    return out;
}

Table cmd_law(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    Table t({"alpha", "regime", "prefactor", "power", "rate", "theta1_alpha", "theta1p"});
    for (double alpha : alpha_list(f)) {
        const auto l = law(m, alpha, f.tol_coincide);
        t.add({alpha, std::string(to_string(l.regime.tag)), l.prefactor, l.power, l.rate,
               l.regime.theta1_alpha, opt(l.regime.theta1p)});
    }
    return t;
}

Table cmd_tail(const Flags& f)
{
    const auto m = validate_and_normalize(params_from(f));
    Table t({"direction", "object", "prefactor", "power", "rate", "singularity", "kind",
             "local_power", "derived_by_symmetry"});
    for (auto dir : {TailDirection::PlusInfinity, TailDirection::MinusInfinity})
        for (auto obj : {TailObject::Density, TailObject::Tail}) {
            const auto l = nu_tail(m, dir, obj);
            t.add({std::string(dir == TailDirection::PlusInfinity ? "PlusInfinity"
                                                                   : "MinusInfinity"),
                   std::string(obj == TailObject::Density ? "Density" : "Tail"), l.prefactor,
                   l.power, l.rate, l.source.location,
                   std::string(l.source.kind == SingularityKind::SimplePole ? "SimplePole"
                                                                            : "SquareRootBranch"),
                   l.source.power, l.derived_by_symmetry});
        }
    return t;
}

Table cmd_martin(const Flags& f)
{
    auto p = params_from(f);
    p.x = {0.0, 0.0};
    const auto m = validate_and_normalize(p);
    const Vec2 x = mul(m.T, Vec2{f.x1, f.x2});
    const auto interior = standard_interior_grid();
    const auto boundary = standard_boundary_grid();
    Table t({"alpha", "x1", "x2", "limit", "family", "interior_residual", "boundary_residual",
             "max_abs_h"});
    for (double alpha : alpha_list(f)) {
        const double limit = martin_limit(m, alpha, x);
        const auto tag = classify(m, alpha).tag;
        HarmonicFunction h;
        std::string family;
        if (tag == RegimeTag::PoleP || tag == RegimeTag::CoincidenceP) {
            h = harmonic(m, HarmonicFamily::PoleFamily);
            family = "PoleFamily";
        } else if (tag == RegimeTag::PoleZero || tag == RegimeTag::CoincidenceZero) {
            h = harmonic(m, HarmonicFamily::ConstantFamily);
            family = "ConstantFamily";
        } else {
            h = harmonic(m, HarmonicFamily::SaddleFamily, alpha);
            family = "SaddleFamily";
        }
        const auto rep = check_harmonicity(h, interior, boundary, f.fd_step);
        t.add({alpha, f.x1, f.x2, limit, family, rep.interior_residual, rep.boundary_residual,
               rep.max_abs_h});
    }
    return t;
}

Table cmd_simulate(const Flags& f)
{
    const auto p = params_from(f);
    SimConfig cfg;
    cfg.paths = f.paths;
    cfg.step = f.step;
    cfg.stop_left = f.stop_left;
    cfg.t_max = f.tmax;
    cfg.seed = f.seed;
    cfg.threads = f.threads;
    cfg.antithetic = !f.no_antithetic;
    cfg.bridge_correction = !f.no_bridge;

    FunctionalSet fs;
    std::vector<std::pair<std::string, std::string>> labels;
    for (const auto& b : f.boxes) {
        const auto v = split_numbers(b, 4);
        fs.boxes.push_back({{v[0], v[1]}, {v[2], v[3]}});
        labels.emplace_back("occupancy", spaced(b));
    }
    for (const auto& s : f.intervals) {
        const auto v = split_numbers(s, 2);
        fs.intervals.push_back({v[0], v[1]});
        labels.emplace_back("boundary", spaced(s));
    }
    if (!std::isnan(f.theta1)) {
        const double th2 = std::isnan(f.theta2) ? 0.0 : f.theta2;
        fs.f_thetas.push_back({f.theta1, th2});
        fs.g_thetas.push_back(f.theta1);
        labels.emplace_back("mgf_f", format_double(f.theta1) + " " + format_double(th2));
        labels.emplace_back("mgf_g", format_double(f.theta1));
    }
    if (labels.empty())
        throw Error(ErrorCode::InvalidArgument, "give --box, --interval or --theta1");

    const auto est = simulate(p, cfg, fs);
    std::vector<McEstimate> all;
    all.insert(all.end(), est.boxes.begin(), est.boxes.end());
    all.insert(all.end(), est.intervals.begin(), est.intervals.end());
    all.insert(all.end(), est.f_values.begin(), est.f_values.end());
    all.insert(all.end(), est.g_values.begin(), est.g_values.end());

    Table t({"functional", "parameters", "value", "std_error", "paths", "seed",
             "truncation_fraction", "truncation_flagged"});
    for (std::size_t i = 0; i < all.size(); ++i)
        t.add({labels[i].first, labels[i].second, all[i].value, all[i].std_error,
               static_cast<long long>(all[i].paths), static_cast<long long>(all[i].seed),
               all[i].truncation_fraction, all[i].truncation_flagged});
    return t;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err)
{
    VerifyOptions opt;
    opt.seed = f.seed;
    opt.paths = f.paths;
    opt.threads = f.threads;
    const auto results = run_acceptance(opt);
    Table t({"criterion", "name", "status", "detail"});
    bool all = true;
    for (const auto& r : results) {
        t.add({static_cast<long long>(r.id), r.name, std::string(r.passed ? "PASS" : "FAIL"),
               r.detail});
        err << "criterion " << r.id << " took " << r.seconds << " s\n";
        all = all && r.passed;
    }
    t.write(out, f.format);
    return all ? kExitOk : kExitVerifyFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Reflected Brownian motion in the half-plane: densities, asymptotics, Monte Carlo"};
    app.require_subcommand(1);
    Flags f;

    auto* inspect = app.add_subcommand("inspect", "kernel geometry and angle thresholds");
    add_model_flags(inspect, f);

    auto* g = app.add_subcommand("g", "boundary moment generating function");
    add_model_flags(g, f);
    g->add_option("--theta1", f.theta1)->required();
    g->add_option("--theta1-imag", f.theta1_im);

    auto* ft = app.add_subcommand("f", "occupancy moment generating function");
    add_model_flags(ft, f);
    ft->add_option("--theta1", f.theta1)->required();
    ft->add_option("--theta2", f.theta2)->required();
    ft->add_option("--theta1-imag", f.theta1_im);
    ft->add_option("--theta2-imag", f.theta2_im);

    auto* dens = app.add_subcommand("density", "occupancy density at a point or along a ray");
    add_model_flags(dens, f);
    dens->add_option("--z1", f.z1);
    dens->add_option("--z2", f.z2);
    dens->add_option("--alpha", f.alpha, "direction in radians")->delimiter(',');
    dens->add_option("--rho", f.rho, "radii along the ray")->delimiter(',');
    dens->add_option("--tol", f.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    dens->add_option("--tol-coincide", f.tol_coincide);

    auto* lw = app.add_subcommand("law", "asymptotic regime and (a, b, c) by direction");
    add_model_flags(lw, f);
    lw->add_option("--alpha", f.alpha, "directions in radians")->delimiter(',');
    lw->add_option("--grid", f.grid, "N equally spaced directions in (0, pi)");
    lw->add_option("--tol-coincide", f.tol_coincide);

    auto* tl = app.add_subcommand("tail", "tail laws of the boundary occupancy measure");
    add_model_flags(tl, f);

    auto* mt = app.add_subcommand("martin", "Martin kernel limits and harmonicity residuals");
    add_model_flags(mt, f, false);
    mt->add_option("--x1", f.x1, "evaluation point, first coordinate");
    mt->add_option("--x2", f.x2, "evaluation point, second coordinate");
    mt->add_option("--alpha", f.alpha, "directions in radians")->delimiter(',');
    mt->add_option("--grid", f.grid, "N equally spaced directions in (0, pi)");
    mt->add_option("--fd-step", f.fd_step)->check(CLI::PositiveNumber);

    auto add_sim = [&](CLI::App* a) {
        a->add_option("--paths", f.paths)->check(CLI::PositiveNumber);
        a->add_option("--seed", f.seed);
        a->add_option("--threads", f.threads)->check(CLI::PositiveNumber);
    };
    auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates with standard errors");
    add_model_flags(sim, f);
    add_sim(sim);
    sim->add_option("--step", f.step);
    sim->add_option("--stop-left", f.stop_left);
    sim->add_option("--tmax", f.tmax);
    sim->add_flag("--no-antithetic", f.no_antithetic);
    sim->add_flag("--no-bridge", f.no_bridge);
    sim->add_option("--box", f.boxes, "z1lo,z2lo,z1hi,z2hi");
    sim->add_option("--interval", f.intervals, "a,b (b may be inf)");
    sim->add_option("--theta1", f.theta1, "MGF argument, first component");
    sim->add_option("--theta2", f.theta2, "MGF argument, second component");

    auto* ver = app.add_subcommand("verify", "run the acceptance suite");
    add_sim(ver);
    ver->add_option("--format", f.format)->check(CLI::IsMember({"csv", "json"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (ver->parsed())
            return cmd_verify(f, out, err);
        Table t({});
        if (inspect->parsed())
            t = cmd_inspect(f);
        else if (g->parsed())
            t = cmd_g(f);
        else if (ft->parsed())
            t = cmd_f(f);
        else if (dens->parsed())
            t = cmd_density(f);
        else if (lw->parsed())
            t = cmd_law(f);
        else if (tl->parsed())
            t = cmd_tail(f);
        else if (mt->parsed())
            t = cmd_martin(f);
        else
            t = cmd_simulate(f);
        t.write(out, f.format);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_numerical_failure(e.code()) ? kExitNumerical : kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace rbm::cli
