#include "rbm/mc.hpp"

#include <algorithm>
#include <atomic>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <cmath>
#include <random>
#include <thread>

#include "rbm/boundary.hpp"
#include "rbm/errors.hpp"

namespace rbm {

namespace {

constexpr std::uint64_t kChunk = 256;

void validate_config(const SimConfig& c)
{
    if (!(c.step > 0.0 && c.step <= 1e-2))
        throw Error(ErrorCode::InvalidArgument, "step must lie in (0, 1e-2]");
    if (!(c.stop_left >= 10.0) || !std::isfinite(c.stop_left))
        throw Error(ErrorCode::InvalidArgument, "stop_left must be at least 10");
    if (!(c.t_max > 0.0) || !(c.t_max / c.step <= 1e9))
        throw Error(ErrorCode::InvalidArgument, "t_max must be positive with t_max/step <= 1e9");
    if (c.paths < 1)
        throw Error(ErrorCode::InvalidArgument, "paths must be at least 1");
}

// Per-step constants of the discretized free motion in original coordinates.
// The second coordinate carries sqrt(s22) xi2; the first adds the part of its
// noise correlated with it plus an independent part driven by xi1.
struct Scheme {
    double drift1, drift2;
    double sd2, corr1, ind1;
    double var2;
    double r;
    bool bridge;
    Vec2 x;
    double stop_left;
    std::uint64_t max_steps;
    double h;
};

Scheme make_scheme(const ModelParams& p, const SimConfig& c)
{
    const double s11 = p.sigma[0][0];
    const double s12 = 0.5 * (p.sigma[0][1] + p.sigma[1][0]);
    const double s22 = p.sigma[1][1];
    const double h = c.step;
    Scheme s;
    s.drift1 = p.mu[0] * h;
    s.drift2 = p.mu[1] * h;
    s.sd2 = std::sqrt(s22 * h);
    s.corr1 = s12 / std::sqrt(s22) * std::sqrt(h);
    s.ind1 = std::sqrt((s11 * s22 - s12 * s12) / s22 * h);
    s.var2 = s22 * h;
    s.r = p.r;
    s.bridge = c.bridge_correction;
    s.x = p.x;
    s.stop_left = c.stop_left;
    s.max_steps = static_cast<std::uint64_t>(std::floor(c.t_max / h));
    s.h = h;
    return s;
}

std::mt19937_64 unit_engine(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

// One step of the shared second coordinate: returns the local-time increment
// and updates z2. With the bridge correction the increment is the exact
// overshoot of the Brownian bridge minimum below zero.
template <class Engine>
double step_second(const Scheme& s, double& z2, double xi2, Engine& eng)
{
    const double a = z2;
    const double b = z2 + s.drift2 + s.sd2 * xi2;
    double dl = 0.0;
    if (s.bridge) {
        if (b < 0.0 || a * b <= 12.0 * s.var2) {
            const double u = 1.0 - boost::random::uniform_01<double>()(eng);
            const double m = 0.5 * (a + b - std::sqrt((b - a) * (b - a) - 2.0 * s.var2 * std::log(u)));
            if (m < 0.0)
                dl = -m;
        }
    } else if (b < 0.0) {
        dl = -b;
    }
    // Rounding in the bridge formula must not leave z2 a hair below zero.
    z2 = dl > 0.0 ? std::max(b + dl, 0.0) : b;
    return dl;
}

struct Accumulator {
    const FunctionalSet* fs;
    std::vector<double> values; // boxes, intervals, f, g in that order

    explicit Accumulator(const FunctionalSet& set)
        : fs(&set),
          values(set.boxes.size() + set.intervals.size() + set.f_thetas.size() +
                 set.g_thetas.size())
    {
    }

    void reset() { std::fill(values.begin(), values.end(), 0.0); }

    void add(double z1, double z2, double dl, double h)
    {
        double* v = values.data();
        for (const auto& bx : fs->boxes) {
            if (z1 >= bx.lo[0] && z1 <= bx.hi[0] && z2 >= bx.lo[1] && z2 <= bx.hi[1])
                *v += h;
            ++v;
        }
        if (dl > 0.0) {
            for (const auto& iv : fs->intervals) {
                if (z1 > iv.a && z1 < iv.b)
                    *v += dl;
                ++v;
            }
        } else {
            v += fs->intervals.size();
        }
        for (const auto& th : fs->f_thetas)
            *v++ += h * std::exp(th[0] * z1 + th[1] * z2);
        if (dl > 0.0)
            for (double th : fs->g_thetas)
                *v++ += dl * std::exp(th * z1);
    }
};

// Mergeable running mean and centred second moment.
struct Stats {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double v)
    {
        n += 1.0;
        const double d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }

    void merge(const Stats& o)
    {
        if (o.n == 0.0)
            return;
        const double total = n + o.n;
        const double d = o.mean - mean;
        mean += d * o.n / total;
        m2 += o.m2 + d * d * n * o.n / total;
        n = total;
    }
};

struct ChunkResult {
    std::vector<Stats> stats;
    std::uint64_t paths = 0;
    std::uint64_t truncated = 0;
};

// Simulates unit `index` (a pair, or a single path) and writes the unit average
// of each functional into `unit`. Returns the number of truncated paths.
int run_unit(const Scheme& s, const SimConfig& c, std::uint64_t index, Accumulator& acc_a,
             Accumulator& acc_b, std::vector<double>& unit)
{
    auto eng = unit_engine(c.seed, index);
    boost::random::normal_distribution<double> normal;
    acc_a.reset();
    acc_b.reset();

    double z2 = s.x[1];
    double z1a = s.x[0];
    double z1b = s.x[0];
    bool active_a = true;
    bool active_b = c.antithetic;
    for (std::uint64_t n = 0; n < s.max_steps && (active_a || active_b); ++n) {
        const double xi1 = normal(eng);
        const double xi2 = normal(eng);
        const double dl = step_second(s, z2, xi2, eng);
        const double common = s.drift1 + s.corr1 * xi2 + s.r * dl;
        z1a += common + s.ind1 * xi1;
        z1b += common - s.ind1 * xi1;
        if (active_a) {
            if (z1a < -s.stop_left)
                active_a = false;
            else
                acc_a.add(z1a, z2, dl, s.h);
        }
        if (active_b) {
            if (z1b < -s.stop_left)
                active_b = false;
            else
                acc_b.add(z1b, z2, dl, s.h);
        }
    }

    for (std::size_t k = 0; k < unit.size(); ++k)
        unit[k] = c.antithetic ? 0.5 * (acc_a.values[k] + acc_b.values[k]) : acc_a.values[k];
    return int(active_a) + int(active_b);
}

ChunkResult run_chunk(const Scheme& s, const SimConfig& c, const FunctionalSet& fs,
                      std::uint64_t first, std::uint64_t last)
{
    Accumulator a(fs);
    Accumulator b(fs);
    std::vector<double> unit(a.values.size());
    ChunkResult out;
    out.stats.resize(unit.size());
    for (std::uint64_t i = first; i < last; ++i) {
        out.truncated += run_unit(s, c, i, a, b, unit);
        out.paths += c.antithetic ? 2 : 1;
        for (std::size_t k = 0; k < unit.size(); ++k)
            out.stats[k].push(unit[k]);
    }
    return out;
}

void check_regions(const FunctionalSet& fs, const SimConfig& c, const NormalizedModel& model)
{
    for (const auto& bx : fs.boxes)
        if (bx.lo[0] < -c.stop_left || !std::isfinite(bx.hi[0]) || !std::isfinite(bx.hi[1]))
            throw Error(ErrorCode::InvalidArgument,
                        "box must be bounded and lie right of -stop_left");
    for (const auto& iv : fs.intervals)
        if (iv.a < -c.stop_left)
            throw Error(ErrorCode::InvalidArgument, "interval must lie right of -stop_left");

    // theta . z_orig = (T^{-t} theta) . z for normalized z = T z_orig.
    const Mat2& t = model.T;
    auto normalized = [&](const Vec2& th) {
        const double a = t[0][0];
        const double b = t[0][1];
        const double cc = t[1][1];
        return Vec2{th[0] / a, -b * th[0] / (a * cc) + th[1] / cc};
    };
    for (const auto& th : fs.f_thetas)
        if (!in_convergence_domain(model, normalized(th)))
            throw Error(ErrorCode::ThetaOutsideConvergence, "theta is outside E u F");
    for (double th1 : fs.g_thetas)
        if (!in_convergence_domain(model, normalized({th1, 0.0})))
            throw Error(ErrorCode::ThetaOutsideConvergence, "theta is outside E u F");
}

} // namespace

FunctionalEstimates simulate(const ModelParams& params, const SimConfig& config,
                             const FunctionalSet& functionals)
{
    validate_config(config);
    const auto model = validate_and_normalize(params);
    check_regions(functionals, config, model);
    const Scheme scheme = make_scheme(params, config);

    const std::uint64_t units = config.antithetic ? (config.paths + 1) / 2 : config.paths;
    const std::uint64_t chunks = (units + kChunk - 1) / kChunk;
    std::vector<ChunkResult> results(chunks);

    auto worker = [&](std::atomic<std::uint64_t>& next) {
        for (std::uint64_t k = next++; k < chunks; k = next++)
            results[k] = run_chunk(scheme, config, functionals, k * kChunk,
                                   std::min(units, (k + 1) * kChunk));
    };
    std::atomic<std::uint64_t> next{0};
    const unsigned n_threads = std::max(1u, config.threads);
    if (n_threads == 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker, std::ref(next));
        for (auto& th : pool)
            th.join();
    }

    // Reduction in chunk order keeps the result independent of scheduling.
    ChunkResult total;
    total.stats.resize(results.empty() ? 0 : results.front().stats.size());
    for (const auto& r : results) {
        for (std::size_t k = 0; k < r.stats.size(); ++k)
            total.stats[k].merge(r.stats[k]);
        total.paths += r.paths;
        total.truncated += r.truncated;
    }
    if (total.truncated == total.paths)
        throw Error(ErrorCode::BudgetExceeded, "every path reached t_max before leaving");

    const double trunc = double(total.truncated) / double(total.paths);
    auto make = [&](const Stats& st) {
        McEstimate e;
        e.value = st.mean;
        e.std_error = st.n > 1.0 ? std::sqrt(st.m2 / (st.n - 1.0) / st.n) : 0.0;
        e.paths = total.paths;
        e.seed = config.seed;
        e.truncation_fraction = trunc;
        e.truncation_flagged = trunc > 0.01;
        return e;
    };
    FunctionalEstimates out;
    std::size_t k = 0;
    for (std::size_t i = 0; i < functionals.boxes.size(); ++i)
        out.boxes.push_back(make(total.stats[k++]));
    for (std::size_t i = 0; i < functionals.intervals.size(); ++i)
        out.intervals.push_back(make(total.stats[k++]));
    for (std::size_t i = 0; i < functionals.f_thetas.size(); ++i)
        out.f_values.push_back(make(total.stats[k++]));
    for (std::size_t i = 0; i < functionals.g_thetas.size(); ++i)
        out.g_values.push_back(make(total.stats[k++]));
    return out;
}

McEstimate estimate_occupancy(const ModelParams& params, const SimConfig& config, const Box& box)
{
    FunctionalSet fs;
    fs.boxes.push_back(box);
    return simulate(params, config, fs).boxes.front();
}

McEstimate estimate_boundary(const ModelParams& params, const SimConfig& config,
                             const Interval& interval)
{
    FunctionalSet fs;
    fs.intervals.push_back(interval);
    return simulate(params, config, fs).intervals.front();
}

McEstimate estimate_mgf(const ModelParams& params, const SimConfig& config, const Vec2& theta,
                        MgfKind which)
{
    FunctionalSet fs;
    if (which == MgfKind::TimeIntegral) {
        fs.f_thetas.push_back(theta);
        return simulate(params, config, fs).f_values.front();
    }
    fs.g_thetas.push_back(theta[0]);
    return simulate(params, config, fs).g_values.front();
}

PathTrace trace_path(const ModelParams& params, const SimConfig& config, std::uint64_t index,
                     std::size_t max_steps)
{
    validate_config(config);
    validate_and_normalize(params);
    const Scheme s = make_scheme(params, config);
    auto eng = unit_engine(config.seed, index);
    boost::random::normal_distribution<double> normal;

    PathTrace out;
    double z2 = s.x[1];
    double z1 = s.x[0];
    double l = 0.0;
    const std::uint64_t limit = std::min<std::uint64_t>(s.max_steps, max_steps);
    for (std::uint64_t n = 0; n < limit; ++n) {
        const double xi1 = normal(eng);
        const double xi2 = normal(eng);
        const double dl = step_second(s, z2, xi2, eng);
        z1 += s.drift1 + s.corr1 * xi2 + s.r * dl + s.ind1 * xi1;
        l += dl;
        out.z.push_back({z1, z2});
        out.local_time.push_back(l);
        if (z1 < -s.stop_left)
            break;
    }
    return out;
}

} // namespace rbm
