#include "qfl/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qfl::experiments {

Bundle make_bundle(const codes::CssCode& code, std::size_t T, bool periodic_time) {
    Bundle b;
    b.code = code;
    b.lattice = foliation::foliate(code, T, periodic_time);
    b.problem = foliation::build_decoding_problem(b.lattice);
    return b;
}

double break_even(double p, std::size_t k) {
    if (p < 0 || p > 1) throw std::invalid_argument("break_even: p must be in [0, 1]");
    if (k < 1) throw std::invalid_argument("break_even: k must be >= 1");
    return 1.0 - std::pow(1.0 - p, static_cast<double>(k));
}

Wilson wilson_interval(uint64_t failures, uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(failures) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    Wilson w{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (failures == 0) w.low = 0.0;
    if (failures == trials) w.high = 1.0;
    return w;
}

SweepPoint estimate_point(const Bundle& bundle, const noise::NoiseConfig& cfg, FailureRule rule,
                          uint64_t trials, uint64_t seed, uint64_t stream, unsigned threads) {
    const auto& lattice = bundle.lattice;
    const auto& problem = bundle.problem;
    uint64_t failures = run_trials(trials, threads, [&] {
        // Per-thread decoder; the problem itself is shared read-only.
        auto dec = std::make_shared<decoder::UnionFindDecoder>(problem);
        return [&, dec](uint64_t trial) -> bool {
            noise::TrialRng rng(seed, stream, trial);
            noise::TrialNoise tn = noise::sample(lattice, problem, cfg, rng);
            if (rule == FailureRule::AnyLostLogical)
                return !decoder::lost_logicals(problem, tn.erased).empty();
            gf2::BitVec syndrome = problem.syndrome_of(tn.error);
            gf2::BitVec correction = dec->decode(syndrome, tn.erased);
            correction.xor_with(tn.error);
            for (std::size_t ell = 0; ell < problem.k; ++ell)
                if (problem.logical_parity(ell, correction)) return true;
            return false;
        };
    });
    SweepPoint pt;
    pt.code = bundle.code.name;
    pt.T = bundle.lattice.T;
    pt.noise = cfg;
    pt.trials = trials;
    pt.failures = failures;
    pt.p_bar = trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    Wilson w = wilson_interval(failures, trials);
    pt.ci_low = w.low;
    pt.ci_high = w.high;
    return pt;
}

std::pair<double, double> theta_line_point(const SweepBounds& b, double theta, double x) {
    double p_e = (x * (b.p_e_max - b.p_e_min) + b.p_e_min) * std::cos(theta);
    double p_l = (x * (b.p_l_max - b.p_l_min) + b.p_l_min) * std::sin(theta);
    return {p_e, p_l};
}

std::vector<SweepPoint> sweep_line(const Bundle& bundle, double theta,
                                   const std::vector<double>& x_grid, uint64_t trials,
                                   uint64_t seed, unsigned threads, const SweepBounds& bounds) {
    std::vector<SweepPoint> out;
    uint64_t stream = 0;
    for (double x : x_grid) {
        auto [p_e, p_l] = theta_line_point(bounds, theta, x);
        noise::NoiseConfig cfg;
        cfg.kind = noise::NoiseKind::IID;
        cfg.p_e = p_e;
        cfg.p_l = p_l;
        out.push_back(
            estimate_point(bundle, cfg, FailureRule::AnyLogicalFlip, trials, seed, stream++, threads));
    }
    return out;
}

namespace {

struct BisectOutcome {
    double low = 0.0, high = 1.0;
    std::vector<SweepPoint> evaluations;
};

// Bisection on sign(g) over [low, high] given g(low) < 0 < g(high).
// `eval` returns (g-value, SweepPoint) at a parameter.
template <typename Eval, typename Physical>
BisectOutcome bisect_sign(double low, double high, Eval&& eval, Physical&& physical,
                          const BisectOptions& opts) {
    BisectOutcome out;
    auto [g_low, pt_low] = eval(low);
    auto [g_high, pt_high] = eval(high);
    out.evaluations.push_back(pt_low);
    out.evaluations.push_back(pt_high);
    if (g_low >= 0 || g_high <= 0) throw std::runtime_error("no crossing in range");
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        double mid = 0.5 * (low + high);
        double span = std::abs(physical(high) - physical(low));
        double scale = std::abs(physical(mid));
        if (scale > 0 && span / scale < opts.rel_resolution) break;
        auto [g_mid, pt_mid] = eval(mid);
        out.evaluations.push_back(pt_mid);
        if (g_mid < 0)
            low = mid;
        else
            high = mid;
    }
    out.low = low;
    out.high = high;
    return out;
}

}  // namespace

PseudoThresholdResult pseudo_threshold(const Bundle& bundle, double theta, uint64_t trials,
                                       uint64_t seed, unsigned threads, const SweepBounds& bounds,
                                       const BisectOptions& opts) {
    uint64_t stream = 0;
    std::size_t k = bundle.code.k;
    auto eval = [&](double x) {
        auto [p_e, p_l] = theta_line_point(bounds, theta, x);
        noise::NoiseConfig cfg;
        cfg.kind = noise::NoiseKind::IID;
        cfg.p_e = p_e;
        cfg.p_l = p_l;
        SweepPoint pt =
            estimate_point(bundle, cfg, FailureRule::AnyLogicalFlip, trials, seed, stream++, threads);
        double target = break_even(noise::combined_error_rate(p_e, p_l), k);
        return std::make_pair(pt.p_bar - target, pt);
    };
    // Reported crossing value: the swept physical rate. Pure-error lines
    // report p_e, pure-erasure lines report p_l, mixed lines report x.
    auto physical = [&](double x) {
        auto [p_e, p_l] = theta_line_point(bounds, theta, x);
        if (std::abs(theta) < 1e-12) return p_e;
        if (std::abs(theta - M_PI_2) < 1e-12) return p_l;
        return x;
    };

    BisectOutcome bo = bisect_sign(0.0, 1.0, eval, physical, opts);
    PseudoThresholdResult res;
    res.code = bundle.code.name;
    if (std::abs(theta) < 1e-12)
        res.axis = "error-only";
    else if (std::abs(theta - M_PI_2) < 1e-12)
        res.axis = "erasure-only";
    else
        res.axis = "theta=" + std::to_string(theta);
    res.bracket_low = physical(bo.low);
    res.bracket_high = physical(bo.high);
    res.crossing = 0.5 * (res.bracket_low + res.bracket_high);
    res.k = k;
    res.trials = trials;
    res.evaluations = std::move(bo.evaluations);
    return res;
}

std::vector<PseudoThresholdResult> rus_threshold_curve(const Bundle& bundle,
                                                       const std::vector<int>& n_values,
                                                       uint64_t trials, uint64_t seed,
                                                       unsigned threads,
                                                       const RusCurveOptions& opts) {
    std::vector<PseudoThresholdResult> out;
    uint64_t stream = 0;
    std::size_t k = bundle.code.k;
    for (int n : n_values) {
        auto eval = [&](double loss) {
            noise::NoiseConfig cfg;
            cfg.kind = noise::NoiseKind::RUS;
            cfg.eta = 1.0 - loss;
            cfg.max_attempts = n;
            cfg.strategy = opts.strategy;
            SweepPoint pt = estimate_point(bundle, cfg, opts.rule, trials, seed, stream++, threads);
            return std::make_pair(pt.p_bar - break_even(loss, k), pt);
        };
        auto physical = [](double loss) { return loss; };
        BisectOutcome bo = bisect_sign(opts.loss_low, opts.loss_high, eval, physical, opts.bisect);
        PseudoThresholdResult res;
        res.code = bundle.code.name;
        res.axis = "loss(N=" + std::to_string(n) + ")";
        res.bracket_low = bo.low;
        res.bracket_high = bo.high;
        res.crossing = 0.5 * (bo.low + bo.high);
        res.k = k;
        res.trials = trials;
        res.evaluations = std::move(bo.evaluations);
        out.push_back(std::move(res));
    }
    return out;
}

PseudoThresholdResult rus_size_crossing(const Bundle& smaller, const Bundle& larger, int n_value,
                                        uint64_t trials, uint64_t seed, unsigned threads,
                                        const RusCurveOptions& opts) {
    uint64_t stream = 0;
    auto eval = [&](double loss) {
        noise::NoiseConfig cfg;
        cfg.kind = noise::NoiseKind::RUS;
        cfg.eta = 1.0 - loss;
        cfg.max_attempts = n_value;
        cfg.strategy = opts.strategy;
        SweepPoint a = estimate_point(smaller, cfg, opts.rule, trials, seed, stream++, threads);
        SweepPoint b = estimate_point(larger, cfg, opts.rule, trials, seed, stream++, threads);
        // Below threshold the larger lattice wins; above it loses.
        return std::make_pair(b.p_bar - a.p_bar, a);
    };
    auto physical = [](double loss) { return loss; };
    BisectOutcome bo = bisect_sign(opts.loss_low, opts.loss_high, eval, physical, opts.bisect);
    PseudoThresholdResult res;
    res.code = smaller.code.name + "/" + larger.code.name;
    res.axis = "loss-crossing(N=" + std::to_string(n_value) + ")";
    res.bracket_low = bo.low;
    res.bracket_high = bo.high;
    res.crossing = 0.5 * (bo.low + bo.high);
    res.k = smaller.code.k;
    res.trials = trials;
    res.evaluations = std::move(bo.evaluations);
    return res;
}

std::vector<SweepPoint> grid_sweep(const Bundle& bundle, const std::vector<double>& p_e_grid,
                                   const std::vector<double>& p_l_grid, uint64_t trials,
                                   uint64_t seed, unsigned threads) {
    std::vector<SweepPoint> out;
    uint64_t stream = 0;
    for (double p_l : p_l_grid)
        for (double p_e : p_e_grid) {
            noise::NoiseConfig cfg;
            cfg.kind = noise::NoiseKind::IID;
            cfg.p_e = p_e;
            cfg.p_l = p_l;
            out.push_back(estimate_point(bundle, cfg, FailureRule::AnyLogicalFlip, trials, seed,
                                         stream++, threads));
        }
    return out;
}

void write_csv_header(std::ostream& out) {
    out << "code,T,kind,p_e,p_l,eta,N,trials,failures,p_bar,ci_low,ci_high\n";
}

namespace {
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
}  // namespace

void write_csv_row(std::ostream& out, const SweepPoint& p) {
    bool iid = p.noise.kind == noise::NoiseKind::IID;
    out << p.code << ',' << p.T << ',' << (iid ? "iid" : "rus") << ',' << fmt(p.noise.p_e) << ','
        << fmt(p.noise.p_l) << ',' << fmt(iid ? 0.0 : p.noise.eta) << ','
        << (iid ? 0 : p.noise.max_attempts) << ',' << p.trials << ',' << p.failures << ','
        << fmt(p.p_bar) << ',' << fmt(p.ci_low) << ',' << fmt(p.ci_high) << '\n';
}

std::string pseudo_threshold_json(const PseudoThresholdResult& r) {
    nlohmann::json j;
    j["code"] = r.code;
    j["axis"] = r.axis;
    j["crossing"] = r.crossing;
    j["bracket_low"] = r.bracket_low;
    j["bracket_high"] = r.bracket_high;
    j["k"] = r.k;
    j["trials"] = r.trials;
    return j.dump(2);
}

}  // namespace qfl::experiments
