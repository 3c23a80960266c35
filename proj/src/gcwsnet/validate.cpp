#include "gcwsnet/validate.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gcwsnet/gcws.hpp"
#include "gcwsnet/nrff.hpp"
#include "gcwsnet/rng.hpp"
#include "gcwsnet/sketch.hpp"

namespace gcwsnet::validate {

bool recompute_verdict(const McReport& r) {
    const double diff = std::abs(r.empirical - r.theoretical);
    // "exact" still runs through floating-point accumulation, so allow
    // rounding-level slack rather than demanding bitwise equality
    if (r.kind == "exact") {
        return diff <= 1e-12 * std::max(1.0, std::abs(r.theoretical));
    }
    if (r.kind == "relative") return diff <= r.tolerance * std::abs(r.theoretical);
    if (r.kind == "abs") return diff <= r.tolerance;
    return diff <= 3.0 * r.se;
}

std::pair<core::SparseVector, core::SparseVector> random_pair(const PairSpec& spec,
                                                              std::uint64_t seed) {
    rng::Stream s(seed, rng::kSynthetic, 0, 0);
    core::SparseVector u, v;
    u.dim = v.dim = spec.dim;
    for (std::int64_t i = 0; i < spec.dim; ++i) {
        if (s.next_unit() >= spec.sparsity) continue;
        const double mag = std::pow(10.0, 6.0 * s.next_unit() - 3.0);
        const double sign = s.next_unit() < 0.5 ? -1.0 : 1.0;
        const double val = sign * mag;
        if (s.next_unit() < spec.overlap) {
            u.entries.emplace_back(i, val);
            // half the shared coordinates match exactly, the rest differ by a
            // relative offset small enough that p*|dlog| stays << 1 at p=80;
            // larger offsets break the 0-bit approximation at extreme p
            if (s.next_unit() < 0.5) {
                v.entries.emplace_back(i, val);
            } else {
                v.entries.emplace_back(i, val * std::pow(10.0, 2e-4 * s.next_unit() - 1e-4));
            }
        } else if (s.next_unit() < 0.5) {
            u.entries.emplace_back(i, val);
        } else {
            v.entries.emplace_back(i, val);
        }
    }
    // keep both nonzero
    if (u.entries.empty()) u.entries.emplace_back(0, 1.0);
    if (v.entries.empty()) v.entries.emplace_back(1, 1.0);
    return {std::move(u), std::move(v)};
}

namespace {

McReport proportion_report(const std::string& name, double theoretical,
                           std::int64_t hits, std::int64_t trials) {
    McReport r;
    r.name = name;
    r.theoretical = theoretical;
    r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    r.trials = trials;
    if (theoretical <= 0.0 || theoretical >= 1.0) {
        r.kind = "exact";
        r.se = 0.0;
    } else {
        r.kind = "3se";
        r.se = std::sqrt(theoretical * (1.0 - theoretical) / static_cast<double>(trials));
    }
    r.pass = recompute_verdict(r);
    return r;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        n += 1;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double variance() const {
        const double m = mean();
        return (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    }
    double se_of_mean() const { return std::sqrt(variance() / static_cast<double>(n)); }
};

} // namespace

McReport check_theorem1(const core::SparseVector& u, const core::SparseVector& v,
                        double p, std::int64_t trials, std::uint64_t seed) {
    const double j_exact = core::pgmm_kernel(u, v, p);
    const core::TransformedVector tu = core::sign_split(u);
    const core::TransformedVector tv = core::sign_split(v);
    gcws::GcwsConfig cfg;
    cfg.p = p;
    cfg.k = 1;
    cfg.b = 1;
    cfg.seed = seed;
    std::int64_t hits = 0;
    for (std::int64_t j = 0; j < trials; ++j) {
        const auto hu = gcws::gcws_hash_one(tu, cfg, j);
        const auto hv = gcws::gcws_hash_one(tv, cfg, j);
        if (hu.istar == hv.istar && hu.tstar == hv.tstar) ++hits;
    }
    std::ostringstream name;
    name << "theorem1 full-pair collision (p=" << p << ")";
    return proportion_report(name.str(), j_exact, hits, trials);
}

McReport check_theorem2(const core::SparseVector& u, const core::SparseVector& v,
                        double p, int b, std::int64_t trials, std::uint64_t seed) {
    const double j_exact = core::pgmm_kernel(u, v, p);
    const double pb = j_exact + (1.0 - j_exact) * std::ldexp(1.0, -b);
    const core::TransformedVector tu = core::sign_split(u);
    const core::TransformedVector tv = core::sign_split(v);
    gcws::GcwsConfig cfg;
    cfg.p = p;
    cfg.k = 1;
    cfg.b = 1;
    cfg.seed = seed;
    std::int64_t hits = 0;
    for (std::int64_t j = 0; j < trials; ++j) {
        const auto hu = gcws::gcws_hash_one(tu, cfg, j);
        const auto hv = gcws::gcws_hash_one(tv, cfg, j);
        // re-key the uniform map per repetition: the collision law averages
        // over the map's randomness, and the (i*, t*) pairs repeat heavily
        // across j
        const std::uint64_t map_seed = rng::mix64(seed + static_cast<std::uint64_t>(j));
        const auto cu = gcws::uniform_pair_code(hu.istar, hu.tstar, b, map_seed);
        const auto cv = gcws::uniform_pair_code(hv.istar, hv.tstar, b, map_seed);
        if (cu == cv) ++hits;
    }
    std::ostringstream name;
    name << "theorem2 b-bit collision (p=" << p << ", b=" << b << ")";
    McReport r = proportion_report(name.str(), pb, hits, trials);
    if (j_exact >= 1.0) {
        // identical transformed vectors collide always, regardless of b
        r.kind = "exact";
        r.theoretical = 1.0;
        r.se = 0.0;
        r.pass = recompute_verdict(r);
    }
    return r;
}

McReport check_0bit(const core::SparseVector& u, const core::SparseVector& v,
                    double p, std::int64_t trials, std::uint64_t seed) {
    const double j_exact = core::pgmm_kernel(u, v, p);
    const core::TransformedVector tu = core::sign_split(u);
    const core::TransformedVector tv = core::sign_split(v);
    gcws::GcwsConfig cfg;
    cfg.p = p;
    cfg.k = 1;
    cfg.b = 1;
    cfg.seed = seed;
    std::int64_t hits = 0;
    for (std::int64_t j = 0; j < trials; ++j) {
        const auto hu = gcws::gcws_hash_one(tu, cfg, j);
        const auto hv = gcws::gcws_hash_one(tv, cfg, j);
        if (hu.istar == hv.istar) ++hits;
    }
    std::ostringstream name;
    name << "0-bit approximation (p=" << p << ")";
    McReport r;
    r.name = name.str();
    r.theoretical = j_exact;
    r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    r.trials = trials;
    if (j_exact <= 0.0 || j_exact >= 1.0) {
        r.kind = "exact";
        r.se = 0.0;
    } else {
        // the index-only approximation has no closed-form bound; 0.02 is an
        // engineering threshold
        r.kind = "abs";
        r.tolerance = 0.02;
        r.se = std::sqrt(j_exact * (1.0 - j_exact) / static_cast<double>(trials));
    }
    r.pass = recompute_verdict(r);
    return r;
}

std::vector<McReport> check_countsketch(int k, int b, double jaccard, double m,
                                        std::int64_t trials, std::uint64_t seed) {
    const double pb = jaccard + (1.0 - jaccard) * std::ldexp(1.0, -b);
    gcws::GcwsConfig gc;
    gc.p = 1.0;
    gc.k = k;
    gc.b = b;
    gc.seed = seed;
    const std::int64_t bins = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(gc.code_space()) * k / m));
    const std::uint32_t space = gc.code_space();

    Moments est;
    for (std::int64_t t = 0; t < trials; ++t) {
        rng::Stream s(seed, rng::kSynthetic, static_cast<std::uint64_t>(t), 1);
        std::vector<std::uint32_t> cu(static_cast<std::size_t>(k));
        std::vector<std::uint32_t> cv(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            const auto code = static_cast<std::uint32_t>(s.next_u64() % space);
            cu[static_cast<std::size_t>(j)] = code;
            cv[static_cast<std::size_t>(j)] =
                s.next_unit() < jaccard ? code
                                        : static_cast<std::uint32_t>(s.next_u64() % space);
        }
        sketch::CountSketchConfig cs;
        cs.bins = bins;
        cs.seed = rng::mix64(seed ^ (static_cast<std::uint64_t>(t) * rng::kGolden));
        const auto z = sketch::count_sketch(sketch::one_hot(cu, gc), cs);
        const auto w = sketch::count_sketch(sketch::one_hot(cv, gc), cs);
        est.add(sketch::estimate_pb(z, w, k));
    }

    std::ostringstream base;
    base << "(k=" << k << ", b=" << b << ", J=" << jaccard << ", m=" << m << ")";

    McReport mean_r;
    mean_r.name = "count-sketch estimator mean " + base.str();
    mean_r.theoretical = pb;
    mean_r.empirical = est.mean();
    mean_r.se = est.se_of_mean();
    mean_r.trials = trials;
    mean_r.kind = "3se";
    mean_r.pass = recompute_verdict(mean_r);

    McReport var_r;
    var_r.name = "count-sketch estimator variance " + base.str();
    var_r.theoretical = sketch::cs_variance(pb, k, static_cast<double>(bins));
    var_r.empirical = est.variance();
    var_r.trials = trials;
    var_r.kind = "relative";
    var_r.tolerance = 0.15;
    var_r.pass = recompute_verdict(var_r);
    return {mean_r, var_r};
}

std::vector<McReport> check_nrff(double rho, double gamma, int k,
                                 std::int64_t trials, std::uint64_t seed) {
    core::SparseVector u, v;
    u.dim = v.dim = 2;
    u.entries = {{0, 1.0}};
    if (rho >= 1.0) {
        v.entries = {{0, 1.0}};
    } else if (rho == 0.0) {
        v.entries = {{1, 1.0}};
    } else {
        v.entries = {{0, rho}, {1, std::sqrt(1.0 - rho * rho)}};
    }
    const double target = std::exp(-gamma * (1.0 - rho));
    const auto vs = nrff::nrff_variance(rho, gamma);

    Moments est;
    for (std::int64_t t = 0; t < trials; ++t) {
        nrff::RffConfig cfg;
        cfg.k = k;
        cfg.gamma = gamma;
        cfg.normalize = true;
        cfg.seed = rng::mix64(seed ^ (static_cast<std::uint64_t>(t) * rng::kGolden));
        const auto fu = nrff::rff_features(u, cfg);
        const auto fv = nrff::rff_features(v, cfg);
        double dot = 0.0;
        for (int j = 0; j < k; ++j) {
            dot += fu[static_cast<std::size_t>(j)] * fv[static_cast<std::size_t>(j)];
        }
        est.add(dot / static_cast<double>(k));
    }

    std::ostringstream base;
    base << "(rho=" << rho << ", gamma=" << gamma << ", k=" << k << ")";

    McReport mean_r;
    mean_r.name = "nrff estimator mean " + base.str();
    mean_r.theoretical = target;
    mean_r.empirical = est.mean();
    mean_r.trials = trials;
    if (rho >= 1.0) {
        mean_r.kind = "exact";
        mean_r.se = 0.0;
    } else {
        mean_r.kind = "3se";
        mean_r.se = est.se_of_mean();
    }
    mean_r.pass = recompute_verdict(mean_r);

    McReport var_r;
    var_r.name = "nrff k*variance " + base.str();
    var_r.theoretical = vs.normalized;
    var_r.empirical = static_cast<double>(k) * (rho >= 1.0 ? 0.0 : est.variance());
    var_r.trials = trials;
    if (rho >= 1.0) {
        var_r.kind = "exact";
    } else {
        var_r.kind = "relative";
        var_r.tolerance = 0.15;
    }
    var_r.pass = recompute_verdict(var_r);
    return {mean_r, var_r};
}

namespace {

void run_pairwise_suite(const std::string& which, std::int64_t trials,
                        std::uint64_t seed, std::vector<McReport>& out) {
    const std::vector<double> p_values = {0.5, 1.0, 2.0, 80.0};
    const int pairs = 5;
    for (double p : p_values) {
        for (int i = 0; i < pairs; ++i) {
            PairSpec spec;
            const auto [u, v] = random_pair(spec, seed + static_cast<std::uint64_t>(i));
            const std::uint64_t run_seed =
                rng::mix64(seed + 1000 * static_cast<std::uint64_t>(i) +
                           static_cast<std::uint64_t>(p * 8));
            if (which == "t1") {
                out.push_back(check_theorem1(u, v, p, trials, run_seed));
            } else if (which == "0bit") {
                out.push_back(check_0bit(u, v, p, trials, run_seed));
            } else {
                for (int b : {1, 2, 4, 8}) {
                    out.push_back(check_theorem2(u, v, p, b, trials, run_seed));
                }
            }
        }
    }
}

} // namespace

std::vector<McReport> run_suite(const std::string& suite, std::int64_t trials,
                                std::uint64_t seed) {
    std::vector<McReport> out;
    const bool all = suite == "all";
    if (all || suite == "t1") run_pairwise_suite("t1", trials, seed, out);
    if (all || suite == "t2") run_pairwise_suite("t2", trials, seed, out);
    if (all || suite == "0bit") run_pairwise_suite("0bit", trials, seed, out);
    if (all || suite == "cs") {
        const std::int64_t cs_trials = std::min<std::int64_t>(trials, 10000);
        for (double j : {0.2, 0.5, 0.8}) {
            for (double m : {4.0, 16.0}) {
                auto reports = check_countsketch(256, 4, j, m, cs_trials, seed);
                out.insert(out.end(), reports.begin(), reports.end());
            }
        }
    }
    if (all || suite == "nrff") {
        const std::int64_t nrff_trials = std::min<std::int64_t>(trials, 2000);
        for (double rho : {0.0, 0.5, 0.9, 1.0}) {
            for (double gamma : {1.0, 5.0}) {
                auto reports = check_nrff(rho, gamma, 4096, nrff_trials, seed);
                out.insert(out.end(), reports.begin(), reports.end());
            }
        }
    }
    if (out.empty()) {
        raise(ErrorCode::InvalidParameter, "unknown validation suite: " + suite);
    }
    return out;
}

std::string reports_to_json(const std::vector<McReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        arr.push_back({{"name", r.name},
                       {"theoretical", r.theoretical},
                       {"empirical", r.empirical},
                       {"se", r.se},
                       {"trials", r.trials},
                       {"kind", r.kind},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    }
    return arr.dump(2);
}

bool all_pass(const std::vector<McReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass) return false;
    }
    return true;
}

} // namespace gcwsnet::validate
