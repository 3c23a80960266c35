// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL/SKIP line; the process exits nonzero when any check fails.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gcwsnet/core.hpp"
#include "gcwsnet/io.hpp"
#include "gcwsnet/learn.hpp"
#include "gcwsnet/pipeline.hpp"
#include "gcwsnet/rng.hpp"
#include "gcwsnet/sketch.hpp"
#include "gcwsnet/validate.hpp"

using namespace gcwsnet;
namespace fs = std::filesystem;

namespace {

const std::string kData = GCWSNET_DATA_DIR;
constexpr std::uint64_t kMasterSeed = 20240818;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " - "
              << detail << std::endl;
    if (!pass) ++g_failures;
}

void report_skip(int criterion, const std::string& detail) {
    std::cout << "criterion " << criterion << ": SKIP - " << detail << std::endl;
}

std::string tally(const std::vector<validate::McReport>& reports) {
    std::size_t ok = 0;
    std::string first_fail;
    for (const auto& r : reports) {
        if (r.pass) {
            ++ok;
        } else if (first_fail.empty()) {
            std::ostringstream os;
            os << "; first failure: " << r.name << " theoretical=" << r.theoretical
               << " empirical=" << r.empirical << " se=" << r.se;
            first_fail = os.str();
        }
    }
    std::ostringstream os;
    os << ok << "/" << reports.size() << " checks" << first_fail;
    return os.str();
}

fs::path tmp(const std::string& name) {
    return fs::temp_directory_path() / ("gcwsnet_accept_" + name);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void cleanup(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) {
        fs::remove(p);
        fs::remove(p.string() + ".manifest.json");
    }
}

// ---- 1-3: collision laws of the hash -------------------------------------

void criterion_collision_full() {
    std::vector<validate::McReport> reports;
    for (double p : {0.5, 1.0, 2.0, 80.0}) {
        for (int i = 0; i < 20; ++i) {
            const auto [u, v] =
                validate::random_pair(validate::PairSpec{}, kMasterSeed + i);
            const std::uint64_t run_seed =
                rng::mix64(kMasterSeed + 1000 * static_cast<std::uint64_t>(i) +
                           static_cast<std::uint64_t>(p * 8));
            reports.push_back(validate::check_theorem1(u, v, p, 100000, run_seed));
        }
    }
    report(1, validate::all_pass(reports),
           "full-pair hash collision rate matches the kernel "
           "(20 pairs per p in {0.5,1,2,80}, 1e5 hashes), " +
               tally(reports));
}

void criterion_collision_bbit() {
    const auto reports = validate::run_suite("t2", 50000, kMasterSeed);
    report(2, validate::all_pass(reports),
           "b-bit collision rate matches J + (1-J)/2^b for b in {1,2,4,8}, " +
               tally(reports));
}

void criterion_collision_0bit() {
    const auto reports = validate::run_suite("0bit", 100000, kMasterSeed);
    report(3, validate::all_pass(reports),
           "index-only collision rate within 0.02 of the kernel, " + tally(reports));
}

// ---- 4: count-sketch estimator + learning parity -------------------------

struct TrainedAccuracy {
    double accuracy = 0.0;
};

double train_digits(const std::string& preproc_spec) {
    const auto train_ds = io::load_libsvm(kData + "/digits_train.libsvm");
    const auto test_ds = io::load_libsvm(kData + "/digits_test.libsvm");
    const auto cfg = pipeline::PreprocConfig::parse(preproc_spec);
    const auto x = pipeline::featurize(train_ds, cfg);
    const auto ex = pipeline::featurize(test_ds, cfg);

    const auto map = learn::LabelMap::build({&train_ds.labels, &test_ds.labels});
    const auto y = map.apply(train_ds.labels);
    const auto ey = map.apply(test_ds.labels);

    learn::NetConfig net;
    net.layers = 1;
    net.lr = 0.01;
    net.epochs = 20.0;
    net.seed = 5;
    const auto [model, history] = learn::train(x, y, net, ex, ey);
    return history.back().test_accuracy;
}

void criterion_countsketch() {
    const auto reports = validate::run_suite("cs", 10000, kMasterSeed);
    bool pass = validate::all_pass(reports);
    std::string detail =
        "count-sketch estimator mean/variance, " + tally(reports);

    // Learning parity: 16x compression should cost almost no accuracy.
    // One-hot width is k * 2^b = 32 * 256 = 8192; B = 512 is m = 16.
    const double acc_full =
        train_digits("gcws:p=2,k=32,b=8,seed=41");
    const double acc_cs =
        train_digits("gcws+cs:p=2,k=32,b=8,seed=41,B=512,cs_seed=42");
    const bool parity = std::abs(acc_full - acc_cs) <= 0.02;
    if (!parity) pass = false;
    std::ostringstream os;
    os << detail << "; accuracy one-hot=" << acc_full << " vs 16x sketch=" << acc_cs;
    report(4, pass, os.str());
}

// ---- 5: variance-ratio closed form ---------------------------------------

void criterion_ratio() {
    bool pass = true;
    std::ostringstream os;
    const double r1 = sketch::cs_ratio(8, 0.5, 1.0);
    const double r16 = sketch::cs_ratio(8, 0.5, 16.0);
    if (std::abs(r1 - 0.019562) > 1e-6 || std::abs(r16 - 0.312994) > 1e-6) {
        pass = false;
        os << "; frozen values off: " << r1 << ", " << r16;
    }
    // Holding m = 2^(b-8) fixes the compression budget; the curves for
    // b in {8,12,16} then agree within 1% for J >= 0.25. (Below that the
    // b=8 curve provably drifts a few percent, since P_b = J + (1-J)/2^b
    // inflates small J more at coarser b.)
    double worst = 0.0;
    for (double j = 0.25; j <= 0.951; j += 0.05) {
        const double base = sketch::cs_ratio(8, j, 1.0);
        for (int b : {12, 16}) {
            const double m = std::ldexp(1.0, b - 8);
            const double r = sketch::cs_ratio(b, j, m);
            worst = std::max(worst, std::abs(r - base) / base);
        }
    }
    if (worst > 0.01) pass = false;
    os << "; max curve deviation " << worst;
    report(5, pass, "variance-ratio closed form and matched-budget curves" + os.str());
}

// ---- 6: normalized random Fourier features -------------------------------

void criterion_nrff() {
    const auto reports = validate::run_suite("nrff", 2000, kMasterSeed);
    report(6, validate::all_pass(reports),
           "normalized RFF mean and variance (k=4096, rho=1 exact), " + tally(reports));
}

// ---- 7: extreme-power stability ------------------------------------------

void criterion_extreme_p() {
    bool pass = true;
    std::ostringstream os;
    const auto out = tmp("bigvals_p80.codes");
    try {
        gcws::GcwsConfig cfg;
        cfg.p = 80.0;
        cfg.k = 64;
        cfg.b = 8;
        cfg.tbits = 8;
        cfg.seed = 7;
        pipeline::run_hash(kData + "/bigvals.libsvm", cfg, out.string());
        const auto cf = io::load_codes(out.string());
        if (cf.codes.size() != 20) {
            pass = false;
            os << "; wrong row count " << cf.codes.size();
        }
    } catch (const std::exception& e) {
        pass = false;
        os << "; hashing at p=80 failed: " << e.what();
    }
    cleanup({out});

    // The naive value-domain transform must overflow on the same data.
    bool overflowed = false;
    try {
        const auto ds = io::load_libsvm(kData + "/bigvals.libsvm");
        for (const auto& row : ds.rows) core::power_transform(row, 80.0);
    } catch (const Error& e) {
        overflowed = e.code() == ErrorCode::Overflow;
    }
    if (!overflowed) {
        pass = false;
        os << "; value-domain u^80 did not overflow";
    }
    report(7, pass, "log-domain hashing survives p=80 on 1e6-scale values" + os.str());
}

// ---- 8: trainer correctness ----------------------------------------------

bool gradient_check_all() {
    rng::Stream s(13, rng::kSynthetic, 99, 0);
    learn::FeatureMatrix x;
    x.width = 7;
    for (int i = 0; i < 2; ++i) {
        std::vector<double> row(7);
        for (double& v : row) v = 2.0 * s.next_unit() - 1.0;
        x.dense.push_back(std::move(row));
    }
    for (int layers : {1, 2, 3}) {
        learn::NetConfig cfg;
        cfg.layers = layers;
        cfg.hidden = 6;
        cfg.seed = 100 + layers;
        auto m = learn::init_model(7, {0.0, 1.0, 2.0}, cfg);
        for (std::size_t row = 0; row < 2; ++row) {
            const int label = static_cast<int>(row + 1);
            learn::ModelGradients g;
            learn::sample_loss_gradients(m, x, row, label, g);
            const double h = 1e-6;
            for (int l = 0; l < m.n_layers(); ++l) {
                auto& w = m.weights[static_cast<std::size_t>(l)];
                for (std::size_t i = 0; i < w.a.size(); ++i) {
                    const double keep = w.a[i];
                    w.a[i] = keep + h;
                    const double up =
                        -std::log(learn::predict_proba(m, x, row)[static_cast<std::size_t>(label)]);
                    w.a[i] = keep - h;
                    const double dn =
                        -std::log(learn::predict_proba(m, x, row)[static_cast<std::size_t>(label)]);
                    w.a[i] = keep;
                    const double fd = (up - dn) / (2 * h);
                    if (std::abs(g.weights[static_cast<std::size_t>(l)].a[i] - fd) > 1e-5) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

bool sparse_dense_parity() {
    learn::NetConfig cfg;
    cfg.layers = 1;
    cfg.seed = 2;
    const auto m = learn::init_model(16, {0.0, 1.0}, cfg);
    const std::vector<std::int64_t> positions = {0, 3, 3, 15};
    std::vector<double> sparse_out;
    learn::sparse_binary_forward(positions, m.weights[0], m.biases[0], sparse_out);
    std::vector<double> dense(16, 0.0);
    for (auto p : positions) dense[static_cast<std::size_t>(p)] += 1.0;
    for (std::size_t r = 0; r < sparse_out.size(); ++r) {
        double acc = m.biases[0][r];
        for (int c = 0; c < 16; ++c) {
            acc += m.weights[0].at(static_cast<int>(r), c) * dense[static_cast<std::size_t>(c)];
        }
        if (std::abs(acc - sparse_out[r]) > 1e-12) return false;
    }
    return true;
}

void criterion_trainer() {
    bool pass = true;
    std::ostringstream os;
    if (!gradient_check_all()) {
        pass = false;
        os << "; gradient check failed";
    }
    if (!sparse_dense_parity()) {
        pass = false;
        os << "; sparse/dense forward mismatch";
    }
    const auto train_ds = io::load_libsvm(kData + "/toy_train.libsvm");
    const auto test_ds = io::load_libsvm(kData + "/toy_test.libsvm");
    pipeline::PreprocConfig raw;
    const auto x = pipeline::featurize(train_ds, raw);
    const auto ex = pipeline::featurize(test_ds, raw);
    const auto map = learn::LabelMap::build({&train_ds.labels, &test_ds.labels});
    learn::NetConfig net;
    net.layers = 1;
    net.lr = 0.05;
    net.epochs = 5.0;
    net.seed = 1;
    const auto [model, history] =
        learn::train(x, map.apply(train_ds.labels), net, ex, map.apply(test_ds.labels));
    const double acc = history.back().test_accuracy;
    if (acc < 1.0) {
        pass = false;
        os << "; separable toy accuracy " << acc;
    }
    report(8, pass,
           "backprop matches finite differences; separable data reaches 100%" + os.str());
}

// ---- 9: external benchmark (needs a network download) --------------------

void criterion_benchmark() {
    report_skip(9, "external benchmark dataset not bundled; offline environment");
}

// ---- 10: reproducibility of every pipeline output ------------------------

void criterion_reproducible() {
    bool pass = true;
    std::ostringstream os;
    const auto c1 = tmp("rep1.codes"), c2 = tmp("rep2.codes");
    const auto s1 = tmp("rep1.sketch"), s2 = tmp("rep2.sketch");
    const auto n1 = tmp("rep1.nrff"), n2 = tmp("rep2.nrff");
    const auto h1 = tmp("rep1.csv"), h2 = tmp("rep2.csv");
    const auto m1 = tmp("rep1.model"), m2 = tmp("rep2.model");

    gcws::GcwsConfig gcfg;
    gcfg.p = 2.0;
    gcfg.k = 16;
    gcfg.b = 8;
    gcfg.seed = 31;
    pipeline::run_hash(kData + "/digits_train.libsvm", gcfg, c1.string());
    pipeline::run_hash(kData + "/digits_train.libsvm", gcfg, c2.string());
    pipeline::run_sketch(c1.string(), 256, 8, s1.string());
    pipeline::run_sketch(c2.string(), 256, 8, s2.string());
    nrff::RffConfig ncfg;
    ncfg.k = 64;
    ncfg.gamma = 1.0;
    ncfg.seed = 9;
    pipeline::run_nrff(kData + "/digits_train.libsvm", ncfg, n1.string());
    pipeline::run_nrff(kData + "/digits_train.libsvm", ncfg, n2.string());

    pipeline::TrainArgs args;
    args.features_path = s1.string();
    args.net.layers = 2;
    args.net.hidden = 32;
    args.net.epochs = 2.0;
    args.net.seed = 12;
    args.history_out = h1.string();
    args.model_out = m1.string();
    pipeline::run_train(args);
    args.features_path = s2.string();
    args.history_out = h2.string();
    args.model_out = m2.string();
    pipeline::run_train(args);

    const std::vector<std::pair<fs::path, fs::path>> outputs = {
        {c1, c2}, {s1, s2}, {n1, n2}, {h1, h2}, {m1, m2}};
    for (const auto& [a, b] : outputs) {
        if (slurp(a) != slurp(b)) {
            pass = false;
            os << "; " << a.filename().string() << " differs between reruns";
        }
    }
    cleanup({c1, c2, s1, s2, n1, n2, h1, h2, m1, m2});
    report(10, pass, "identical commands yield byte-identical outputs" + os.str());
}

} // namespace

int main() {
    criterion_collision_full();
    criterion_collision_bbit();
    criterion_collision_0bit();
    criterion_countsketch();
    criterion_ratio();
    criterion_nrff();
    criterion_extreme_p();
    criterion_trainer();
    criterion_benchmark();
    criterion_reproducible();
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed (1 skipped)" << std::endl;
    return 0;
}
