#include <cmath>
#include <vector>

#include <doctest.h>

#include "gcwsnet/nrff.hpp"
#include "gcwsnet/validate.hpp"

using namespace gcwsnet;

namespace {

core::SparseVector vec(std::initializer_list<double> dense) {
    return core::SparseVector::from_dense(std::vector<double>(dense));
}

double norm(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("rff config validation") {
    nrff::RffConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.k = 8;
    cfg.gamma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("normalized features have norm sqrt(k) exactly") {
    nrff::RffConfig cfg;
    cfg.k = 256;
    cfg.gamma = 2.0;
    cfg.seed = 7;
    const auto x = nrff::rff_features(vec({3.0, -1.0, 0.5}), cfg);
    REQUIRE(x.size() == 256);
    CHECK(norm(x) == doctest::Approx(std::sqrt(256.0)).epsilon(1e-12));

    // Raw features stay within the cosine envelope |X_j| <= sqrt(2).
    cfg.normalize = false;
    const auto raw = nrff::rff_features(vec({3.0, -1.0, 0.5}), cfg);
    for (double v : raw) CHECK(std::abs(v) <= std::sqrt(2.0) + 1e-12);
}

TEST_CASE("features are deterministic in the seed and invariant to input scale") {
    nrff::RffConfig cfg;
    cfg.k = 64;
    cfg.gamma = 1.0;
    cfg.seed = 12;
    const auto a = nrff::rff_features(vec({1.0, 2.0}), cfg);
    const auto b = nrff::rff_features(vec({1.0, 2.0}), cfg);
    CHECK(a == b);
    // Inputs are l2-normalized before projection, so scaling changes nothing.
    const auto c = nrff::rff_features(vec({10.0, 20.0}), cfg);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(c[i]).epsilon(1e-12));

    cfg.seed = 13;
    CHECK(nrff::rff_features(vec({1.0, 2.0}), cfg) != a);
}

TEST_CASE("inner products concentrate on the rbf kernel") {
    nrff::RffConfig cfg;
    cfg.k = 20000;
    cfg.gamma = 1.5;
    cfg.seed = 3;
    cfg.normalize = false;
    const auto u = vec({1.0, 0.0});
    const auto v = vec({0.6, 0.8}); // unit vectors, rho = 0.6
    const auto xu = nrff::rff_features(u, cfg);
    const auto xv = nrff::rff_features(v, cfg);
    double dot = 0;
    for (int i = 0; i < cfg.k; ++i) dot += xu[i] * xv[i];
    const double est = dot / cfg.k;
    const double want = std::exp(-cfg.gamma * (1.0 - 0.6));
    const auto var = nrff::nrff_variance(0.6, cfg.gamma);
    const double se = std::sqrt(var.unnormalized / cfg.k);
    CHECK(std::abs(est - want) < 4 * se);
}

TEST_CASE("variance closed forms at the corners") {
    // rho = 1: normalization removes all estimator noise.
    const auto at1 = nrff::nrff_variance(1.0, 5.0);
    CHECK(at1.normalized == doctest::Approx(0.0));
    CHECK(at1.unnormalized == doctest::Approx(0.5));

    // Hand-expanded at rho=0.5, gamma=1: e = exp(-1).
    const double e = std::exp(-1.0);
    const double v = 0.5 + 0.5 * (1.0 - e) * (1.0 - e);
    const double vn = v - 0.25 * e * (3.0 - e * e);
    const auto got = nrff::nrff_variance(0.5, 1.0);
    CHECK(got.unnormalized == doctest::Approx(v).epsilon(1e-12));
    CHECK(got.normalized == doctest::Approx(vn).epsilon(1e-12));

    // Normalization can only help.
    for (double rho : {0.0, 0.3, 0.7, 0.95}) {
        for (double gamma : {0.5, 1.0, 5.0}) {
            const auto r = nrff::nrff_variance(rho, gamma);
            CHECK(r.normalized <= r.unnormalized + 1e-15);
            CHECK(r.normalized >= 0.0);
        }
    }
}

TEST_CASE("monte carlo validator agrees with the closed forms") {
    for (const auto& r : validate::check_nrff(0.5, 1.0, 2048, 1200, 515)) {
        CHECK(r.pass);
        CHECK(validate::recompute_verdict(r));
    }
    // rho = 1 must be exact, not statistical.
    const auto exact = validate::check_nrff(1.0, 5.0, 1024, 50, 516);
    for (const auto& r : exact) CHECK(r.pass);
}
