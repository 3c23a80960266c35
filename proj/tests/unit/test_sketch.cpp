#include <cmath>
#include <map>
#include <vector>

#include <doctest.h>

#include "gcwsnet/rng.hpp"
#include "gcwsnet/sketch.hpp"
#include "gcwsnet/validate.hpp"

using namespace gcwsnet;

TEST_CASE("one_hot places each code inside its own block") {
    gcws::GcwsConfig cfg;
    cfg.k = 3;
    cfg.b = 2;
    cfg.tbits = 0;
    const auto f = sketch::one_hot({3, 0, 1}, cfg);
    CHECK(f.block_size == 4);
    CHECK(f.k == 3);
    CHECK(f.width() == 12);
    CHECK(f.set_positions == std::vector<std::int64_t>{3, 4, 9});

    CHECK_THROWS_AS(sketch::one_hot({3, 0}, cfg), Error);    // wrong count
    CHECK_THROWS_AS(sketch::one_hot({3, 0, 4}, cfg), Error); // code out of range
}

TEST_CASE("position_hash is deterministic and balanced") {
    sketch::CountSketchConfig cs;
    cs.bins = 64;
    cs.seed = 5;

    std::vector<std::int64_t> bin_counts(cs.bins, 0);
    std::int64_t plus = 0;
    const std::int64_t n = 64000;
    for (std::int64_t pos = 0; pos < n; ++pos) {
        std::int64_t bin;
        int sign;
        sketch::position_hash(cs, pos, bin, sign);
        std::int64_t bin2;
        int sign2;
        sketch::position_hash(cs, pos, bin2, sign2);
        CHECK(bin == bin2);
        CHECK(sign == sign2);
        REQUIRE(bin >= 0);
        REQUIRE(bin < cs.bins);
        REQUIRE((sign == 1 || sign == -1));
        ++bin_counts[bin];
        if (sign == 1) ++plus;
    }
    const double expect = static_cast<double>(n) / cs.bins;
    for (auto c : bin_counts) CHECK(std::abs(c - expect) < 5 * std::sqrt(expect));
    CHECK(std::abs(plus - n / 2.0) < 5 * std::sqrt(n / 4.0));
}

TEST_CASE("count_sketch is linear in the position multiset") {
    gcws::GcwsConfig cfg;
    cfg.k = 8;
    cfg.b = 4;
    cfg.tbits = 2;
    sketch::CountSketchConfig cs;
    cs.bins = 32;
    cs.seed = 11;

    rng::Stream s(1, rng::kSynthetic, 21, 0);
    std::vector<std::uint32_t> codes_a(8), codes_b(8);
    for (int j = 0; j < 8; ++j) {
        codes_a[j] = static_cast<std::uint32_t>(s.next_u64() % cfg.code_space());
        codes_b[j] = static_cast<std::uint32_t>(s.next_u64() % cfg.code_space());
    }
    const auto fa = sketch::one_hot(codes_a, cfg);
    const auto fb = sketch::one_hot(codes_b, cfg);
    const auto za = sketch::count_sketch(fa, cs);
    const auto zb = sketch::count_sketch(fb, cs);

    // Sketch of the concatenated multiset equals the sum of the sketches.
    sketch::EncodedFeatures both = fa;
    both.k = 16;
    both.set_positions.insert(both.set_positions.end(), fb.set_positions.begin(),
                              fb.set_positions.end());
    const auto zboth = sketch::count_sketch(both, cs);
    REQUIRE(zboth.values.size() == za.values.size());
    for (std::size_t i = 0; i < zboth.values.size(); ++i) {
        CHECK(zboth.values[i] == za.values[i] + zb.values[i]);
    }

    // Brute-force oracle: scatter each one-hot coordinate by hand.
    std::vector<std::int32_t> manual(cs.bins, 0);
    for (auto pos : fa.set_positions) {
        std::int64_t bin;
        int sign;
        sketch::position_hash(cs, pos, bin, sign);
        manual[bin] += sign;
    }
    CHECK(za.values == manual);
}

TEST_CASE("inner_product and estimate_pb match a dense oracle") {
    gcws::GcwsConfig cfg;
    cfg.k = 16;
    cfg.b = 4;
    sketch::CountSketchConfig cs;
    cs.bins = cfg.code_space() * cfg.k; // B = full one-hot width

    rng::Stream s(2, rng::kSynthetic, 22, 0);
    std::vector<std::uint32_t> cu(16), cv(16);
    int matches = 0;
    for (int j = 0; j < 16; ++j) {
        cu[j] = static_cast<std::uint32_t>(s.next_u64() % cfg.code_space());
        cv[j] = (s.next_unit() < 0.5) ? cu[j]
                                      : static_cast<std::uint32_t>(s.next_u64() % cfg.code_space());
        if (cu[j] == cv[j]) ++matches;
    }
    const auto zu = sketch::count_sketch(sketch::one_hot(cu, cfg), cs);
    const auto zv = sketch::count_sketch(sketch::one_hot(cv, cfg), cs);

    // With B == full width there are still bin collisions, so compare against
    // the signed dense dot product rather than the raw match count.
    std::map<std::int64_t, int> du, dv;
    for (auto pos : sketch::one_hot(cu, cfg).set_positions) {
        std::int64_t bin;
        int sign;
        sketch::position_hash(cs, pos, bin, sign);
        du[bin] += sign;
    }
    for (auto pos : sketch::one_hot(cv, cfg).set_positions) {
        std::int64_t bin;
        int sign;
        sketch::position_hash(cs, pos, bin, sign);
        dv[bin] += sign;
    }
    double dot = 0;
    for (const auto& [bin, val] : du) {
        auto it = dv.find(bin);
        if (it != dv.end()) dot += val * it->second;
    }
    CHECK(sketch::inner_product(zu, zv) == doctest::Approx(dot));
    CHECK(sketch::estimate_pb(zu, zv, cfg.k) == doctest::Approx(dot / cfg.k));

    sketch::SketchedFeatures wrong;
    wrong.values.assign(4, 0);
    CHECK_THROWS_AS(sketch::inner_product(zu, wrong), Error);
}

TEST_CASE("cs_variance closed form") {
    // At B -> inf the variance collapses to the binomial term.
    CHECK(sketch::cs_variance(0.3, 10, 1e18) == doctest::Approx(0.3 * 0.7 / 10).epsilon(1e-9));
    // Hand-expanded at pb=0.5, k=2, B=4:
    // 0.25/2 + (1/4)(1 + 0.25 - 0.125 - 0.25) = 0.125 + 0.21875
    CHECK(sketch::cs_variance(0.5, 2, 4) == doctest::Approx(0.34375).epsilon(1e-12));
}

TEST_CASE("cs_ratio frozen oracle values") {
    CHECK(sketch::cs_ratio(8, 0.5, 1.0) == doctest::Approx(0.019562).epsilon(1e-4));
    CHECK(sketch::cs_ratio(8, 0.5, 16.0) == doctest::Approx(0.312994).epsilon(1e-4));
    // Exact recomputation: P_b = 0.5 + 0.5/256.
    const double pb = 0.5 + 0.5 / 256.0;
    const double want = (1.0 / 256.0) * (1.0 + pb * pb) / (pb * (1.0 - pb));
    CHECK(sketch::cs_ratio(8, 0.5, 1.0) == doctest::Approx(want).epsilon(1e-12));
    CHECK(sketch::cs_ratio(8, 0.5, 16.0) == doctest::Approx(16.0 * want).epsilon(1e-12));
    // Degenerate inputs flag as +inf rather than dividing by zero.
    CHECK(std::isinf(sketch::cs_ratio(8, 1.0, 1.0)));
}

TEST_CASE("ratio_table covers the grid in row-major order") {
    const auto rows = sketch::ratio_table({8, 12}, {0.25, 0.5}, {1.0, 16.0});
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].b == 8);
    CHECK(rows[0].jaccard == 0.25);
    CHECK(rows[0].m == 1.0);
    for (const auto& r : rows) {
        CHECK(r.pb == doctest::Approx(r.jaccard + (1 - r.jaccard) / std::ldexp(1.0, r.b)));
        CHECK(r.ratio == doctest::Approx(sketch::cs_ratio(r.b, r.jaccard, r.m)));
    }
}

TEST_CASE("count-sketch estimator is unbiased on synthetic codes") {
    const auto reports = validate::check_countsketch(256, 4, 0.5, 4.0, 3000, 4242);
    REQUIRE(reports.size() == 2);
    for (const auto& r : reports) {
        CHECK(r.pass);
        CHECK(validate::recompute_verdict(r));
    }
}
