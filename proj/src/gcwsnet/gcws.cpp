#include "gcwsnet/gcws.hpp"

#include <cmath>
#include <limits>

#include "gcwsnet/rng.hpp"

namespace gcwsnet::gcws {

void GcwsConfig::validate() const {
    if (p == 0.0) raise(ErrorCode::InvalidParameter, "gcws: p must be nonzero");
    if (k <= 0) raise(ErrorCode::InvalidParameter, "gcws: k must be positive");
    if (b < 1 || b > 32) raise(ErrorCode::InvalidParameter, "gcws: b must be in [1, 32]");
    if (tbits < 0 || tbits > 8) raise(ErrorCode::InvalidParameter, "gcws: tbits must be in [0, 8]");
    if (b + tbits > 32) raise(ErrorCode::InvalidParameter, "gcws: b + tbits must be <= 32");
}

RcbTriple keyed_randoms(std::uint64_t seed, std::int64_t j, std::int64_t i) {
    rng::Stream s(seed, rng::kGcws, static_cast<std::uint64_t>(j),
                  static_cast<std::uint64_t>(i));
    RcbTriple t;
    t.r = s.next_gamma2();
    t.c = s.next_gamma2();
    t.beta = s.next_unit();
    return t;
}

HashSample gcws_hash_one(const core::TransformedVector& u, const GcwsConfig& cfg,
                         std::int64_t j) {
    if (u.entries.empty()) {
        raise(ErrorCode::EmptyVector, "gcws_hash_one: no nonzero coordinate");
    }
    HashSample best;
    double best_a = std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto& [idx, val] : u.entries) {
        const auto [r, c, beta] = keyed_randoms(cfg.seed, j, idx);
        const double t_i = std::floor(cfg.p * std::log(val) / r + beta);
        const double a_i = std::log(c) - r * (t_i + 1.0 - beta);
        // strict < keeps ties on the smallest coordinate index
        if (first || a_i < best_a) {
            best_a = a_i;
            best.istar = idx;
            best.tstar = static_cast<std::int64_t>(t_i);
            first = false;
        }
    }
    best.code = encode_code(best.istar, best.tstar, cfg);
    return best;
}

std::uint32_t encode_code(std::int64_t istar, std::int64_t tstar, const GcwsConfig& cfg) {
    const std::uint64_t imask = (1ull << cfg.b) - 1;
    std::uint64_t code = static_cast<std::uint64_t>(istar) & imask;
    if (cfg.tbits > 0) {
        const std::int64_t tmod = 1ll << cfg.tbits;
        std::int64_t t = tstar % tmod;
        if (t < 0) t += tmod; // Euclidean remainder, t* can be negative
        code += static_cast<std::uint64_t>(t) << cfg.b;
    }
    return static_cast<std::uint32_t>(code);
}

std::vector<std::uint32_t> gcws_hash(const core::SparseVector& u, const GcwsConfig& cfg) {
    cfg.validate();
    const core::TransformedVector t = core::sign_split(u);
    std::vector<std::uint32_t> codes;
    codes.reserve(static_cast<std::size_t>(cfg.k));
    for (int j = 0; j < cfg.k; ++j) {
        codes.push_back(gcws_hash_one(t, cfg, j).code);
    }
    return codes;
}

std::uint32_t uniform_pair_code(std::int64_t istar, std::int64_t tstar, int b,
                                std::uint64_t seed) {
    std::uint64_t h = rng::mix64(seed + rng::kPairMix * rng::kGolden);
    h = rng::mix64(h ^ static_cast<std::uint64_t>(istar));
    h = rng::mix64(h ^ static_cast<std::uint64_t>(tstar));
    return static_cast<std::uint32_t>(h & ((1ull << b) - 1));
}

} // namespace gcwsnet::gcws
