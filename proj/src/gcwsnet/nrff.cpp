#include "gcwsnet/nrff.hpp"

#include <cmath>

#include "gcwsnet/rng.hpp"

namespace gcwsnet::nrff {

void RffConfig::validate() const {
    if (k <= 0) raise(ErrorCode::InvalidParameter, "nrff: k must be positive");
    if (gamma <= 0.0) raise(ErrorCode::InvalidParameter, "nrff: gamma must be positive");
}

std::vector<double> rff_features(const core::SparseVector& u, const RffConfig& cfg) {
    cfg.validate();
    if (u.empty()) raise(ErrorCode::EmptyVector, "rff_features: all-zero vector");

    double norm = 0.0;
    for (const auto& [idx, val] : u.entries) norm += val * val;
    norm = std::sqrt(norm);

    const double sqrt_gamma = std::sqrt(cfg.gamma);
    std::vector<double> out(static_cast<std::size_t>(cfg.k));
    double out_norm_sq = 0.0;
    for (int j = 0; j < cfg.k; ++j) {
        double x = 0.0;
        for (const auto& [idx, val] : u.entries) {
            rng::Stream s(cfg.seed, rng::kNrffProjection, static_cast<std::uint64_t>(j),
                          static_cast<std::uint64_t>(idx));
            x += (val / norm) * s.next_normal();
        }
        rng::Stream phase(cfg.seed, rng::kNrffPhase, static_cast<std::uint64_t>(j), 0);
        const double w = 2.0 * M_PI * phase.next_unit();
        const double f = std::sqrt(2.0) * std::cos(sqrt_gamma * x + w);
        out[static_cast<std::size_t>(j)] = f;
        out_norm_sq += f * f;
    }
    if (cfg.normalize && out_norm_sq > 0.0) {
        const double scale = std::sqrt(static_cast<double>(cfg.k) / out_norm_sq);
        for (double& f : out) f *= scale;
    }
    return out;
}

NrffVariance nrff_variance(double rho, double gamma) {
    const double e2 = std::exp(-2.0 * gamma * (1.0 - rho));
    const double e4 = std::exp(-4.0 * gamma * (1.0 - rho));
    NrffVariance v;
    v.unnormalized = 0.5 + 0.5 * (1.0 - e2) * (1.0 - e2);
    v.normalized = v.unnormalized - 0.25 * e2 * (3.0 - e4);
    return v;
}

} // namespace gcwsnet::nrff
