#pragma once

#include <cstdint>
#include <vector>

#include "gcwsnet/core.hpp"

namespace gcwsnet::nrff {

struct RffConfig {
    int k = 128;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    bool normalize = true; // rescale output to norm sqrt(k)

    void validate() const;
};

// X_j = sqrt(2) cos(sqrt(gamma) <u, r_j> + w_j) on the l2-normalized input.
// Projection rows are generated on the fly from the counter RNG; no k x D
// matrix is ever stored.
std::vector<double> rff_features(const core::SparseVector& u, const RffConfig& cfg);

struct NrffVariance {
    double normalized = 0.0;   // V_{n,rho,gamma}
    double unnormalized = 0.0; // V_{rho,gamma}
};

NrffVariance nrff_variance(double rho, double gamma);

} // namespace gcwsnet::nrff
