#pragma once

#include <cstdint>
#include <vector>

#include "gcwsnet/core.hpp"

namespace gcwsnet::gcws {

// Fully determines one hash family. b bits come from i*, tbits from t*.
struct GcwsConfig {
    double p = 1.0;
    int k = 64;
    int b = 8;
    int tbits = 0;
    std::uint64_t seed = 0;

    void validate() const;
    std::uint32_t code_space() const { return 1u << (b + tbits); }
};

struct HashSample {
    std::int64_t istar = 0;
    std::int64_t tstar = 0;
    std::uint32_t code = 0;
};

struct RcbTriple {
    double r = 0.0;    // Gamma(2,1)
    double c = 0.0;    // Gamma(2,1)
    double beta = 0.0; // Uniform(0,1)
};

// Positional randomness for hash index j and transformed coordinate i.
// Depends only on (seed, j, i), never on the vector being hashed.
RcbTriple keyed_randoms(std::uint64_t seed, std::int64_t j, std::int64_t i);

// One consistent-weighted sample of the transformed vector. All arithmetic on
// the data values happens as p*log(ũ_i), so extreme p cannot overflow.
HashSample gcws_hash_one(const core::TransformedVector& u, const GcwsConfig& cfg,
                         std::int64_t j);

// code = (i* mod 2^b) + 2^b * (t* mod_euclid 2^tbits).
std::uint32_t encode_code(std::int64_t istar, std::int64_t tstar, const GcwsConfig& cfg);

// sign_split + k hashes + encoding. Pure function of (u, cfg).
std::vector<std::uint32_t> gcws_hash(const core::SparseVector& u, const GcwsConfig& cfg);

// Keyed avalanche map of the full (i*, t*) pair onto b bits; approximately
// uniform, used by the b-bit collision-law validator.
std::uint32_t uniform_pair_code(std::int64_t istar, std::int64_t tstar, int b,
                                std::uint64_t seed);

} // namespace gcwsnet::gcws
