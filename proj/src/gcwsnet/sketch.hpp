#pragma once

#include <cstdint>
#include <vector>

#include "gcwsnet/gcws.hpp"

namespace gcwsnet::sketch {

// k one-hot blocks of size 2^(b+tbits); exactly one set position per block.
struct EncodedFeatures {
    std::uint32_t block_size = 0;
    int k = 0;
    std::vector<std::int64_t> set_positions;

    std::int64_t width() const {
        return static_cast<std::int64_t>(block_size) * k;
    }
};

struct CountSketchConfig {
    std::int64_t bins = 256;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SketchedFeatures {
    std::vector<std::int32_t> values; // length B, signed integer counts
};

EncodedFeatures one_hot(const std::vector<std::uint32_t>& codes,
                        const gcws::GcwsConfig& cfg);

// Bin and sign depend only on (seed, position); sketching is linear in the
// multiset of set positions.
SketchedFeatures count_sketch(const EncodedFeatures& f, const CountSketchConfig& cs);

// (bin, sign) assignment for a single position, exposed for tests and for the
// dense count-sketch of real-valued feature rows.
void position_hash(const CountSketchConfig& cs, std::int64_t position,
                   std::int64_t& bin, int& sign);

double inner_product(const SketchedFeatures& z, const SketchedFeatures& w);

// <z,w>/k, unbiased for P_b.
double estimate_pb(const SketchedFeatures& z, const SketchedFeatures& w, int k);

// Var(P̂_b) = P_b(1-P_b)/k + (1/B)[1 + P_b^2 - P_b^2/k - P_b/k]
double cs_variance(double pb, int k, double bins);

// R = (m/2^b)(1+P_b^2)/(P_b(1-P_b)) with P_b = J + (1-J)/2^b.
// Returns +inf when P_b degenerates to 0 or 1.
double cs_ratio(int b, double jaccard, double m);

struct RatioRow {
    int b;
    double jaccard;
    double m;
    double pb;
    double ratio;
};

std::vector<RatioRow> ratio_table(const std::vector<int>& b_list,
                                  const std::vector<double>& j_grid,
                                  const std::vector<double>& m_list);

} // namespace gcwsnet::sketch
