#include "gcwsnet/sketch.hpp"

#include <cmath>
#include <limits>

#include "gcwsnet/rng.hpp"

namespace gcwsnet::sketch {

void CountSketchConfig::validate() const {
    if (bins < 1) raise(ErrorCode::InvalidParameter, "count-sketch: bins must be >= 1");
}

EncodedFeatures one_hot(const std::vector<std::uint32_t>& codes,
                        const gcws::GcwsConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(codes.size()) != cfg.k) {
        raise(ErrorCode::CorruptInput, "one_hot: expected " + std::to_string(cfg.k) +
                                           " codes, got " + std::to_string(codes.size()));
    }
    EncodedFeatures out;
    out.block_size = cfg.code_space();
    out.k = cfg.k;
    out.set_positions.reserve(codes.size());
    for (std::size_t j = 0; j < codes.size(); ++j) {
        if (codes[j] >= out.block_size) {
            raise(ErrorCode::CorruptInput, "one_hot: code " + std::to_string(codes[j]) +
                                               " out of range at block " + std::to_string(j));
        }
        out.set_positions.push_back(static_cast<std::int64_t>(j) * out.block_size + codes[j]);
    }
    return out;
}

void position_hash(const CountSketchConfig& cs, std::int64_t position,
                   std::int64_t& bin, int& sign) {
    rng::Stream s(cs.seed, rng::kSketch, static_cast<std::uint64_t>(position), 0);
    bin = static_cast<std::int64_t>(s.next_u64() % static_cast<std::uint64_t>(cs.bins));
    sign = (s.next_u64() & 1u) ? 1 : -1;
}

SketchedFeatures count_sketch(const EncodedFeatures& f, const CountSketchConfig& cs) {
    cs.validate();
    SketchedFeatures out;
    out.values.assign(static_cast<std::size_t>(cs.bins), 0);
    for (std::int64_t pos : f.set_positions) {
        std::int64_t bin;
        int sign;
        position_hash(cs, pos, bin, sign);
        out.values[static_cast<std::size_t>(bin)] += sign;
    }
    return out;
}

double inner_product(const SketchedFeatures& z, const SketchedFeatures& w) {
    if (z.values.size() != w.values.size()) {
        raise(ErrorCode::ConfigMismatch, "sketch inner product: mismatched bin counts");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < z.values.size(); ++i) {
        dot += static_cast<double>(z.values[i]) * static_cast<double>(w.values[i]);
    }
    return dot;
}

double estimate_pb(const SketchedFeatures& z, const SketchedFeatures& w, int k) {
    if (k <= 0) raise(ErrorCode::InvalidParameter, "estimate_pb: k must be positive");
    return inner_product(z, w) / static_cast<double>(k);
}

double cs_variance(double pb, int k, double bins) {
    const double kk = static_cast<double>(k);
    return pb * (1.0 - pb) / kk +
           (1.0 / bins) * (1.0 + pb * pb - pb * pb / kk - pb / kk);
}

double cs_ratio(int b, double jaccard, double m) {
    const double scale = std::ldexp(1.0, -b); // 2^-b
    const double pb = jaccard + (1.0 - jaccard) * scale;
    const double denom = pb * (1.0 - pb);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return m * scale * (1.0 + pb * pb) / denom;
}

std::vector<RatioRow> ratio_table(const std::vector<int>& b_list,
                                  const std::vector<double>& j_grid,
                                  const std::vector<double>& m_list) {
    std::vector<RatioRow> rows;
    rows.reserve(b_list.size() * j_grid.size() * m_list.size());
    for (int b : b_list) {
        for (double m : m_list) {
            for (double j : j_grid) {
                RatioRow r;
                r.b = b;
                r.jaccard = j;
                r.m = m;
                r.pb = j + (1.0 - j) * std::ldexp(1.0, -b);
                r.ratio = cs_ratio(b, j, m);
                rows.push_back(r);
            }
        }
    }
    return rows;
}

} // namespace gcwsnet::sketch
