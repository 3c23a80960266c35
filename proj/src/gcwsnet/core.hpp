#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gcwsnet/error.hpp"

namespace gcwsnet::core {

using Entry = std::pair<std::int64_t, double>;

// Sparse feature vector. Indices strictly increasing, stored values nonzero.
struct SparseVector {
    std::int64_t dim = 0;
    std::vector<Entry> entries;

    static SparseVector from_dense(std::span<const double> values);

    bool empty() const { return entries.empty(); }
    void validate() const; // throws CorruptInput on broken invariants
};

// Output of sign_split: 2D-dimensional, all stored values strictly positive.
struct TransformedVector {
    std::int64_t dim = 0; // == 2 * source dim
    std::vector<Entry> entries;
};

// Positive u_i goes to slot 2i, negative u_i goes to slot 2i+1 as -u_i.
TransformedVector sign_split(const SparseVector& u);

// Inverse of sign_split; used by tests to check injectivity.
SparseVector sign_unsplit(const TransformedVector& t);

// pGMM(u,v;p) = sum min(ũ,ṽ)^p / sum max(ũ,ṽ)^p, computed in log space so
// large |p| never overflows. p=1 is the plain GMM kernel.
double pgmm_kernel(const SparseVector& u, const SparseVector& v, double p);

double cosine(const SparseVector& u, const SparseVector& v);

// e^{-gamma(1-rho)} on l2-normalized inputs.
double rbf_kernel(const SparseVector& u, const SparseVector& v, double gamma);

// v -> sign(v)*|v|^p. Throws Overflow when a result leaves double range.
SparseVector power_transform(const SparseVector& u, double p);

// v -> sign(v)*p*log|v|; zeros stay implicit. Entries with |v|=1 drop out.
SparseVector logpower_transform(const SparseVector& u, double p);

} // namespace gcwsnet::core
