#include "gcwsnet/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcwsnet::core {

SparseVector SparseVector::from_dense(std::span<const double> values) {
    SparseVector out;
    out.dim = static_cast<std::int64_t>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0) {
            out.entries.emplace_back(static_cast<std::int64_t>(i), values[i]);
        }
    }
    return out;
}

void SparseVector::validate() const {
    std::int64_t prev = -1;
    for (const auto& [idx, val] : entries) {
        if (idx <= prev || idx >= dim) {
            raise(ErrorCode::CorruptInput, "sparse vector indices not strictly increasing in [0, dim)");
        }
        if (val == 0.0 || !std::isfinite(val)) {
            raise(ErrorCode::CorruptInput, "sparse vector stores a zero or non-finite value");
        }
        prev = idx;
    }
}

TransformedVector sign_split(const SparseVector& u) {
    if (u.empty()) {
        raise(ErrorCode::EmptyVector, "sign_split: all-zero vector");
    }
    TransformedVector out;
    out.dim = 2 * u.dim;
    out.entries.reserve(u.entries.size());
    for (const auto& [idx, val] : u.entries) {
        if (val > 0.0) {
            out.entries.emplace_back(2 * idx, val);
        } else {
            out.entries.emplace_back(2 * idx + 1, -val);
        }
    }
    return out;
}

SparseVector sign_unsplit(const TransformedVector& t) {
    SparseVector out;
    out.dim = t.dim / 2;
    out.entries.reserve(t.entries.size());
    for (const auto& [idx, val] : t.entries) {
        if (idx % 2 == 0) {
            out.entries.emplace_back(idx / 2, val);
        } else {
            out.entries.emplace_back(idx / 2, -val);
        }
    }
    return out;
}

namespace {

// Streaming log-sum-exp accumulator.
class LogSumExp {
public:
    void add(double log_term) {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (log_term > max_) {
            if (sum_ > 0.0) sum_ *= std::exp(max_ - log_term);
            max_ = log_term;
        }
        sum_ += std::exp(log_term - max_);
    }

    bool empty() const { return sum_ == 0.0; }

    double value() const { return max_ + std::log(sum_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

} // namespace

double pgmm_kernel(const SparseVector& u, const SparseVector& v, double p) {
    if (p == 0.0) {
        raise(ErrorCode::InvalidParameter, "pgmm_kernel: p must be nonzero");
    }
    const TransformedVector tu = sign_split(u);
    const TransformedVector tv = sign_split(v);

    // Numerator runs over the intersection support (min is 0 elsewhere),
    // denominator over the union. Both accumulated as log-sum-exp of p*log x.
    LogSumExp num;
    LogSumExp den;
    std::size_t a = 0, b = 0;
    while (a < tu.entries.size() || b < tv.entries.size()) {
        const bool take_a = b >= tv.entries.size() ||
            (a < tu.entries.size() && tu.entries[a].first < tv.entries[b].first);
        const bool take_b = a >= tu.entries.size() ||
            (b < tv.entries.size() && tv.entries[b].first < tu.entries[a].first);
        if (take_a) {
            den.add(p * std::log(tu.entries[a].second));
            ++a;
        } else if (take_b) {
            den.add(p * std::log(tv.entries[b].second));
            ++b;
        } else {
            const double x = tu.entries[a].second;
            const double y = tv.entries[b].second;
            num.add(p * std::log(std::min(x, y)));
            den.add(p * std::log(std::max(x, y)));
            ++a;
            ++b;
        }
    }
    if (num.empty()) return 0.0;
    const double r = std::exp(num.value() - den.value());
    return std::min(r, 1.0);
}

namespace {

double sparse_dot(const SparseVector& u, const SparseVector& v) {
    double dot = 0.0;
    std::size_t a = 0, b = 0;
    while (a < u.entries.size() && b < v.entries.size()) {
        if (u.entries[a].first < v.entries[b].first) {
            ++a;
        } else if (v.entries[b].first < u.entries[a].first) {
            ++b;
        } else {
            dot += u.entries[a].second * v.entries[b].second;
            ++a;
            ++b;
        }
    }
    return dot;
}

double l2_norm(const SparseVector& u) {
    double s = 0.0;
    for (const auto& [idx, val] : u.entries) s += val * val;
    return std::sqrt(s);
}

} // namespace

double cosine(const SparseVector& u, const SparseVector& v) {
    const double nu = l2_norm(u);
    const double nv = l2_norm(v);
    if (nu == 0.0 || nv == 0.0) {
        raise(ErrorCode::EmptyVector, "cosine: zero-norm vector");
    }
    const double rho = sparse_dot(u, v) / (nu * nv);
    return std::clamp(rho, -1.0, 1.0);
}

double rbf_kernel(const SparseVector& u, const SparseVector& v, double gamma) {
    if (gamma <= 0.0) {
        raise(ErrorCode::InvalidParameter, "rbf_kernel: gamma must be positive");
    }
    return std::exp(-gamma * (1.0 - cosine(u, v)));
}

SparseVector power_transform(const SparseVector& u, double p) {
    SparseVector out;
    out.dim = u.dim;
    out.entries.reserve(u.entries.size());
    for (const auto& [idx, val] : u.entries) {
        const double mag = std::pow(std::abs(val), p);
        if (!std::isfinite(mag)) {
            raise(ErrorCode::Overflow,
                  "power_transform: |" + std::to_string(val) + "|^" + std::to_string(p) +
                  " overflows at index " + std::to_string(idx));
        }
        if (mag != 0.0) {
            out.entries.emplace_back(idx, val > 0.0 ? mag : -mag);
        }
    }
    return out;
}

SparseVector logpower_transform(const SparseVector& u, double p) {
    SparseVector out;
    out.dim = u.dim;
    out.entries.reserve(u.entries.size());
    for (const auto& [idx, val] : u.entries) {
        const double mag = p * std::log(std::abs(val));
        if (mag != 0.0) {
            out.entries.emplace_back(idx, val > 0.0 ? mag : -mag);
        }
    }
    return out;
}

} // namespace gcwsnet::core
