#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcwsnet/core.hpp"

namespace gcwsnet::validate {

// One Monte Carlo verdict. `pass` is recomputable from the stored numbers:
// "3se" checks use |empirical - theoretical| <= 3*se, "relative" uses
// |empirical - theoretical| <= tolerance * |theoretical|, "abs" uses
// |empirical - theoretical| <= tolerance, "exact" demands equality up to
// floating-point rounding.
struct McReport {
    std::string name;
    double theoretical = 0.0;
    double empirical = 0.0;
    double se = 0.0;
    std::int64_t trials = 0;
    std::string kind = "3se"; // "3se" | "relative" | "abs" | "exact"
    double tolerance = 0.0;   // used by "relative" and by the 0-bit band
    bool pass = false;
};

bool recompute_verdict(const McReport& r);

// Random test pair with entries of mixed sign and magnitude in [1e-3, 1e3];
// overlap controls the shared support fraction.
struct PairSpec {
    std::int64_t dim = 32;
    double sparsity = 0.5; // fraction of coordinates occupied
    double overlap = 0.7;  // chance a shared coordinate is kept in both
};

std::pair<core::SparseVector, core::SparseVector> random_pair(const PairSpec& spec,
                                                              std::uint64_t seed);

McReport check_theorem1(const core::SparseVector& u, const core::SparseVector& v,
                        double p, std::int64_t trials, std::uint64_t seed);

McReport check_theorem2(const core::SparseVector& u, const core::SparseVector& v,
                        double p, int b, std::int64_t trials, std::uint64_t seed);

McReport check_0bit(const core::SparseVector& u, const core::SparseVector& v,
                    double p, std::int64_t trials, std::uint64_t seed);

// Synthesizes GCWS code streams with per-block match probability P_b, sketches
// them with a fresh seed per trial, and checks mean and variance of the
// estimator against the closed forms. Returns {mean report, variance report}.
std::vector<McReport> check_countsketch(int k, int b, double jaccard, double m,
                                        std::int64_t trials, std::uint64_t seed);

// Mean of the normalized RFF estimator vs e^{-gamma(1-rho)} and k*Var vs the
// closed-form asymptotic variance. Returns {mean report, variance report}.
std::vector<McReport> check_nrff(double rho, double gamma, int k,
                                 std::int64_t trials, std::uint64_t seed);

// Named suites: "t1", "t2", "0bit", "cs", "nrff", "all".
std::vector<McReport> run_suite(const std::string& suite, std::int64_t trials,
                                std::uint64_t seed);

std::string reports_to_json(const std::vector<McReport>& reports);

bool all_pass(const std::vector<McReport>& reports);

} // namespace gcwsnet::validate
