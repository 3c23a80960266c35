#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcwsnet/io.hpp"
#include "gcwsnet/learn.hpp"

namespace gcwsnet::pipeline {

// Feature preprocessing selector, parsed from specs like
//   raw | power:2 | logpower:2 | gcws:p=2,k=64,b=8,tbits=0,seed=1
//   gcws+cs:p=2,k=64,b=8,B=256,seed=1,cs_seed=2 | nrff:k=128,gamma=1,seed=1
struct PreprocConfig {
    enum class Kind { Raw, Power, LogPower, Gcws, GcwsCs, Nrff };
    Kind kind = Kind::Raw;
    double power = 1.0;
    gcws::GcwsConfig gcws;
    sketch::CountSketchConfig cs;
    nrff::RffConfig rff;

    static PreprocConfig parse(const std::string& spec);
    std::string describe() const;
};

// Materializes the feature matrix for a dataset. Overflow in a power
// transform is reported with the offending sample index.
learn::FeatureMatrix featurize(const io::Dataset& ds, const PreprocConfig& cfg);

// Loads a feature file of any supported kind into a matrix plus labels.
// Dump headers carry their own configs, so a libsvm companion file can be
// featurized identically via featurize_like.
struct LoadedFeatures {
    learn::FeatureMatrix x;
    std::vector<double> labels;
    io::FileKind kind = io::FileKind::Libsvm;
    PreprocConfig preproc; // reconstructed from dump headers
};

LoadedFeatures load_features(const std::string& path, const PreprocConfig& preproc);
LoadedFeatures featurize_like(const std::string& path, const LoadedFeatures& reference,
                              const PreprocConfig& preproc);

// Run-level commands. Each writes its primary outputs plus a
// "<out>.manifest.json" sidecar with parameters, input digests, and timing.
void run_hash(const std::string& input, const gcws::GcwsConfig& cfg,
              const std::string& out_path);

void run_sketch(const std::string& codes_path, std::int64_t bins, std::uint64_t seed,
                const std::string& out_path);

void run_nrff(const std::string& input, const nrff::RffConfig& cfg,
              const std::string& out_path);

struct TrainArgs {
    std::string features_path;
    std::string eval_path;
    std::string preproc_spec = "raw"; // applied when inputs are libsvm files
    learn::NetConfig net;
    std::string history_out;
    std::string model_out;
};

learn::TrainHistory run_train(const TrainArgs& args);

// Returns true when every report passed.
bool run_validate(const std::string& suite, std::int64_t trials, std::uint64_t seed,
                  const std::string& report_out);

void run_ratio(const std::vector<int>& b_list, const std::vector<double>& m_list,
               const std::vector<double>& j_grid, const std::string& out_csv);

} // namespace gcwsnet::pipeline
