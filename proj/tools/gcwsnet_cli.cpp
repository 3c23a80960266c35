// Command-line front end for the gcwsnet shared library. Exit codes:
// 0 success, 1 data/runtime error, 2 usage error. `validate` additionally
// exits 1 when any Monte Carlo verdict fails.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "gcwsnet.h"

namespace {

int fail(gcwsnet_status status) {
    std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status),
                 gcwsnet_last_error());
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcwsnet: pGMM kernel hashing, count-sketch compression, and training"};
    app.require_subcommand(1);

    // hash
    std::string hash_input, hash_out;
    double hash_p = 1.0;
    int hash_k = 64, hash_b = 8, hash_tbits = 0;
    std::uint64_t hash_seed = 0;
    auto* cmd_hash = app.add_subcommand("hash", "GCWS-hash a LIBSVM dataset to integer codes");
    cmd_hash->add_option("input", hash_input, "input LIBSVM file")->required();
    cmd_hash->add_option("--p", hash_p, "pGMM power parameter (nonzero)");
    cmd_hash->add_option("--k", hash_k, "number of hashes");
    cmd_hash->add_option("--b", hash_b, "bits kept from i*");
    cmd_hash->add_option("--tbits", hash_tbits, "bits kept from t*");
    cmd_hash->add_option("--seed", hash_seed, "master seed");
    cmd_hash->add_option("--out", hash_out, "output codes file")->required();

    // sketch
    std::string sketch_input, sketch_out;
    std::int64_t sketch_bins = 256;
    std::uint64_t sketch_seed = 0;
    auto* cmd_sketch = app.add_subcommand("sketch", "count-sketch a codes file into B bins");
    cmd_sketch->add_option("input", sketch_input, "codes file from `hash`")->required();
    cmd_sketch->add_option("--B", sketch_bins, "number of bins");
    cmd_sketch->add_option("--seed", sketch_seed, "count-sketch seed");
    cmd_sketch->add_option("--out", sketch_out, "output sketch file")->required();

    // nrff
    std::string nrff_input, nrff_out;
    int nrff_k = 128;
    double nrff_gamma = 1.0;
    std::uint64_t nrff_seed = 0;
    bool nrff_no_normalize = false;
    auto* cmd_nrff = app.add_subcommand("nrff", "normalized random Fourier features");
    cmd_nrff->add_option("input", nrff_input, "input LIBSVM file")->required();
    cmd_nrff->add_option("--k", nrff_k, "number of features");
    cmd_nrff->add_option("--gamma", nrff_gamma, "RBF gamma");
    cmd_nrff->add_option("--seed", nrff_seed, "seed");
    cmd_nrff->add_flag("--no-normalize", nrff_no_normalize, "skip output normalization");
    cmd_nrff->add_option("--out", nrff_out, "output feature file")->required();

    // train
    std::string train_input, train_eval, train_preproc = "raw";
    std::string train_history = "history.csv", train_model;
    int train_layers = 1, train_hidden = 200, train_batch = 32;
    double train_lr = 0.001, train_epochs = 1.0;
    std::uint64_t train_seed = 0;
    auto* cmd_train = app.add_subcommand("train", "train a softmax / MLP classifier");
    cmd_train->add_option("features", train_input,
                          "LIBSVM file or a dump from hash/sketch/nrff")->required();
    cmd_train->add_option("--eval", train_eval, "test set (LIBSVM or matching dump)");
    cmd_train->add_option("--preproc", train_preproc,
                          "raw | power:p | logpower:p | gcws:... | gcws+cs:... | nrff:...");
    cmd_train->add_option("--L", train_layers, "1 = softmax, 2 = one hidden layer, 3 = two");
    cmd_train->add_option("--H", train_hidden, "hidden units (second layer uses H/2)");
    cmd_train->add_option("--lr", train_lr, "Adam learning rate");
    cmd_train->add_option("--batch", train_batch, "minibatch size");
    cmd_train->add_option("--epochs", train_epochs, "epochs, fractional allowed");
    cmd_train->add_option("--seed", train_seed, "seed for init and shuffling");
    cmd_train->add_option("--history", train_history, "accuracy-vs-iteration CSV");
    cmd_train->add_option("--model", train_model, "model checkpoint output");

    // validate
    std::string validate_suite = "all", validate_out = "report.json";
    std::int64_t validate_trials = 100000;
    std::uint64_t validate_seed = 1;
    auto* cmd_validate = app.add_subcommand("validate", "Monte Carlo checks of the collision laws");
    cmd_validate->add_option("--suite", validate_suite, "t1 | t2 | 0bit | cs | nrff | all");
    cmd_validate->add_option("--trials", validate_trials, "Monte Carlo trials per check");
    cmd_validate->add_option("--seed", validate_seed, "seed");
    cmd_validate->add_option("--out", validate_out, "JSON report path");

    // ratio
    std::string ratio_b = "8,12,16", ratio_m = "1,4,16,64,256,1000";
    std::string ratio_j = "0.05:0.95:0.05", ratio_out = "ratio.csv";
    auto* cmd_ratio = app.add_subcommand("ratio", "count-sketch variance ratio table");
    cmd_ratio->add_option("--b", ratio_b, "comma-separated b values");
    cmd_ratio->add_option("--m", ratio_m, "comma-separated reduction factors");
    cmd_ratio->add_option("--J-grid", ratio_j, "list or start:stop:step grid");
    cmd_ratio->add_option("--out", ratio_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    gcwsnet_status status = GCWSNET_OK;
    if (cmd_hash->parsed()) {
        status = gcwsnet_run_hash(hash_input.c_str(), hash_p, hash_k, hash_b,
                                  hash_tbits, hash_seed, hash_out.c_str());
    } else if (cmd_sketch->parsed()) {
        status = gcwsnet_run_sketch(sketch_input.c_str(), sketch_bins, sketch_seed,
                                    sketch_out.c_str());
    } else if (cmd_nrff->parsed()) {
        status = gcwsnet_run_nrff(nrff_input.c_str(), nrff_k, nrff_gamma, nrff_seed,
                                  nrff_no_normalize ? 0 : 1, nrff_out.c_str());
    } else if (cmd_train->parsed()) {
        status = gcwsnet_run_train(train_input.c_str(),
                                   train_eval.empty() ? nullptr : train_eval.c_str(),
                                   train_preproc.c_str(), train_layers, train_hidden,
                                   train_lr, train_batch, train_epochs, train_seed,
                                   train_history.c_str(),
                                   train_model.empty() ? nullptr : train_model.c_str());
    } else if (cmd_validate->parsed()) {
        int all_passed = 0;
        status = gcwsnet_run_validate(validate_suite.c_str(), validate_trials,
                                      validate_seed, validate_out.c_str(), &all_passed);
        if (status == GCWSNET_OK) {
            std::printf("%s: %s (report: %s)\n", validate_suite.c_str(),
                        all_passed ? "PASS" : "FAIL", validate_out.c_str());
            return all_passed ? 0 : 1;
        }
    } else if (cmd_ratio->parsed()) {
        status = gcwsnet_run_ratio(ratio_b.c_str(), ratio_m.c_str(), ratio_j.c_str(),
                                   ratio_out.c_str());
    }

    return status == GCWSNET_OK ? 0 : fail(status);
}
