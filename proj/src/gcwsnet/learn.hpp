#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gcwsnet/gcws.hpp"
#include "gcwsnet/sketch.hpp"

namespace gcwsnet::learn {

// L=1: softmax regression. L=2: one hidden layer of H units.
// L=3: hidden layers of (H, H/2) units. Activation is ReLU throughout.
struct NetConfig {
    int layers = 1;
    int hidden = 200;
    double lr = 0.001;
    int batch = 32;
    double epochs = 1.0; // fractional values allowed
    std::uint64_t seed = 0;
    int evals_per_epoch = 50;

    void validate() const;
    std::vector<int> hidden_sizes() const;
};

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Feature rows are either dense reals or sparse binary one-hot positions.
struct FeatureMatrix {
    std::int64_t width = 0;
    bool sparse_binary = false;
    std::vector<std::vector<double>> dense;
    std::vector<std::vector<std::int64_t>> positions;

    std::size_t size() const { return sparse_binary ? positions.size() : dense.size(); }
};

struct Model {
    std::int64_t input_width = 0;
    int classes = 0;
    std::vector<double> class_labels; // class id -> original label value
    std::vector<Matrix> weights;      // weights[l] is (out x in)
    std::vector<std::vector<double>> biases;

    // Adam state
    std::vector<Matrix> adam_m, adam_v;
    std::vector<std::vector<double>> adam_mb, adam_vb;
    std::int64_t adam_step = 0;

    int n_layers() const { return static_cast<int>(weights.size()); }
};

struct HistoryPoint {
    std::int64_t samples_seen = 0;
    double epoch_fraction = 0.0;
    double test_accuracy = 0.0;
    double train_loss = 0.0;
};

using TrainHistory = std::vector<HistoryPoint>;

// First-layer pre-activation of a one-hot row: bias plus the sum of the
// selected columns of W, accumulated in ascending position order. Matches the
// dense product bit for bit under that summation order.
void sparse_binary_forward(const std::vector<std::int64_t>& positions,
                           const Matrix& w, const std::vector<double>& bias,
                           std::vector<double>& out);

Model init_model(std::int64_t input_width, const std::vector<double>& class_labels,
                 const NetConfig& cfg);

struct ModelGradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Cross-entropy loss of one row together with its parameter gradients.
// Exposed so the backward pass can be checked against finite differences.
double sample_loss_gradients(const Model& model, const FeatureMatrix& x,
                             std::size_t row, int label, ModelGradients& g);

// Class probabilities for one row.
std::vector<double> predict_proba(const Model& model, const FeatureMatrix& x,
                                  std::size_t row);

// Activations of the last hidden layer (requires >= 1 hidden layer).
std::vector<double> hidden_embedding(const Model& model, const FeatureMatrix& x,
                                     std::size_t row);

double evaluate(const Model& model, const FeatureMatrix& x,
                const std::vector<int>& y);

// Minibatch Adam training with softmax cross-entropy. Deterministic given
// seed: init, shuffles, and batch order all come from the keyed RNG.
std::pair<Model, TrainHistory> train(const FeatureMatrix& x, const std::vector<int>& y,
                                     const NetConfig& cfg, const FeatureMatrix& eval_x,
                                     const std::vector<int>& eval_y);

// Maps raw label values to dense class ids, shared across train/test splits.
struct LabelMap {
    std::vector<double> values; // sorted unique labels

    static LabelMap build(const std::vector<const std::vector<double>*>& label_sets);
    std::vector<int> apply(const std::vector<double>& labels) const;
};

// Hashes the base model's last-hidden-layer embeddings with GCWS and trains a
// fresh softmax head on the one-hot codes.
std::pair<Model, TrainHistory> last_layer_gcws(
    const Model& base, const FeatureMatrix& train_x, const std::vector<int>& train_y,
    const FeatureMatrix& test_x, const std::vector<int>& test_y,
    const gcws::GcwsConfig& hash_cfg, const NetConfig& head_cfg);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

void save_history(const TrainHistory& history, const std::string& path);

} // namespace gcwsnet::learn
