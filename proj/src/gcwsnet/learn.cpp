#include "gcwsnet/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "gcwsnet/io.hpp"
#include "gcwsnet/rng.hpp"

namespace gcwsnet::learn {

void NetConfig::validate() const {
    if (layers < 1 || layers > 3) {
        raise(ErrorCode::InvalidParameter, "net: layers must be 1, 2, or 3");
    }
    if (layers > 1 && hidden < 1) {
        raise(ErrorCode::InvalidParameter, "net: hidden must be positive");
    }
    if (batch < 1) raise(ErrorCode::InvalidParameter, "net: batch must be positive");
    if (epochs < 0.0) raise(ErrorCode::InvalidParameter, "net: epochs must be >= 0");
    if (lr <= 0.0) raise(ErrorCode::InvalidParameter, "net: lr must be positive");
}

std::vector<int> NetConfig::hidden_sizes() const {
    switch (layers) {
        case 1: return {};
        case 2: return {hidden};
        default: return {hidden, std::max(1, hidden / 2)};
    }
}

void sparse_binary_forward(const std::vector<std::int64_t>& positions,
                           const Matrix& w, const std::vector<double>& bias,
                           std::vector<double>& out) {
    out.assign(bias.begin(), bias.end());
    for (std::int64_t pos : positions) {
        if (pos < 0 || pos >= w.cols) {
            raise(ErrorCode::CorruptInput,
                  "sparse_binary_forward: position " + std::to_string(pos) + " out of range");
        }
        for (int r = 0; r < w.rows; ++r) {
            out[static_cast<std::size_t>(r)] += w.at(r, static_cast<int>(pos));
        }
    }
}

Model init_model(std::int64_t input_width, const std::vector<double>& class_labels,
                 const NetConfig& cfg) {
    cfg.validate();
    Model m;
    m.input_width = input_width;
    m.classes = static_cast<int>(class_labels.size());
    m.class_labels = class_labels;

    std::vector<int> sizes;
    sizes.push_back(static_cast<int>(input_width));
    for (int h : cfg.hidden_sizes()) sizes.push_back(h);
    sizes.push_back(m.classes);

    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l];
        const int fan_out = sizes[l + 1];
        Matrix w(fan_out, fan_in);
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (int r = 0; r < fan_out; ++r) {
            rng::Stream s(cfg.seed, rng::kWeightInit, l, static_cast<std::uint64_t>(r));
            for (int c = 0; c < fan_in; ++c) {
                w.at(r, c) = (2.0 * s.next_unit() - 1.0) * scale;
            }
        }
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
        m.adam_m.emplace_back(fan_out, fan_in);
        m.adam_v.emplace_back(fan_out, fan_in);
        m.adam_mb.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
        m.adam_vb.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return m;
}

namespace {

void dense_forward(const std::vector<double>& in, const Matrix& w,
                   const std::vector<double>& bias, std::vector<double>& out) {
    out.assign(bias.begin(), bias.end());
    for (int r = 0; r < w.rows; ++r) {
        double acc = 0.0;
        for (int c = 0; c < w.cols; ++c) acc += w.at(r, c) * in[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] += acc;
    }
}

void relu_inplace(std::vector<double>& v) {
    for (double& x : v) x = x > 0.0 ? x : 0.0;
}

void softmax_inplace(std::vector<double>& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - mx);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

// Layer activations for one row: acts[0] is the first-layer pre-activation
// input side only when dense; for sparse rows the input itself never
// materializes. acts holds post-activation values per layer, ending in
// softmax probabilities.
void forward_all(const Model& model, const FeatureMatrix& x, std::size_t row,
                 std::vector<std::vector<double>>& acts) {
    acts.resize(static_cast<std::size_t>(model.n_layers()));
    for (int l = 0; l < model.n_layers(); ++l) {
        auto& out = acts[static_cast<std::size_t>(l)];
        if (l == 0) {
            if (x.sparse_binary) {
                sparse_binary_forward(x.positions[row], model.weights[0], model.biases[0], out);
            } else {
                dense_forward(x.dense[row], model.weights[0], model.biases[0], out);
            }
        } else {
            dense_forward(acts[static_cast<std::size_t>(l - 1)],
                          model.weights[static_cast<std::size_t>(l)],
                          model.biases[static_cast<std::size_t>(l)], out);
        }
        if (l + 1 < model.n_layers()) {
            relu_inplace(out);
        } else {
            softmax_inplace(out);
        }
    }
}

struct Gradients {
    std::vector<Matrix> w;
    std::vector<std::vector<double>> b;

    explicit Gradients(const Model& m) {
        for (int l = 0; l < m.n_layers(); ++l) {
            w.emplace_back(m.weights[static_cast<std::size_t>(l)].rows,
                           m.weights[static_cast<std::size_t>(l)].cols);
            b.emplace_back(m.biases[static_cast<std::size_t>(l)].size(), 0.0);
        }
    }
};

// Accumulates the cross-entropy gradient of one sample; returns its loss.
double backward_one(const Model& model, const FeatureMatrix& x, std::size_t row,
                    int label, Gradients& g,
                    std::vector<std::vector<double>>& acts_scratch,
                    std::vector<double>& delta_scratch) {
    forward_all(model, x, row, acts_scratch);
    const auto& probs = acts_scratch.back();
    const double loss = -std::log(std::max(probs[static_cast<std::size_t>(label)], 1e-300));

    std::vector<double>& delta = delta_scratch;
    delta = probs;
    delta[static_cast<std::size_t>(label)] -= 1.0;

    for (int l = model.n_layers() - 1; l >= 0; --l) {
        auto& gw = g.w[static_cast<std::size_t>(l)];
        auto& gb = g.b[static_cast<std::size_t>(l)];
        for (std::size_t r = 0; r < delta.size(); ++r) gb[r] += delta[r];

        if (l == 0 && x.sparse_binary) {
            for (std::int64_t pos : x.positions[row]) {
                for (int r = 0; r < gw.rows; ++r) {
                    gw.at(r, static_cast<int>(pos)) += delta[static_cast<std::size_t>(r)];
                }
            }
            break;
        }
        const std::vector<double>& input =
            l == 0 ? x.dense[row] : acts_scratch[static_cast<std::size_t>(l - 1)];
        for (int r = 0; r < gw.rows; ++r) {
            const double d = delta[static_cast<std::size_t>(r)];
            if (d == 0.0) continue;
            for (int c = 0; c < gw.cols; ++c) gw.at(r, c) += d * input[static_cast<std::size_t>(c)];
        }
        if (l > 0) {
            const auto& w = model.weights[static_cast<std::size_t>(l)];
            const auto& act = acts_scratch[static_cast<std::size_t>(l - 1)];
            std::vector<double> next(static_cast<std::size_t>(w.cols), 0.0);
            for (int r = 0; r < w.rows; ++r) {
                const double d = delta[static_cast<std::size_t>(r)];
                if (d == 0.0) continue;
                for (int c = 0; c < w.cols; ++c) next[static_cast<std::size_t>(c)] += d * w.at(r, c);
            }
            for (std::size_t c = 0; c < next.size(); ++c) {
                if (act[c] <= 0.0) next[c] = 0.0; // ReLU gate
            }
            delta = std::move(next);
        }
    }
    return loss;
}

void adam_update(Model& model, const Gradients& g, double batch_size, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    model.adam_step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(model.adam_step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(model.adam_step));
    for (int l = 0; l < model.n_layers(); ++l) {
        auto& w = model.weights[static_cast<std::size_t>(l)];
        auto& m = model.adam_m[static_cast<std::size_t>(l)];
        auto& v = model.adam_v[static_cast<std::size_t>(l)];
        const auto& gw = g.w[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < w.a.size(); ++i) {
            const double grad = gw.a[i] / batch_size;
            m.a[i] = beta1 * m.a[i] + (1.0 - beta1) * grad;
            v.a[i] = beta2 * v.a[i] + (1.0 - beta2) * grad * grad;
            w.a[i] -= lr * (m.a[i] / bc1) / (std::sqrt(v.a[i] / bc2) + eps);
        }
        auto& bias = model.biases[static_cast<std::size_t>(l)];
        auto& mb = model.adam_mb[static_cast<std::size_t>(l)];
        auto& vb = model.adam_vb[static_cast<std::size_t>(l)];
        const auto& gb = g.b[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < bias.size(); ++i) {
            const double grad = gb[i] / batch_size;
            mb[i] = beta1 * mb[i] + (1.0 - beta1) * grad;
            vb[i] = beta2 * vb[i] + (1.0 - beta2) * grad * grad;
            bias[i] -= lr * (mb[i] / bc1) / (std::sqrt(vb[i] / bc2) + eps);
        }
    }
}

} // namespace

double sample_loss_gradients(const Model& model, const FeatureMatrix& x,
                             std::size_t row, int label, ModelGradients& g) {
    Gradients internal(model);
    std::vector<std::vector<double>> acts;
    std::vector<double> delta;
    const double loss = backward_one(model, x, row, label, internal, acts, delta);
    g.weights = std::move(internal.w);
    g.biases = std::move(internal.b);
    return loss;
}

std::vector<double> predict_proba(const Model& model, const FeatureMatrix& x,
                                  std::size_t row) {
    std::vector<std::vector<double>> acts;
    forward_all(model, x, row, acts);
    return acts.back();
}

std::vector<double> hidden_embedding(const Model& model, const FeatureMatrix& x,
                                     std::size_t row) {
    if (model.n_layers() < 2) {
        raise(ErrorCode::InvalidParameter, "hidden_embedding: model has no hidden layer");
    }
    std::vector<std::vector<double>> acts;
    forward_all(model, x, row, acts);
    return acts[acts.size() - 2];
}

double evaluate(const Model& model, const FeatureMatrix& x, const std::vector<int>& y) {
    if (x.size() == 0) return 0.0;
    std::size_t correct = 0;
    std::vector<std::vector<double>> acts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        forward_all(model, x, i, acts);
        const auto& probs = acts.back();
        const auto best = std::max_element(probs.begin(), probs.end());
        if (static_cast<int>(best - probs.begin()) == y[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(x.size());
}

std::pair<Model, TrainHistory> train(const FeatureMatrix& x, const std::vector<int>& y,
                                     const NetConfig& cfg, const FeatureMatrix& eval_x,
                                     const std::vector<int>& eval_y) {
    cfg.validate();
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n) {
        raise(ErrorCode::InvalidParameter, "train: empty or mismatched training data");
    }
    int classes = 1 + *std::max_element(y.begin(), y.end());
    if (!eval_y.empty()) {
        classes = std::max(classes, 1 + *std::max_element(eval_y.begin(), eval_y.end()));
    }
    std::vector<double> class_labels(static_cast<std::size_t>(classes));
    std::iota(class_labels.begin(), class_labels.end(), 0.0);
    Model model = init_model(x.width, class_labels, cfg);

    TrainHistory history;
    const auto record = [&](std::int64_t samples_seen, double loss) {
        HistoryPoint pt;
        pt.samples_seen = samples_seen;
        pt.epoch_fraction = static_cast<double>(samples_seen) / static_cast<double>(n);
        pt.test_accuracy = evaluate(model, eval_x, eval_y);
        pt.train_loss = loss;
        history.push_back(pt);
    };
    record(0, 0.0);

    const std::int64_t total_samples =
        static_cast<std::int64_t>(std::llround(cfg.epochs * static_cast<double>(n)));
    const std::int64_t eval_every = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(n) / cfg.evals_per_epoch);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t epoch = 0;
    std::size_t cursor = n; // forces a shuffle on first use

    std::int64_t samples_seen = 0;
    std::int64_t next_eval = eval_every;
    double loss_accum = 0.0;
    std::int64_t loss_count = 0;
    std::vector<std::vector<double>> acts_scratch;
    std::vector<double> delta_scratch;
    Gradients grads(model);

    while (samples_seen < total_samples) {
        const std::int64_t batch_size =
            std::min<std::int64_t>(cfg.batch, total_samples - samples_seen);
        for (auto& gw : grads.w) std::fill(gw.a.begin(), gw.a.end(), 0.0);
        for (auto& gb : grads.b) std::fill(gb.begin(), gb.end(), 0.0);
        double batch_loss = 0.0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            if (cursor >= n) {
                rng::Stream shuffle(cfg.seed, rng::kShuffle, epoch++, 0);
                for (std::size_t a = n - 1; a > 0; --a) {
                    const std::size_t b = shuffle.next_u64() % (a + 1);
                    std::swap(order[a], order[b]);
                }
                cursor = 0;
            }
            const std::size_t row = order[cursor++];
            batch_loss += backward_one(model, x, row, y[row], grads, acts_scratch, delta_scratch);
        }
        batch_loss /= static_cast<double>(batch_size);
        if (!std::isfinite(batch_loss)) {
            raise(ErrorCode::Divergence,
                  "train: non-finite loss after " + std::to_string(samples_seen) + " samples");
        }
        adam_update(model, grads, static_cast<double>(batch_size), cfg.lr);
        samples_seen += batch_size;
        loss_accum += batch_loss;
        loss_count += 1;

        if (samples_seen >= next_eval || samples_seen >= total_samples) {
            record(samples_seen, loss_accum / static_cast<double>(loss_count));
            loss_accum = 0.0;
            loss_count = 0;
            while (next_eval <= samples_seen) next_eval += eval_every;
        }
    }
    return {std::move(model), std::move(history)};
}

LabelMap LabelMap::build(const std::vector<const std::vector<double>*>& label_sets) {
    LabelMap map;
    for (const auto* set : label_sets) {
        map.values.insert(map.values.end(), set->begin(), set->end());
    }
    std::sort(map.values.begin(), map.values.end());
    map.values.erase(std::unique(map.values.begin(), map.values.end()), map.values.end());
    return map;
}

std::vector<int> LabelMap::apply(const std::vector<double>& labels) const {
    std::vector<int> out;
    out.reserve(labels.size());
    for (double l : labels) {
        const auto it = std::lower_bound(values.begin(), values.end(), l);
        if (it == values.end() || *it != l) {
            raise(ErrorCode::CorruptInput, "label " + std::to_string(l) + " not in label map");
        }
        out.push_back(static_cast<int>(it - values.begin()));
    }
    return out;
}

namespace {

FeatureMatrix embed_and_hash(const Model& base, const FeatureMatrix& x,
                             const gcws::GcwsConfig& hash_cfg) {
    FeatureMatrix out;
    out.sparse_binary = true;
    out.width = static_cast<std::int64_t>(hash_cfg.code_space()) * hash_cfg.k;
    out.positions.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::vector<double> emb = hidden_embedding(base, x, i);
        const core::SparseVector sv = core::SparseVector::from_dense(emb);
        std::vector<std::uint32_t> codes;
        if (sv.empty()) {
            // ReLU can zero an entire embedding; give it the constant code 0
            codes.assign(static_cast<std::size_t>(hash_cfg.k), 0u);
        } else {
            codes = gcws::gcws_hash(sv, hash_cfg);
        }
        const sketch::EncodedFeatures f = sketch::one_hot(codes, hash_cfg);
        out.positions.push_back(f.set_positions);
    }
    return out;
}

} // namespace

std::pair<Model, TrainHistory> last_layer_gcws(
    const Model& base, const FeatureMatrix& train_x, const std::vector<int>& train_y,
    const FeatureMatrix& test_x, const std::vector<int>& test_y,
    const gcws::GcwsConfig& hash_cfg, const NetConfig& head_cfg) {
    if (base.n_layers() < 2) {
        raise(ErrorCode::InvalidParameter, "last_layer_gcws: base model has no hidden layer");
    }
    if (head_cfg.layers != 1) {
        raise(ErrorCode::InvalidParameter, "last_layer_gcws: head must be a softmax layer (L=1)");
    }
    hash_cfg.validate();
    const FeatureMatrix train_h = embed_and_hash(base, train_x, hash_cfg);
    const FeatureMatrix test_h = embed_and_hash(base, test_x, hash_cfg);
    return train(train_h, train_y, head_cfg, test_h, test_y);
}

namespace {

constexpr char kModelMagic[8] = {'G', 'C', 'W', 'S', 'N', 'E', 'T', 'M'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

} // namespace

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::Io, "cannot open for writing: " + path);
    out.write(kModelMagic, sizeof(kModelMagic));
    write_pod(out, kModelVersion);
    write_pod(out, model.input_width);
    write_pod(out, static_cast<std::int32_t>(model.classes));
    write_pod(out, static_cast<std::int32_t>(model.n_layers()));
    for (double l : model.class_labels) write_pod(out, l);
    for (int l = 0; l < model.n_layers(); ++l) {
        const auto& w = model.weights[static_cast<std::size_t>(l)];
        write_pod(out, static_cast<std::int32_t>(w.rows));
        write_pod(out, static_cast<std::int32_t>(w.cols));
        out.write(reinterpret_cast<const char*>(w.a.data()),
                  static_cast<std::streamsize>(w.a.size() * sizeof(double)));
        const auto& b = model.biases[static_cast<std::size_t>(l)];
        out.write(reinterpret_cast<const char*>(b.data()),
                  static_cast<std::streamsize>(b.size() * sizeof(double)));
    }
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open for reading: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
        raise(ErrorCode::CorruptInput, path + ": not a model checkpoint");
    }
    std::uint32_t version = 0;
    read_pod(in, version);
    if (version != kModelVersion) {
        raise(ErrorCode::CorruptInput, path + ": unsupported checkpoint version");
    }
    Model model;
    std::int32_t classes = 0, nlayers = 0;
    read_pod(in, model.input_width);
    read_pod(in, classes);
    read_pod(in, nlayers);
    model.classes = classes;
    model.class_labels.resize(static_cast<std::size_t>(classes));
    for (double& l : model.class_labels) read_pod(in, l);
    for (int l = 0; l < nlayers; ++l) {
        std::int32_t rows = 0, cols = 0;
        read_pod(in, rows);
        read_pod(in, cols);
        if (!in || rows <= 0 || cols <= 0) {
            raise(ErrorCode::CorruptInput, path + ": bad layer shape");
        }
        Matrix w(rows, cols);
        in.read(reinterpret_cast<char*>(w.a.data()),
                static_cast<std::streamsize>(w.a.size() * sizeof(double)));
        std::vector<double> b(static_cast<std::size_t>(rows));
        in.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(b.size() * sizeof(double)));
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
        model.adam_m.emplace_back(rows, cols);
        model.adam_v.emplace_back(rows, cols);
        model.adam_mb.emplace_back(static_cast<std::size_t>(rows), 0.0);
        model.adam_vb.emplace_back(static_cast<std::size_t>(rows), 0.0);
    }
    if (!in) raise(ErrorCode::CorruptInput, path + ": truncated checkpoint");
    return model;
}

void save_history(const TrainHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::Io, "cannot open for writing: " + path);
    out << "samples_seen,epoch_fraction,test_accuracy,train_loss\n";
    for (const auto& pt : history) {
        out << pt.samples_seen << ',' << io::format_double(pt.epoch_fraction) << ','
            << io::format_double(pt.test_accuracy) << ','
            << io::format_double(pt.train_loss) << '\n';
    }
}

} // namespace gcwsnet::learn
