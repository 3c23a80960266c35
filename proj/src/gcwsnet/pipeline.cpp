#include "gcwsnet/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gcwsnet/validate.hpp"

namespace gcwsnet::pipeline {

namespace {

std::map<std::string, std::string> parse_kv(const std::string& params) {
    std::map<std::string, std::string> kv;
    std::istringstream ss(params);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::InvalidParameter, "preproc: expected key=value, got '" + item + "'");
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

double to_double(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::InvalidParameter, "preproc: bad number '" + text + "'");
    }
}

std::int64_t to_int(const std::string& text) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::InvalidParameter, "preproc: bad integer '" + text + "'");
    }
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : to_double(it->second);
}

std::int64_t kv_int(const std::map<std::string, std::string>& kv, const std::string& key,
                    std::int64_t fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : to_int(it->second);
}

} // namespace

PreprocConfig PreprocConfig::parse(const std::string& spec) {
    PreprocConfig cfg;
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "raw") {
        cfg.kind = Kind::Raw;
    } else if (name == "power" || name == "logpower") {
        cfg.kind = name == "power" ? Kind::Power : Kind::LogPower;
        // allow both "power:2" and "power:p=2"
        if (!rest.empty() && rest.find('=') == std::string::npos) {
            cfg.power = to_double(rest);
        } else {
            cfg.power = kv_double(parse_kv(rest), "p", 1.0);
        }
    } else if (name == "gcws" || name == "gcws+cs") {
        const auto kv = parse_kv(rest);
        cfg.kind = name == "gcws" ? Kind::Gcws : Kind::GcwsCs;
        cfg.gcws.p = kv_double(kv, "p", 1.0);
        cfg.gcws.k = static_cast<int>(kv_int(kv, "k", 64));
        cfg.gcws.b = static_cast<int>(kv_int(kv, "b", 8));
        cfg.gcws.tbits = static_cast<int>(kv_int(kv, "tbits", 0));
        cfg.gcws.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", 0));
        cfg.gcws.validate();
        if (cfg.kind == Kind::GcwsCs) {
            cfg.cs.bins = kv_int(kv, "B", 256);
            cfg.cs.seed = static_cast<std::uint64_t>(kv_int(kv, "cs_seed", 0));
            cfg.cs.validate();
        }
    } else if (name == "nrff") {
        const auto kv = parse_kv(rest);
        cfg.kind = Kind::Nrff;
        cfg.rff.k = static_cast<int>(kv_int(kv, "k", 128));
        cfg.rff.gamma = kv_double(kv, "gamma", 1.0);
        cfg.rff.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", 0));
        cfg.rff.normalize = kv_int(kv, "normalize", 1) != 0;
        cfg.rff.validate();
    } else {
        raise(ErrorCode::InvalidParameter, "unknown preproc '" + name + "'");
    }
    return cfg;
}

std::string PreprocConfig::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Raw: return "raw";
        case Kind::Power: out << "power:p=" << power; break;
        case Kind::LogPower: out << "logpower:p=" << power; break;
        case Kind::Gcws:
        case Kind::GcwsCs:
            out << (kind == Kind::Gcws ? "gcws" : "gcws+cs") << ":p=" << gcws.p
                << ",k=" << gcws.k << ",b=" << gcws.b << ",tbits=" << gcws.tbits
                << ",seed=" << gcws.seed;
            if (kind == Kind::GcwsCs) out << ",B=" << cs.bins << ",cs_seed=" << cs.seed;
            break;
        case Kind::Nrff:
            out << "nrff:k=" << rff.k << ",gamma=" << rff.gamma << ",seed=" << rff.seed
                << ",normalize=" << (rff.normalize ? 1 : 0);
            break;
    }
    return out.str();
}

namespace {

std::vector<double> densify(const core::SparseVector& v, std::int64_t dim) {
    std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
    for (const auto& [idx, val] : v.entries) out[static_cast<std::size_t>(idx)] = val;
    return out;
}

} // namespace

learn::FeatureMatrix featurize(const io::Dataset& ds, const PreprocConfig& cfg) {
    learn::FeatureMatrix out;
    switch (cfg.kind) {
        case PreprocConfig::Kind::Raw:
        case PreprocConfig::Kind::Power:
        case PreprocConfig::Kind::LogPower:
            out.width = ds.dim;
            out.dense.reserve(ds.size());
            for (std::size_t i = 0; i < ds.size(); ++i) {
                try {
                    if (cfg.kind == PreprocConfig::Kind::Raw) {
                        out.dense.push_back(densify(ds.rows[i], ds.dim));
                    } else if (cfg.kind == PreprocConfig::Kind::Power) {
                        out.dense.push_back(densify(core::power_transform(ds.rows[i], cfg.power), ds.dim));
                    } else {
                        out.dense.push_back(densify(core::logpower_transform(ds.rows[i], cfg.power), ds.dim));
                    }
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::Overflow) {
                        raise(ErrorCode::Overflow,
                              "sample " + std::to_string(i) + ": " + e.what());
                    }
                    throw;
                }
            }
            break;
        case PreprocConfig::Kind::Gcws:
            out.sparse_binary = true;
            out.width = static_cast<std::int64_t>(cfg.gcws.code_space()) * cfg.gcws.k;
            out.positions.reserve(ds.size());
            for (const auto& row : ds.rows) {
                const auto codes = gcws::gcws_hash(row, cfg.gcws);
                out.positions.push_back(sketch::one_hot(codes, cfg.gcws).set_positions);
            }
            break;
        case PreprocConfig::Kind::GcwsCs:
            out.width = cfg.cs.bins;
            out.dense.reserve(ds.size());
            for (const auto& row : ds.rows) {
                const auto codes = gcws::gcws_hash(row, cfg.gcws);
                const auto sk = sketch::count_sketch(sketch::one_hot(codes, cfg.gcws), cfg.cs);
                std::vector<double> dense(sk.values.begin(), sk.values.end());
                out.dense.push_back(std::move(dense));
            }
            break;
        case PreprocConfig::Kind::Nrff:
            out.width = cfg.rff.k;
            out.dense.reserve(ds.size());
            for (const auto& row : ds.rows) {
                out.dense.push_back(nrff::rff_features(row, cfg.rff));
            }
            break;
    }
    return out;
}

LoadedFeatures load_features(const std::string& path, const PreprocConfig& preproc) {
    LoadedFeatures out;
    out.kind = io::detect_kind(path);
    switch (out.kind) {
        case io::FileKind::Libsvm: {
            const io::Dataset ds = io::load_libsvm(path);
            out.labels = ds.labels;
            out.preproc = preproc;
            out.x = featurize(ds, preproc);
            break;
        }
        case io::FileKind::GcwsCodes: {
            const io::CodesFile cf = io::load_codes(path);
            out.labels = cf.labels;
            out.preproc.kind = PreprocConfig::Kind::Gcws;
            out.preproc.gcws = cf.cfg;
            out.x.sparse_binary = true;
            out.x.width = static_cast<std::int64_t>(cf.cfg.code_space()) * cf.cfg.k;
            for (const auto& codes : cf.codes) {
                out.x.positions.push_back(sketch::one_hot(codes, cf.cfg).set_positions);
            }
            break;
        }
        case io::FileKind::Sketch: {
            const io::SketchFile sf = io::load_sketches(path);
            out.labels = sf.labels;
            out.preproc.kind = PreprocConfig::Kind::GcwsCs;
            out.preproc.gcws = sf.gcws_cfg;
            out.preproc.cs = sf.cs_cfg;
            out.x.width = sf.cs_cfg.bins;
            for (const auto& row : sf.rows) {
                out.x.dense.emplace_back(row.begin(), row.end());
            }
            break;
        }
        case io::FileKind::Nrff: {
            const io::NrffFile nf = io::load_nrff(path);
            out.labels = nf.labels;
            out.preproc.kind = PreprocConfig::Kind::Nrff;
            out.preproc.rff = nf.cfg;
            out.x.width = nf.cfg.k;
            out.x.dense = nf.rows;
            break;
        }
    }
    return out;
}

LoadedFeatures featurize_like(const std::string& path, const LoadedFeatures& reference,
                              const PreprocConfig& preproc) {
    const io::FileKind kind = io::detect_kind(path);
    if (kind != io::FileKind::Libsvm) {
        LoadedFeatures out = load_features(path, preproc);
        if (out.x.width != reference.x.width) {
            raise(ErrorCode::ConfigMismatch,
                  path + ": feature width " + std::to_string(out.x.width) +
                      " does not match training width " + std::to_string(reference.x.width));
        }
        return out;
    }
    // libsvm eval data inherits the training side's feature configuration
    const PreprocConfig& cfg =
        reference.kind == io::FileKind::Libsvm ? preproc : reference.preproc;
    LoadedFeatures out;
    const io::Dataset ds = io::load_libsvm(path);
    out.labels = ds.labels;
    out.preproc = cfg;
    out.x = featurize(ds, cfg);
    return out;
}

namespace {

class ManifestWriter {
public:
    ManifestWriter(std::string command, std::string out_path)
        : command_(std::move(command)), out_path_(std::move(out_path)),
          start_(std::chrono::steady_clock::now()) {}

    void add_param(const std::string& key, const nlohmann::json& value) {
        params_[key] = value;
    }
    void add_input(const std::string& path) { inputs_.push_back(path); }
    void add_output(const std::string& path) { outputs_.push_back(path); }

    void write() const {
        nlohmann::json m;
        m["command"] = command_;
        m["params"] = params_;
        nlohmann::json inputs = nlohmann::json::array();
        for (const auto& p : inputs_) {
            char digest[32];
            std::snprintf(digest, sizeof(digest), "%016llx",
                          static_cast<unsigned long long>(io::file_digest(p)));
            inputs.push_back({{"path", p}, {"fnv1a64", digest}});
        }
        m["inputs"] = inputs;
        m["outputs"] = outputs_;
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        m["wall_clock_seconds"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        std::ofstream out(out_path_ + ".manifest.json");
        if (!out) raise(ErrorCode::Io, "cannot write manifest beside " + out_path_);
        out << m.dump(2) << '\n';
    }

private:
    std::string command_;
    std::string out_path_;
    nlohmann::json params_ = nlohmann::json::object();
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace

void run_hash(const std::string& input, const gcws::GcwsConfig& cfg,
              const std::string& out_path) {
    cfg.validate();
    ManifestWriter manifest("hash", out_path);
    manifest.add_input(input);
    manifest.add_output(out_path);
    manifest.add_param("p", cfg.p);
    manifest.add_param("k", cfg.k);
    manifest.add_param("b", cfg.b);
    manifest.add_param("tbits", cfg.tbits);
    manifest.add_param("seed", cfg.seed);

    const io::Dataset ds = io::load_libsvm(input);
    io::CodesFile cf;
    cf.cfg = cfg;
    cf.labels = ds.labels;
    cf.codes.reserve(ds.size());
    for (const auto& row : ds.rows) {
        cf.codes.push_back(gcws::gcws_hash(row, cfg));
    }
    io::save_codes(cf, out_path);
    manifest.write();
}

void run_sketch(const std::string& codes_path, std::int64_t bins, std::uint64_t seed,
                const std::string& out_path) {
    ManifestWriter manifest("sketch", out_path);
    manifest.add_input(codes_path);
    manifest.add_output(out_path);
    manifest.add_param("B", bins);
    manifest.add_param("seed", seed);

    const io::CodesFile cf = io::load_codes(codes_path);
    io::SketchFile sf;
    sf.gcws_cfg = cf.cfg;
    sf.cs_cfg.bins = bins;
    sf.cs_cfg.seed = seed;
    sf.cs_cfg.validate();
    sf.labels = cf.labels;
    sf.rows.reserve(cf.codes.size());
    for (const auto& codes : cf.codes) {
        sf.rows.push_back(sketch::count_sketch(sketch::one_hot(codes, cf.cfg), sf.cs_cfg).values);
    }
    io::save_sketches(sf, out_path);
    manifest.write();
}

void run_nrff(const std::string& input, const nrff::RffConfig& cfg,
              const std::string& out_path) {
    cfg.validate();
    ManifestWriter manifest("nrff", out_path);
    manifest.add_input(input);
    manifest.add_output(out_path);
    manifest.add_param("k", cfg.k);
    manifest.add_param("gamma", cfg.gamma);
    manifest.add_param("seed", cfg.seed);
    manifest.add_param("normalize", cfg.normalize);

    const io::Dataset ds = io::load_libsvm(input);
    io::NrffFile nf;
    nf.cfg = cfg;
    nf.labels = ds.labels;
    nf.rows.reserve(ds.size());
    for (const auto& row : ds.rows) {
        nf.rows.push_back(nrff::rff_features(row, cfg));
    }
    io::save_nrff(nf, out_path);
    manifest.write();
}

learn::TrainHistory run_train(const TrainArgs& args) {
    args.net.validate();
    ManifestWriter manifest("train", args.history_out);
    manifest.add_input(args.features_path);
    if (!args.eval_path.empty()) manifest.add_input(args.eval_path);
    manifest.add_output(args.history_out);
    if (!args.model_out.empty()) manifest.add_output(args.model_out);
    manifest.add_param("preproc", args.preproc_spec);
    manifest.add_param("L", args.net.layers);
    manifest.add_param("H", args.net.hidden);
    manifest.add_param("lr", args.net.lr);
    manifest.add_param("batch", args.net.batch);
    manifest.add_param("epochs", args.net.epochs);
    manifest.add_param("seed", args.net.seed);

    const PreprocConfig preproc = PreprocConfig::parse(args.preproc_spec);
    const LoadedFeatures train_f = load_features(args.features_path, preproc);
    LoadedFeatures eval_f;
    if (!args.eval_path.empty()) {
        eval_f = featurize_like(args.eval_path, train_f, preproc);
    }

    const learn::LabelMap labels =
        learn::LabelMap::build({&train_f.labels, &eval_f.labels});
    const auto y_train = labels.apply(train_f.labels);
    const auto y_eval = labels.apply(eval_f.labels);

    auto [model, history] = learn::train(train_f.x, y_train, args.net, eval_f.x, y_eval);
    model.class_labels = labels.values;
    learn::save_history(history, args.history_out);
    if (!args.model_out.empty()) learn::save_model(model, args.model_out);
    manifest.write();
    return history;
}

bool run_validate(const std::string& suite, std::int64_t trials, std::uint64_t seed,
                  const std::string& report_out) {
    ManifestWriter manifest("validate", report_out);
    manifest.add_output(report_out);
    manifest.add_param("suite", suite);
    manifest.add_param("trials", trials);
    manifest.add_param("seed", seed);

    const auto reports = validate::run_suite(suite, trials, seed);
    std::ofstream out(report_out);
    if (!out) raise(ErrorCode::Io, "cannot open for writing: " + report_out);
    out << validate::reports_to_json(reports) << '\n';
    manifest.write();
    return validate::all_pass(reports);
}

void run_ratio(const std::vector<int>& b_list, const std::vector<double>& m_list,
               const std::vector<double>& j_grid, const std::string& out_csv) {
    ManifestWriter manifest("ratio", out_csv);
    manifest.add_output(out_csv);

    const auto rows = sketch::ratio_table(b_list, j_grid, m_list);
    std::ofstream out(out_csv);
    if (!out) raise(ErrorCode::Io, "cannot open for writing: " + out_csv);
    out << "b,J,m,P_b,R\n";
    for (const auto& r : rows) {
        out << r.b << ',' << io::format_double(r.jaccard) << ','
            << io::format_double(r.m) << ',' << io::format_double(r.pb) << ','
            << io::format_double(r.ratio) << '\n';
    }
    manifest.write();
}

} // namespace gcwsnet::pipeline
