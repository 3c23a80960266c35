#include "gcwsnet.h"

#include <cstring>
#include <sstream>
#include <string>

#include "gcwsnet/io.hpp"
#include "gcwsnet/pipeline.hpp"

namespace {

thread_local std::string g_last_error;

gcwsnet_status map_code(gcwsnet::ErrorCode code) {
    switch (code) {
        case gcwsnet::ErrorCode::EmptyVector: return GCWSNET_ERR_EMPTY_VECTOR;
        case gcwsnet::ErrorCode::InvalidParameter: return GCWSNET_ERR_INVALID_PARAMETER;
        case gcwsnet::ErrorCode::Overflow: return GCWSNET_ERR_OVERFLOW;
        case gcwsnet::ErrorCode::ConfigMismatch: return GCWSNET_ERR_CONFIG_MISMATCH;
        case gcwsnet::ErrorCode::CorruptInput: return GCWSNET_ERR_CORRUPT_INPUT;
        case gcwsnet::ErrorCode::Io: return GCWSNET_ERR_IO;
        case gcwsnet::ErrorCode::Divergence: return GCWSNET_ERR_DIVERGENCE;
    }
    return GCWSNET_ERR_INTERNAL;
}

template <typename Fn>
gcwsnet_status guarded(Fn&& fn) {
    try {
        fn();
        return GCWSNET_OK;
    } catch (const gcwsnet::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GCWSNET_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return GCWSNET_ERR_INTERNAL;
    }
}

double parse_number(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        gcwsnet::raise(gcwsnet::ErrorCode::InvalidParameter,
                       "bad number '" + tok + "' in list");
    }
}

std::vector<double> parse_list(const std::string& text) {
    // either "a,b,c" or "start:stop:step"
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::istringstream ss(text);
        std::string tok;
        double parts[3] = {0, 0, 0};
        int n = 0;
        while (std::getline(ss, tok, ':') && n < 3) parts[n++] = parse_number(tok);
        if (n != 3 || parts[2] <= 0.0) {
            gcwsnet::raise(gcwsnet::ErrorCode::InvalidParameter,
                           "grid must be start:stop:step, got '" + text + "'");
        }
        for (double v = parts[0]; v <= parts[1] + 1e-12; v += parts[2]) out.push_back(v);
    } else {
        std::istringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) out.push_back(parse_number(tok));
        }
    }
    if (out.empty()) {
        gcwsnet::raise(gcwsnet::ErrorCode::InvalidParameter, "empty list '" + text + "'");
    }
    return out;
}

} // namespace

extern "C" {

struct gcwsnet_dataset {
    gcwsnet::io::Dataset ds;
};

const char* gcwsnet_last_error(void) { return g_last_error.c_str(); }

gcwsnet_status gcwsnet_dataset_load(const char* path, gcwsnet_dataset** out) {
    return guarded([&] {
        auto* handle = new gcwsnet_dataset{gcwsnet::io::load_libsvm(path)};
        *out = handle;
    });
}

void gcwsnet_dataset_free(gcwsnet_dataset* ds) { delete ds; }

int64_t gcwsnet_dataset_rows(const gcwsnet_dataset* ds) {
    return static_cast<int64_t>(ds->ds.size());
}

int64_t gcwsnet_dataset_dim(const gcwsnet_dataset* ds) { return ds->ds.dim; }

static const gcwsnet::core::SparseVector& row_ref(const gcwsnet_dataset* ds,
                                                  int64_t row) {
    if (row < 0 || static_cast<std::size_t>(row) >= ds->ds.size()) {
        gcwsnet::raise(gcwsnet::ErrorCode::InvalidParameter,
                       "row " + std::to_string(row) + " out of range");
    }
    return ds->ds.rows[static_cast<std::size_t>(row)];
}

gcwsnet_status gcwsnet_pgmm(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                            double p, double* out) {
    return guarded([&] {
        *out = gcwsnet::core::pgmm_kernel(row_ref(ds, row_u), row_ref(ds, row_v), p);
    });
}

gcwsnet_status gcwsnet_cosine(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                              double* out) {
    return guarded([&] {
        *out = gcwsnet::core::cosine(row_ref(ds, row_u), row_ref(ds, row_v));
    });
}

gcwsnet_status gcwsnet_rbf(const gcwsnet_dataset* ds, int64_t row_u, int64_t row_v,
                           double gamma, double* out) {
    return guarded([&] {
        *out = gcwsnet::core::rbf_kernel(row_ref(ds, row_u), row_ref(ds, row_v), gamma);
    });
}

gcwsnet_status gcwsnet_hash_row(const gcwsnet_dataset* ds, int64_t row, double p,
                                int k, int b, int tbits, uint64_t seed,
                                uint32_t* codes_out) {
    return guarded([&] {
        gcwsnet::gcws::GcwsConfig cfg;
        cfg.p = p;
        cfg.k = k;
        cfg.b = b;
        cfg.tbits = tbits;
        cfg.seed = seed;
        const auto codes = gcwsnet::gcws::gcws_hash(row_ref(ds, row), cfg);
        std::memcpy(codes_out, codes.data(), codes.size() * sizeof(uint32_t));
    });
}

double gcwsnet_cs_ratio(int b, double jaccard, double m) {
    return gcwsnet::sketch::cs_ratio(b, jaccard, m);
}

double gcwsnet_cs_variance(double pb, int k, double bins) {
    return gcwsnet::sketch::cs_variance(pb, k, bins);
}

void gcwsnet_nrff_variance(double rho, double gamma, double* v_normalized,
                           double* v_unnormalized) {
    const auto v = gcwsnet::nrff::nrff_variance(rho, gamma);
    if (v_normalized) *v_normalized = v.normalized;
    if (v_unnormalized) *v_unnormalized = v.unnormalized;
}

gcwsnet_status gcwsnet_run_hash(const char* input_libsvm, double p, int k, int b,
                                int tbits, uint64_t seed, const char* out_path) {
    return guarded([&] {
        gcwsnet::gcws::GcwsConfig cfg;
        cfg.p = p;
        cfg.k = k;
        cfg.b = b;
        cfg.tbits = tbits;
        cfg.seed = seed;
        gcwsnet::pipeline::run_hash(input_libsvm, cfg, out_path);
    });
}

gcwsnet_status gcwsnet_run_sketch(const char* codes_path, int64_t bins, uint64_t seed,
                                  const char* out_path) {
    return guarded([&] {
        gcwsnet::pipeline::run_sketch(codes_path, bins, seed, out_path);
    });
}

gcwsnet_status gcwsnet_run_nrff(const char* input_libsvm, int k, double gamma,
                                uint64_t seed, int normalize, const char* out_path) {
    return guarded([&] {
        gcwsnet::nrff::RffConfig cfg;
        cfg.k = k;
        cfg.gamma = gamma;
        cfg.seed = seed;
        cfg.normalize = normalize != 0;
        gcwsnet::pipeline::run_nrff(input_libsvm, cfg, out_path);
    });
}

gcwsnet_status gcwsnet_run_train(const char* features_path, const char* eval_path,
                                 const char* preproc_spec, int layers, int hidden,
                                 double lr, int batch, double epochs, uint64_t seed,
                                 const char* history_out, const char* model_out) {
    return guarded([&] {
        gcwsnet::pipeline::TrainArgs args;
        args.features_path = features_path;
        args.eval_path = eval_path ? eval_path : "";
        args.preproc_spec = preproc_spec ? preproc_spec : "raw";
        args.net.layers = layers;
        args.net.hidden = hidden;
        args.net.lr = lr;
        args.net.batch = batch;
        args.net.epochs = epochs;
        args.net.seed = seed;
        args.history_out = history_out;
        args.model_out = model_out ? model_out : "";
        gcwsnet::pipeline::run_train(args);
    });
}

gcwsnet_status gcwsnet_run_validate(const char* suite, int64_t trials, uint64_t seed,
                                    const char* report_out, int* all_passed) {
    return guarded([&] {
        const bool ok = gcwsnet::pipeline::run_validate(suite, trials, seed, report_out);
        if (all_passed) *all_passed = ok ? 1 : 0;
    });
}

gcwsnet_status gcwsnet_run_ratio(const char* b_list, const char* m_list,
                                 const char* j_grid, const char* out_csv) {
    return guarded([&] {
        std::vector<int> bs;
        for (double b : parse_list(b_list)) bs.push_back(static_cast<int>(b));
        gcwsnet::pipeline::run_ratio(bs, parse_list(m_list), parse_list(j_grid), out_csv);
    });
}

} // extern "C"
