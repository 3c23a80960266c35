#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcwsnet/core.hpp"
#include "gcwsnet/gcws.hpp"
#include "gcwsnet/nrff.hpp"
#include "gcwsnet/sketch.hpp"

namespace gcwsnet::io {

struct Dataset {
    std::int64_t dim = 0;
    std::vector<double> labels;
    std::vector<core::SparseVector> rows;

    std::size_t size() const { return rows.size(); }
};

// LIBSVM text format: "<label> <index>:<value> ...", 1-based on disk.
Dataset load_libsvm(const std::string& path);
void save_libsvm(const Dataset& ds, const std::string& path);

// GCWS code dump: "#gcws p=.. k=.. b=.. tbits=.. seed=.." header, then one
// row per sample: label followed by k integer codes.
struct CodesFile {
    gcws::GcwsConfig cfg;
    std::vector<double> labels;
    std::vector<std::vector<std::uint32_t>> codes;
};

void save_codes(const CodesFile& cf, const std::string& path);
CodesFile load_codes(const std::string& path);

// Count-sketched dump: label + B signed integers per row.
struct SketchFile {
    gcws::GcwsConfig gcws_cfg;
    sketch::CountSketchConfig cs_cfg;
    std::vector<double> labels;
    std::vector<std::vector<std::int32_t>> rows;
};

void save_sketches(const SketchFile& sf, const std::string& path);
SketchFile load_sketches(const std::string& path);

// NRFF dump: label + k reals per row.
struct NrffFile {
    nrff::RffConfig cfg;
    std::vector<double> labels;
    std::vector<std::vector<double>> rows;
};

void save_nrff(const NrffFile& nf, const std::string& path);
NrffFile load_nrff(const std::string& path);

enum class FileKind { Libsvm, GcwsCodes, Sketch, Nrff };

// Peeks at the header line to classify a feature file.
FileKind detect_kind(const std::string& path);

// FNV-1a digest of a file's bytes, recorded in run manifests.
std::uint64_t file_digest(const std::string& path);

std::string format_double(double v); // shortest round-trip formatting

} // namespace gcwsnet::io
