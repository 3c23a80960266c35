#include "gcwsnet/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gcwsnet::io {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::Io, "cannot open for reading: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::Io, "cannot open for writing: " + path);
    return out;
}

double parse_double(const std::string& tok, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        raise(ErrorCode::CorruptInput, ctx + ": bad number '" + tok + "'");
    }
}

// Parses "key=value" fields from a dump header line after the tag word.
std::string header_field(const std::string& header, const std::string& key,
                         const std::string& path) {
    const std::string needle = " " + key + "=";
    const auto pos = header.find(needle);
    if (pos == std::string::npos) {
        raise(ErrorCode::CorruptInput, path + ": header missing field '" + key + "'");
    }
    const auto start = pos + needle.size();
    auto end = header.find(' ', start);
    if (end == std::string::npos) end = header.size();
    return header.substr(start, end - start);
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double parsed = 0.0;
    // prefer the shortest representation that still round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        std::sscanf(shorter, "%lf", &parsed);
        if (parsed == v) return shorter;
    }
    return buf;
}

Dataset load_libsvm(const std::string& path) {
    std::ifstream in = open_in(path);
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        const std::string ctx = path + ":" + std::to_string(lineno);
        ds.labels.push_back(parse_double(tok, ctx));
        core::SparseVector row;
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                raise(ErrorCode::CorruptInput, ctx + ": expected index:value, got '" + tok + "'");
            }
            std::int64_t idx = 0;
            const auto [ptr, ec] =
                std::from_chars(tok.data(), tok.data() + colon, idx);
            if (ec != std::errc() || ptr != tok.data() + colon || idx < 1) {
                raise(ErrorCode::CorruptInput, ctx + ": bad 1-based index in '" + tok + "'");
            }
            const double val = parse_double(tok.substr(colon + 1), ctx);
            if (!row.entries.empty() && row.entries.back().first >= idx - 1) {
                raise(ErrorCode::CorruptInput, ctx + ": indices not strictly increasing");
            }
            if (val != 0.0) row.entries.emplace_back(idx - 1, val);
            ds.dim = std::max(ds.dim, idx);
        }
        ds.rows.push_back(std::move(row));
    }
    for (auto& row : ds.rows) row.dim = ds.dim;
    return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
    std::ofstream out = open_out(path);
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        out << format_double(ds.labels[r]);
        for (const auto& [idx, val] : ds.rows[r].entries) {
            out << ' ' << (idx + 1) << ':' << format_double(val);
        }
        out << '\n';
    }
}

void save_codes(const CodesFile& cf, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "#gcws p=" << format_double(cf.cfg.p) << " k=" << cf.cfg.k
        << " b=" << cf.cfg.b << " tbits=" << cf.cfg.tbits
        << " seed=" << cf.cfg.seed << '\n';
    for (std::size_t r = 0; r < cf.codes.size(); ++r) {
        out << format_double(cf.labels[r]);
        for (std::uint32_t c : cf.codes[r]) out << ' ' << c;
        out << '\n';
    }
}

CodesFile load_codes(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("#gcws", 0) != 0) {
        raise(ErrorCode::CorruptInput, path + ": missing #gcws header");
    }
    CodesFile cf;
    cf.cfg.p = parse_double(header_field(header, "p", path), path);
    cf.cfg.k = std::stoi(header_field(header, "k", path));
    cf.cfg.b = std::stoi(header_field(header, "b", path));
    cf.cfg.tbits = std::stoi(header_field(header, "tbits", path));
    cf.cfg.seed = std::stoull(header_field(header, "seed", path));
    cf.cfg.validate();
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        std::string tok;
        ss >> tok;
        cf.labels.push_back(parse_double(tok, ctx));
        std::vector<std::uint32_t> row;
        row.reserve(static_cast<std::size_t>(cf.cfg.k));
        std::uint64_t c;
        while (ss >> c) {
            if (c >= cf.cfg.code_space()) {
                raise(ErrorCode::CorruptInput, ctx + ": code out of range");
            }
            row.push_back(static_cast<std::uint32_t>(c));
        }
        if (static_cast<int>(row.size()) != cf.cfg.k) {
            raise(ErrorCode::CorruptInput, ctx + ": expected " + std::to_string(cf.cfg.k) + " codes");
        }
        cf.codes.push_back(std::move(row));
    }
    return cf;
}

void save_sketches(const SketchFile& sf, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "#sketch p=" << format_double(sf.gcws_cfg.p) << " k=" << sf.gcws_cfg.k
        << " b=" << sf.gcws_cfg.b << " tbits=" << sf.gcws_cfg.tbits
        << " gcws_seed=" << sf.gcws_cfg.seed << " B=" << sf.cs_cfg.bins
        << " cs_seed=" << sf.cs_cfg.seed << '\n';
    for (std::size_t r = 0; r < sf.rows.size(); ++r) {
        out << format_double(sf.labels[r]);
        for (std::int32_t v : sf.rows[r]) out << ' ' << v;
        out << '\n';
    }
}

SketchFile load_sketches(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("#sketch", 0) != 0) {
        raise(ErrorCode::CorruptInput, path + ": missing #sketch header");
    }
    SketchFile sf;
    sf.gcws_cfg.p = parse_double(header_field(header, "p", path), path);
    sf.gcws_cfg.k = std::stoi(header_field(header, "k", path));
    sf.gcws_cfg.b = std::stoi(header_field(header, "b", path));
    sf.gcws_cfg.tbits = std::stoi(header_field(header, "tbits", path));
    sf.gcws_cfg.seed = std::stoull(header_field(header, "gcws_seed", path));
    sf.cs_cfg.bins = std::stoll(header_field(header, "B", path));
    sf.cs_cfg.seed = std::stoull(header_field(header, "cs_seed", path));
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        std::string tok;
        ss >> tok;
        sf.labels.push_back(parse_double(tok, ctx));
        std::vector<std::int32_t> row;
        row.reserve(static_cast<std::size_t>(sf.cs_cfg.bins));
        std::int64_t v;
        while (ss >> v) row.push_back(static_cast<std::int32_t>(v));
        if (static_cast<std::int64_t>(row.size()) != sf.cs_cfg.bins) {
            raise(ErrorCode::CorruptInput, ctx + ": expected " + std::to_string(sf.cs_cfg.bins) + " bins");
        }
        sf.rows.push_back(std::move(row));
    }
    return sf;
}

void save_nrff(const NrffFile& nf, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "#nrff k=" << nf.cfg.k << " gamma=" << format_double(nf.cfg.gamma)
        << " seed=" << nf.cfg.seed << " normalized=" << (nf.cfg.normalize ? 1 : 0)
        << '\n';
    for (std::size_t r = 0; r < nf.rows.size(); ++r) {
        out << format_double(nf.labels[r]);
        for (double v : nf.rows[r]) out << ' ' << format_double(v);
        out << '\n';
    }
}

NrffFile load_nrff(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("#nrff", 0) != 0) {
        raise(ErrorCode::CorruptInput, path + ": missing #nrff header");
    }
    NrffFile nf;
    nf.cfg.k = std::stoi(header_field(header, "k", path));
    nf.cfg.gamma = parse_double(header_field(header, "gamma", path), path);
    nf.cfg.seed = std::stoull(header_field(header, "seed", path));
    nf.cfg.normalize = header_field(header, "normalized", path) == "1";
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        const std::string ctx = path + ":" + std::to_string(lineno);
        std::string tok;
        ss >> tok;
        nf.labels.push_back(parse_double(tok, ctx));
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(nf.cfg.k));
        double v;
        while (ss >> v) row.push_back(v);
        if (static_cast<int>(row.size()) != nf.cfg.k) {
            raise(ErrorCode::CorruptInput, ctx + ": expected " + std::to_string(nf.cfg.k) + " values");
        }
        nf.rows.push_back(std::move(row));
    }
    return nf;
}

FileKind detect_kind(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string header;
    std::getline(in, header);
    if (header.rfind("#gcws", 0) == 0) return FileKind::GcwsCodes;
    if (header.rfind("#sketch", 0) == 0) return FileKind::Sketch;
    if (header.rfind("#nrff", 0) == 0) return FileKind::Nrff;
    return FileKind::Libsvm;
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open for digest: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

} // namespace gcwsnet::io
