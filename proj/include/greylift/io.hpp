#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "greylift/error.hpp"
#include "greylift/model.hpp"

namespace greylift::io {

class IoError : public Error {
public:
    using Error::Error;
};

// Writes contents to path via a temporary file in the same directory and a
// rename, so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// path_id,t,coord,value with 17 significant digits.
inline std::string to_csv(const PathEnsemble& ens) {
    std::string s = "path_id,t,coord,value\n";
    s.reserve(s.size() + ens.values.size() * 48);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        for (std::size_t i = 0; i < ens.n_times(); ++i) {
            const std::string t = format_double(ens.grid[i]);
            for (std::size_t c = 0; c < ens.d; ++c) {
                s += std::to_string(p);
                s += ',';
                s += t;
                s += ',';
                s += std::to_string(c);
                s += ',';
                s += format_double(ens.at(p, i, c));
                s += '\n';
            }
        }
    }
    return s;
}

inline nlohmann::ordered_json metadata(const PathEnsemble& ens) {
    nlohmann::ordered_json j;
    j["method"] = std::string(to_string(ens.method));
    j["seed"] = ens.seed;
    j["beta"] = ens.beta ? nlohmann::ordered_json(*ens.beta) : nlohmann::ordered_json(nullptr);
    j["alpha"] = ens.alpha;
    j["d"] = ens.d;
    j["n_paths"] = ens.n_paths;
    j["times"] = std::vector<double>(ens.grid.times().begin(), ens.grid.times().end());
    if (ens.y_values) j["y_values"] = *ens.y_values;
    return j;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path meta = csv;
    meta += ".meta.json";
    return meta;
}

// Writes the CSV and its sidecar <csv>.meta.json. extra is merged into the
// metadata (generator settings needed to regenerate the file).
inline void write_ensemble(const std::filesystem::path& csv, const PathEnsemble& ens,
                           const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json meta = metadata(ens);
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    write_atomic(csv, to_csv(ens));
    write_atomic(sidecar_path(csv), meta.dump(2) + "\n");
}

inline PathEnsemble read_ensemble(const std::filesystem::path& csv) {
    std::ifstream meta_in(sidecar_path(csv));
    if (!meta_in) throw IoError("missing metadata " + sidecar_path(csv).string());
    const nlohmann::json meta = nlohmann::json::parse(meta_in);
    TimeGrid grid(meta.at("times").get<std::vector<double>>());
    PathEnsemble ens(grid, meta.at("n_paths").get<std::size_t>(), meta.at("d").get<std::size_t>(),
                     method_from_string(meta.at("method").get<std::string>()), meta.at("seed").get<std::uint64_t>(),
                     meta.at("alpha").get<double>());
    if (!meta.at("beta").is_null()) ens.beta = meta.at("beta").get<double>();
    if (meta.contains("y_values")) ens.y_values = meta.at("y_values").get<std::vector<double>>();

    std::ifstream in(csv);
    if (!in) throw IoError("cannot open " + csv.string());
    std::string line;
    std::getline(in, line);
    if (line != "path_id,t,coord,value") throw IoError("unexpected CSV header in " + csv.string());
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[4];
        for (auto& field : f) {
            if (!std::getline(ls, field, ',')) throw IoError("malformed CSV row: " + line);
        }
        const std::size_t p = std::stoull(f[0]);
        const std::size_t c = std::stoull(f[2]);
        const auto i = grid.index_of(std::strtod(f[1].c_str(), nullptr));
        if (p >= ens.n_paths || c >= ens.d || !i) throw IoError("CSV row outside the ensemble shape: " + line);
        ens.at(p, *i, c) = std::strtod(f[3].c_str(), nullptr);
        ++rows;
    }
    if (rows != ens.values.size()) throw IoError("CSV row count does not match metadata");
    return ens;
}

}  // namespace greylift::io
