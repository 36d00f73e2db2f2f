#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "suhub/ctmc/path_stream.hpp"

namespace suhub {

/// Shortest round-trip decimal form; identical bytes across runs is part of
/// the determinism contract for artifacts.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Minimal CSV emitter with a fixed header and deterministic formatting.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path), columns_(columns.size()) {
        if (!out_)
            throw std::runtime_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ",";
            out_ << columns[i];
        }
        out_ << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_)
            throw std::invalid_argument("CsvWriter: wrong cell count");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

inline void to_json(nlohmann::json& j, const SiteFlavor& X) {
    j = nlohmann::json{X.site, X.flavor};
}

inline void from_json(const nlohmann::json& j, SiteFlavor& X) {
    X.site = j.at(0).get<int>();
    X.flavor = j.at(1).get<int>();
}

inline void to_json(nlohmann::json& j, const AcceptedPath& p) {
    nlohmann::json jumps = nlohmann::json::array();
    for (const auto& per_particle : p.jumps) {
        nlohmann::json js = nlohmann::json::array();
        for (const auto& [t, site] : per_particle)
            js.push_back(nlohmann::json{t, site});
        jumps.push_back(std::move(js));
    }
    j = nlohmann::json{{"initial", p.initial},
                       {"jumps", std::move(jumps)},
                       {"permutation", p.permutation},
                       {"weight", p.weight}};
}

inline void from_json(const nlohmann::json& j, AcceptedPath& p) {
    p.initial = j.at("initial").get<std::vector<SiteFlavor>>();
    p.jumps.clear();
    for (const auto& js : j.at("jumps")) {
        std::vector<std::pair<double, int>> per_particle;
        for (const auto& e : js)
            per_particle.emplace_back(e.at(0).get<double>(), e.at(1).get<int>());
        p.jumps.push_back(std::move(per_particle));
    }
    p.permutation = j.at("permutation").get<std::vector<int>>();
    p.weight = j.at("weight").get<double>();
}

/// JSON-lines serialization of an accepted-path stream; beta and the total
/// sample count travel in a sidecar written by the campaign layer.
inline void write_path_stream(const std::string& path,
                              const std::vector<AcceptedPath>& paths) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_path_stream: cannot open " + path);
    for (const auto& p : paths) {
        nlohmann::json j = p;
        out << j.dump() << "\n";
    }
}

inline std::vector<AcceptedPath> read_path_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_path_stream: cannot open " + path);
    std::vector<AcceptedPath> paths;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        paths.push_back(nlohmann::json::parse(line).get<AcceptedPath>());
    }
    return paths;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_text_file: cannot open " + path);
    out << body;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_text_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace suhub
