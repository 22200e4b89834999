#include "bhl/result_table.hpp"

#include "bhl/error.hpp"
#include "bhl/hash.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef BHL_VERSION
#define BHL_VERSION "0.0.0"
#endif

namespace bhl {

using nlohmann::json;

ResultTable::ResultTable(std::string name) : name_(std::move(name)) {}

void ResultTable::add_column(const std::string& column, std::vector<double> values) {
    if (has_column(column)) throw ConfigError("duplicate column '" + column + "'");
    if (!data_.empty() && values.size() != data_.front().size()) {
        throw ConfigError("column '" + column + "' has " + std::to_string(values.size()) + " rows, table has " +
                          std::to_string(data_.front().size()));
    }
    names_.push_back(column);
    data_.push_back(std::move(values));
}

bool ResultTable::has_column(const std::string& column) const {
    return std::find(names_.begin(), names_.end(), column) != names_.end();
}

const std::vector<double>& ResultTable::column(const std::string& column) const {
    const auto it = std::find(names_.begin(), names_.end(), column);
    if (it == names_.end()) throw ConfigError("no column '" + column + "' in table " + name_);
    return data_[static_cast<std::size_t>(it - names_.begin())];
}

std::size_t ResultTable::rows() const noexcept { return data_.empty() ? 0 : data_.front().size(); }

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < names_.size(); ++c) {
        if (c) out += ',';
        out += names_[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < names_.size(); ++c) {
            if (c) out += ',';
            out += format_g17(data_[c][r]);
        }
        out += '\n';
    }
    return out;
}

std::string ResultTable::digest() const { return hex64(fnv1a64(to_csv())); }

void ResultTable::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / (name_ + ".csv"), std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / (name_ + ".csv")).string());
        out << to_csv();
    }
    json meta = {{"table", name_},
                 {"columns", names_},
                 {"rows", rows()},
                 {"csv_digest", digest()},
                 {"config_hash", provenance.config_hash},
                 {"code_version", provenance.code_version},
                 {"started_utc", provenance.started_utc},
                 {"finished_utc", provenance.finished_utc},
                 {"summary", summary}};
    std::ofstream out(dir / (name_ + ".meta.json"));
    if (!out) throw Error("cannot write " + (dir / (name_ + ".meta.json")).string());
    out << meta.dump(2) << '\n';
}

ResultTable ResultTable::read(const std::filesystem::path& dir, const std::string& name,
                              const std::string& expected_config_hash) {
    std::ifstream meta_in(dir / (name + ".meta.json"));
    if (!meta_in) throw ConfigError("missing " + (dir / (name + ".meta.json")).string());
    json meta;
    try {
        meta = json::parse(meta_in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("unreadable table metadata: ") + e.what());
    }
    const std::string stored = meta.value("config_hash", "");
    if (stored != expected_config_hash) {
        throw ConfigError("table " + name + " was produced by config " + stored + ", expected " + expected_config_hash);
    }

    std::ifstream in(dir / (name + ".csv"), std::ios::binary);
    if (!in) throw ConfigError("missing " + (dir / (name + ".csv")).string());
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
    }
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(ss, cell, ',')) {
            if (c >= cols.size()) throw ConfigError("ragged row in " + name + ".csv");
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') throw ConfigError("bad number '" + cell + "' in " + name + ".csv");
            cols[c++].push_back(v);
        }
        if (c != cols.size()) throw ConfigError("ragged row in " + name + ".csv");
    }

    ResultTable t(name);
    for (std::size_t c = 0; c < names.size(); ++c) t.add_column(names[c], std::move(cols[c]));
    if (t.digest() != meta.value("csv_digest", "")) throw ConfigError("table " + name + " does not match its digest");
    t.provenance.config_hash = stored;
    t.provenance.code_version = meta.value("code_version", "");
    t.provenance.started_utc = meta.value("started_utc", "");
    t.provenance.finished_utc = meta.value("finished_utc", "");
    if (meta.contains("summary")) t.summary = meta.at("summary").get<std::map<std::string, double>>();
    return t;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const char* code_version() noexcept { return BHL_VERSION; }

} // namespace bhl
