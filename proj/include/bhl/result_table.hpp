#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace bhl {

struct Provenance {
    std::string config_hash;
    std::string code_version;
    std::string started_utc;
    std::string finished_utc;
};

/// Named numeric columns of equal length plus provenance.
///
/// The CSV holds only the numbers (17 significant digits, one header row) so
/// reruns are byte-identical; timestamps and hashes go in the meta file.
class ResultTable {
public:
    explicit ResultTable(std::string name = {});

    const std::string& name() const noexcept { return name_; }
    void add_column(const std::string& column, std::vector<double> values);
    const std::vector<double>& column(const std::string& column) const;
    bool has_column(const std::string& column) const;
    const std::vector<std::string>& column_names() const noexcept { return names_; }
    std::size_t rows() const noexcept;

    /// Scalars that describe the table as a whole (fitted slopes, slacks).
    std::map<std::string, double> summary;
    Provenance provenance;

    std::string to_csv() const;
    /// Hex FNV-1a of to_csv().
    std::string digest() const;

    /// Writes <dir>/<name>.csv and <dir>/<name>.meta.json.
    void write(const std::filesystem::path& dir) const;

    /// Reads a table back. Throws ConfigError if the meta file's config hash
    /// differs from expected_config_hash or the CSV no longer matches its digest.
    static ResultTable read(const std::filesystem::path& dir, const std::string& name,
                            const std::string& expected_config_hash);

private:
    std::string name_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> data_;
};

/// Formats v with 17 significant digits.
std::string format_g17(double v);

/// Current UTC time as ISO 8601.
std::string utc_now();

/// Library version string.
const char* code_version() noexcept;

} // namespace bhl
