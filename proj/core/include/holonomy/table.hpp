#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace holonomy {

/// Tagged tabular output. Every row carries the full parameter tuple that
/// produced it, so CSV files are self-describing.
class ResultTable {
public:
    using Value = std::variant<double, std::int64_t, std::string>;

    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t row_count() const { return rows_.size(); }
    const std::vector<Value>& row(std::size_t i) const { return rows_[i]; }

    void add_row(std::vector<Value> row);
    void set_provenance(std::string config_hash, std::string version);

    /// Commented provenance header, then the column header, then rows.
    /// The timestamp lives on its own `# generated:` line so that reruns
    /// produce byte-identical bodies.
    void to_csv(std::ostream& os, bool with_timestamp = true) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Value>> rows_;
    std::string config_hash_;
    std::string version_;
};

std::string format_double(double v);  // %.12g, locale-independent

/// FNV-1a over a string; used to fingerprint canonicalized configs.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace holonomy
