#include "holonomy/table.hpp"

#include <cstdio>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace holonomy {

void ResultTable::add_row(std::vector<Value> row) {
    if (row.size() != columns_.size())
        throw std::invalid_argument("ResultTable: row width does not match columns");
    rows_.push_back(std::move(row));
}

void ResultTable::set_provenance(std::string config_hash, std::string version) {
    config_hash_ = std::move(config_hash);
    version_ = std::move(version);
}

void ResultTable::to_csv(std::ostream& os, bool with_timestamp) const {
    if (!config_hash_.empty())
        os << "# provenance: config_hash=" << config_hash_ << " version=" << version_ << "\n";
    if (with_timestamp) {
        char stamp[64];
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        os << "# generated: " << stamp << "\n";
    }
    for (std::size_t c = 0; c < columns_.size(); ++c)
        os << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::holds_alternative<double>(row[c]))
                os << format_double(std::get<double>(row[c]));
            else if (std::holds_alternative<std::int64_t>(row[c]))
                os << std::get<std::int64_t>(row[c]);
            else
                os << std::get<std::string>(row[c]);
            os << (c + 1 < row.size() ? "," : "\n");
        }
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace holonomy
