#include "cuspflow/io.hpp"

#include <stdexcept>

namespace cuspflow::io {

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("Table: row width mismatch");
    rows_.push_back(std::move(cells));
}

void Table::write_csv(std::ostream& out) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
    for (const auto& row : rows_)
        for (size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

// Cells that look numeric ("p/q" stays a string) are emitted bare.
static bool plain_number(const std::string& s) {
    if (s.empty()) return false;
    bool digit = false;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if ((c == '-' || c == '+') && i == 0) continue;
        if (c >= '0' && c <= '9') { digit = true; continue; }
        if (c == '.' || c == 'e' || c == 'E' || c == '-' || c == '+') continue;
        return false;
    }
    return digit;
}

void Table::write_json(std::ostream& out) const {
    out << "[";
    for (size_t r = 0; r < rows_.size(); ++r) {
        out << (r ? ",\n " : "\n ") << "{";
        for (size_t i = 0; i < columns_.size(); ++i) {
            out << (i ? "," : "") << "\"" << json_escape(columns_[i]) << "\":";
            const std::string& cell = rows_[r][i];
            if (plain_number(cell)) out << cell;
            else out << "\"" << json_escape(cell) << "\"";
        }
        out << "}";
    }
    out << "\n]\n";
}

}  // namespace cuspflow::io
