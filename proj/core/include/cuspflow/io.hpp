#pragma once

#include "cuspflow/bigint.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cuspflow::io {

/// Row-oriented table with a fixed header, rendered as CSV or as a JSON array
/// of objects with identical field names.  All cells are preformatted text.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<std::string> cells);
    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;

    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string json_escape(const std::string& s);

}  // namespace cuspflow::io
