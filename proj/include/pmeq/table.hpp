#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "extended_real.hpp"

namespace pmeq {

// One output cell: a number (printed with 17 significant digits) or a
// string token such as "inf", "-inf" or a classification label.
using Cell = std::variant<double, std::string>;

struct Column {
    std::string name;
    std::string unit;
    std::vector<Cell> cells;
};

// Column-oriented table for the CSV writers. Header cells carry the unit as
// "name (unit)"; rows are comma separated with LF line endings.
struct Table {
    std::vector<Column> columns;

    void write_csv(std::ostream& os) const {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) os << ',';
            os << columns[c].name << " (" << columns[c].unit << ')';
        }
        os << '\n';
        std::size_t rows = 0;
        for (const auto& col : columns) rows = std::max(rows, col.cells.size());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < columns.size(); ++c) {
                if (c) os << ',';
                if (r < columns[c].cells.size()) {
                    const Cell& cell = columns[c].cells[r];
                    if (std::holds_alternative<double>(cell)) {
                        os << format_double(std::get<double>(cell));
                    } else {
                        os << std::get<std::string>(cell);
                    }
                }
            }
            os << '\n';
        }
    }
};

inline Cell cell_of(const ExtendedReal& v) {
    if (v.is_finite()) return Cell{v.value()};
    return Cell{v.str()};
}

}  // namespace pmeq
