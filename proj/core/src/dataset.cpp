#include "kwle/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kwle/errors.hpp"

namespace kwle {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

}  // namespace

LossDataset load_csv(const std::string& path, const ColumnRef& column, HeaderMode header) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_csv: cannot open '" + path + "'");

    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line no, fields)
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        rows.emplace_back(lineno, split_fields(line));
    }
    if (rows.empty()) throw ParseError("load_csv: '" + path + "' contains no data");

    const std::size_t ncols = rows.front().second.size();
    for (const auto& [ln, fields] : rows)
        if (fields.size() != ncols)
            throw ParseError("load_csv: line " + std::to_string(ln) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(ncols) +
                             " (thousands separators are not supported)");

    // column resolution and header detection
    std::size_t col = column.index;
    bool has_header = header == HeaderMode::yes;
    if (column.name) {
        const auto& head = rows.front().second;
        auto it = std::find(head.begin(), head.end(), *column.name);
        if (it == head.end())
            throw ParseError("load_csv: no column named '" + *column.name + "' in '" + path + "'");
        col = static_cast<std::size_t>(it - head.begin());
        has_header = true;
    } else {
        if (col >= ncols)
            throw ParseError("load_csv: column index " + std::to_string(col) +
                             " out of range; file has " + std::to_string(ncols) + " columns");
        if (header == HeaderMode::auto_detect) {
            double probe;
            has_header = !parse_number(rows.front().second[col], probe);
        }
    }

    LossDataset data;
    data.source = path;
    data.values.reserve(rows.size());
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        const auto& [ln, fields] = rows[r];
        double v;
        if (!parse_number(fields[col], v))
            throw ParseError("load_csv: line " + std::to_string(ln) + ": '" + fields[col] +
                             "' is not a number");
        if (!(v > 0.0))
            throw ParseError("load_csv: line " + std::to_string(ln) +
                             ": losses must be positive, got " + fields[col]);
        data.values.push_back(v);
    }
    if (data.values.empty())
        throw ParseError("load_csv: '" + path + "' has a header but no data rows");
    return data;
}

LossDataset replace_max(const LossDataset& data, double new_value) {
    if (!(new_value > 0.0))
        throw std::domain_error("replace_max: replacement value must be positive");
    LossDataset out = data;
    const auto it = std::max_element(out.values.begin(), out.values.end());
    const std::size_t idx = static_cast<std::size_t>(it - out.values.begin());
    out.modification = LossDataset::Modification{idx, *it, new_value};
    out.values[idx] = new_value;
    return out;
}

}  // namespace kwle
