#ifndef KWLE_DATASET_HPP
#define KWLE_DATASET_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kwle {

enum class HeaderMode { auto_detect, yes, no };

/// Which CSV column holds the losses: by name (requires a header) or by
/// zero-based index. Defaults to index 0.
struct ColumnRef {
    std::optional<std::string> name;
    std::size_t index = 0;
};

/// Positive losses in file order, with provenance and an optional record of
/// a replace-max perturbation.
struct LossDataset {
    struct Modification {
        std::size_t index;
        double old_value;
        double new_value;
    };

    std::vector<double> values;
    std::string source;
    std::optional<Modification> modification;

    std::size_t n() const { return values.size(); }
};

/// Loads one numeric column from a CSV file. Rows whose field count differs
/// from the first row are rejected (this also catches comma thousands
/// separators). Throws ParseError naming the offending line.
LossDataset load_csv(const std::string& path, const ColumnRef& column = {},
                     HeaderMode header = HeaderMode::auto_detect);

/// Replaces exactly one occurrence of the maximum (the first in file order)
/// with new_value and records the modification.
LossDataset replace_max(const LossDataset& data, double new_value);

}  // namespace kwle

#endif  // KWLE_DATASET_HPP
