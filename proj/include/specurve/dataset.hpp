#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace specurve {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

struct Column {
    std::string name;
    std::vector<double> values;  // NaN marks a missing cell
};

/// Column-labelled numeric table. Immutable after construction; row identity
/// is the 0-based row position.
class Dataset {
public:
    Dataset() = default;

    /// Throws DataError on empty input, ragged columns or duplicate names, and
    /// ConfigError if `group_column` is not one of the columns.
    explicit Dataset(std::vector<Column> columns, std::optional<std::string> group_column = {});

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return columns_.size(); }

    bool has_column(const std::string& name) const noexcept;
    std::span<const double> column(const std::string& name) const;
    const std::vector<Column>& columns() const noexcept { return columns_; }
    std::vector<std::string> names() const;

    const std::optional<std::string>& group_column() const noexcept { return group_column_; }
    Dataset with_group(std::optional<std::string> group_column) const;

    bool operator==(const Dataset& other) const;

private:
    std::vector<Column> columns_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t n_rows_ = 0;
    std::optional<std::string> group_column_;
};

struct CsvOptions {
    char delimiter = ',';
    std::vector<std::string> na_markers{"", "NA", "NaN", "nan", "."};
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Writes the shortest round-trip representation of every value; missing cells are empty.
void write_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter = ',');
std::string to_csv(const Dataset& ds, char delimiter = ',');

/// How the constant term is resolved for a design.
///   automatic            - add an intercept unless a zero-variance column is already present
///   present_in_x         - the fixed array carries the constant; never add one
///   present_in_z_absent  - the constant lives in the control pool and this subset omits it; add one
///   present_in_z_present - the subset carries the constant; do not add one
enum class InterceptPolicy { automatic, present_in_x, present_in_z_absent, present_in_z_present };

inline constexpr const char* kInterceptName = "const";

struct DesignMatrix {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::vector<std::string> column_names;
    std::vector<std::size_t> rows;  // dataset row ids retained after listwise deletion
    bool has_intercept = false;

    Eigen::Index N() const noexcept { return X.rows(); }
    Eigen::Index P() const noexcept { return X.cols(); }

    /// Position of the first fixed predictor (the focal estimand).
    Eigen::Index focal_column() const noexcept { return has_intercept ? 1 : 0; }
};

/// Listwise deletion over outcome and referenced columns, intercept resolution,
/// then validation. Column order is [intercept?, x_cols..., z_subset...].
/// `outcome` is aligned with the dataset rows (NaN = missing).
DesignMatrix build_design(const Dataset& ds, std::span<const double> outcome,
                          const std::vector<std::string>& x_cols,
                          const std::vector<std::string>& z_subset,
                          InterceptPolicy policy = InterceptPolicy::automatic);

/// Subset of a design's rows (by position within the design); duplicates allowed.
DesignMatrix take_rows(const DesignMatrix& dm, std::span<const std::size_t> positions);

struct DemeanDiagnostics {
    std::size_t singleton_groups = 0;  // groups with one row (demeaned to zero)
};

/// Within-group centering of y and every non-intercept column; drops the intercept.
/// `groups` is aligned with dm's rows.
DesignMatrix demean_by_group(const DesignMatrix& dm, std::span<const double> groups,
                             DemeanDiagnostics* diagnostics = nullptr);

/// Group labels for a design's retained rows.
std::vector<double> group_labels(const Dataset& ds, const DesignMatrix& dm);

}  // namespace specurve
