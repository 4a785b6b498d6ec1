#include "specurve/dataset.hpp"

#include "specurve/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace specurve {

Dataset::Dataset(std::vector<Column> columns, std::optional<std::string> group_column)
    : columns_(std::move(columns)), group_column_(std::move(group_column)) {
    if (columns_.empty()) throw DataError("dataset has no columns");
    n_rows_ = columns_.front().values.size();
    if (n_rows_ == 0) throw DataError("dataset has no rows");
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& c = columns_[i];
        if (c.values.size() != n_rows_) {
            throw DataError("column '" + c.name + "' has " + std::to_string(c.values.size()) +
                            " rows, expected " + std::to_string(n_rows_));
        }
        if (!index_.emplace(c.name, i).second) throw DataError("duplicate column name '" + c.name + "'");
    }
    if (group_column_ && !has_column(*group_column_)) {
        throw ConfigError("group column '" + *group_column_ + "' not found");
    }
}

bool Dataset::has_column(const std::string& name) const noexcept {
    return index_.contains(name);
}

std::span<const double> Dataset::column(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown column '" + name + "'");
    return columns_[it->second].values;
}

std::vector<std::string> Dataset::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

Dataset Dataset::with_group(std::optional<std::string> group_column) const {
    return Dataset(columns_, std::move(group_column));
}

bool Dataset::operator==(const Dataset& other) const {
    if (n_rows_ != other.n_rows_ || columns_.size() != other.columns_.size()) return false;
    if (group_column_ != other.group_column_) return false;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& a = columns_[i];
        const auto& b = other.columns_[i];
        if (a.name != b.name) return false;
        for (std::size_t r = 0; r < n_rows_; ++r) {
            const double x = a.values[r];
            const double y = b.values[r];
            if (is_missing(x) != is_missing(y)) return false;
            if (!is_missing(x) && x != y) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::vector<std::string>> split_records(const std::string& text, char delim) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(record));
        record.clear();
        field_started = false;
    };
    if (n >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;  // UTF-8 BOM
    for (; i < n; ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            in_quotes = true;
            field_started = true;
        } else if (c == delim) {
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
            end_record();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw DataError("unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) end_record();
    // Trailing blank lines carry no data.
    while (!records.empty() && records.back().size() == 1 && records.back().front().empty()) {
        records.pop_back();
    }
    return records;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, const CsvOptions& options, std::size_t row,
                  const std::string& column) {
    const std::string cell = trim(raw);
    for (const auto& na : options.na_markers) {
        if (cell == na) return kMissing;
    }
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw DataError("row " + std::to_string(row) + ", column '" + column +
                        "': cannot parse '" + cell + "' as a number");
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string quote_if_needed(const std::string& s, char delim) {
    if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
    const auto records = split_records(text, options.delimiter);
    if (records.empty()) throw DataError("empty CSV input");
    const auto& header = records.front();
    std::vector<Column> columns;
    columns.reserve(header.size());
    std::unordered_set<std::string> seen;
    for (const auto& h : header) {
        const std::string name = trim(h);
        if (!seen.insert(name).second) throw DataError("duplicate header name '" + name + "'");
        columns.push_back({name, {}});
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw DataError("ragged row " + std::to_string(r) + ": " + std::to_string(rec.size()) +
                            " fields, header has " + std::to_string(header.size()));
        }
        for (std::size_t c = 0; c < rec.size(); ++c) {
            columns[c].values.push_back(parse_cell(rec[c], options, r, columns[c].name));
        }
    }
    return Dataset(std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), options);
}

std::string to_csv(const Dataset& ds, char delimiter) {
    std::string out;
    const auto& cols = ds.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out.push_back(delimiter);
        out += quote_if_needed(cols[c].name, delimiter);
    }
    out.push_back('\n');
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out.push_back(delimiter);
            const double v = cols[c].values[r];
            if (!is_missing(v)) out += format_double(v);
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << to_csv(ds, delimiter);
}

// ---------------------------------------------------------------------------
// Design matrices

namespace {

bool zero_variance(const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() == 0) return true;
    return (v.array() == v(0)).all();
}

}  // namespace

DesignMatrix build_design(const Dataset& ds, std::span<const double> outcome,
                          const std::vector<std::string>& x_cols,
                          const std::vector<std::string>& z_subset, InterceptPolicy policy) {
    if (outcome.size() != ds.n_rows()) {
        throw ConfigError("outcome length does not match the dataset");
    }
    std::vector<std::string> names;
    names.reserve(x_cols.size() + z_subset.size());
    names.insert(names.end(), x_cols.begin(), x_cols.end());
    names.insert(names.end(), z_subset.begin(), z_subset.end());

    std::vector<std::span<const double>> cols;
    cols.reserve(names.size());
    for (const auto& n : names) cols.push_back(ds.column(n));

    auto all_missing = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return is_missing(x); });
    };
    if (all_missing(outcome)) throw SpecRejected(RejectReason::empty_column, "outcome");
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (all_missing(cols[j])) throw SpecRejected(RejectReason::empty_column, names[j]);
    }

    std::span<const double> group;
    if (ds.group_column()) group = ds.column(*ds.group_column());

    DesignMatrix dm;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        bool complete = !is_missing(outcome[r]);
        for (std::size_t j = 0; complete && j < cols.size(); ++j) complete = !is_missing(cols[j][r]);
        if (complete && !group.empty()) complete = !is_missing(group[r]);
        if (complete) dm.rows.push_back(r);
    }
    const auto n = static_cast<Eigen::Index>(dm.rows.size());

    Eigen::MatrixXd body(n, static_cast<Eigen::Index>(cols.size()));
    dm.y.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::size_t r = dm.rows[static_cast<std::size_t>(i)];
        dm.y(i) = outcome[r];
        for (std::size_t j = 0; j < cols.size(); ++j) body(i, static_cast<Eigen::Index>(j)) = cols[j][r];
    }

    int constant_columns = 0;
    for (Eigen::Index j = 0; j < body.cols(); ++j) constant_columns += zero_variance(body.col(j)) ? 1 : 0;
    if (n > 0 && constant_columns > 1) {
        throw SpecRejected(RejectReason::collinear, "more than one zero-variance column");
    }

    bool add_intercept = false;
    switch (policy) {
        case InterceptPolicy::automatic: add_intercept = constant_columns == 0; break;
        case InterceptPolicy::present_in_x: add_intercept = false; break;
        case InterceptPolicy::present_in_z_absent: add_intercept = true; break;
        case InterceptPolicy::present_in_z_present: add_intercept = false; break;
    }
    if (add_intercept && constant_columns > 0) {
        throw SpecRejected(RejectReason::collinear, "intercept requested alongside a constant column");
    }

    dm.has_intercept = add_intercept;
    const Eigen::Index p = body.cols() + (add_intercept ? 1 : 0);
    dm.X.resize(n, p);
    if (add_intercept) {
        dm.X.col(0).setOnes();
        dm.X.rightCols(body.cols()) = body;
        dm.column_names.push_back(kInterceptName);
    } else {
        dm.X = body;
    }
    dm.column_names.insert(dm.column_names.end(), names.begin(), names.end());

    if (n <= p) {
        throw SpecRejected(RejectReason::insufficient_rows,
                           "N=" + std::to_string(n) + " <= P=" + std::to_string(p));
    }
    return dm;
}

DesignMatrix take_rows(const DesignMatrix& dm, std::span<const std::size_t> positions) {
    DesignMatrix out;
    const auto n = static_cast<Eigen::Index>(positions.size());
    out.y.resize(n);
    out.X.resize(n, dm.P());
    out.rows.reserve(positions.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = static_cast<Eigen::Index>(positions[static_cast<std::size_t>(i)]);
        out.y(i) = dm.y(src);
        out.X.row(i) = dm.X.row(src);
        out.rows.push_back(dm.rows[static_cast<std::size_t>(src)]);
    }
    out.column_names = dm.column_names;
    out.has_intercept = dm.has_intercept;
    return out;
}

DesignMatrix demean_by_group(const DesignMatrix& dm, std::span<const double> groups,
                             DemeanDiagnostics* diagnostics) {
    if (groups.size() != static_cast<std::size_t>(dm.N())) {
        throw ConfigError("group labels are not aligned with the design rows");
    }
    std::map<double, std::vector<Eigen::Index>> members;
    for (Eigen::Index i = 0; i < dm.N(); ++i) members[groups[static_cast<std::size_t>(i)]].push_back(i);

    const Eigen::Index first = dm.has_intercept ? 1 : 0;
    DesignMatrix out;
    out.rows = dm.rows;
    out.has_intercept = false;
    out.column_names.assign(dm.column_names.begin() + first, dm.column_names.end());
    out.y = dm.y;
    out.X = dm.X.rightCols(dm.P() - first);

    std::size_t singletons = 0;
    for (const auto& [label, idx] : members) {
        if (idx.size() == 1) ++singletons;
        const double inv = 1.0 / static_cast<double>(idx.size());
        double ymean = 0.0;
        for (auto i : idx) ymean += dm.y(i);
        ymean *= inv;
        for (auto i : idx) out.y(i) -= ymean;
        for (Eigen::Index j = 0; j < out.X.cols(); ++j) {
            double m = 0.0;
            for (auto i : idx) m += out.X(i, j);
            m *= inv;
            for (auto i : idx) out.X(i, j) -= m;
        }
    }
    if (diagnostics) diagnostics->singleton_groups = singletons;
    return out;
}

std::vector<double> group_labels(const Dataset& ds, const DesignMatrix& dm) {
    if (!ds.group_column()) throw ConfigError("dataset has no group column");
    const auto g = ds.column(*ds.group_column());
    std::vector<double> out;
    out.reserve(dm.rows.size());
    for (auto r : dm.rows) out.push_back(g[r]);
    return out;
}

}  // namespace specurve
