#include "specurve/spec_space.hpp"

#include "specurve/errors.hpp"
#include "specurve/random.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace specurve {

const char* to_string(Estimator e) noexcept {
    return e == Estimator::ols ? "ols" : "logistic";
}

Estimator parse_estimator(const std::string& s) {
    if (s == "ols") return Estimator::ols;
    if (s == "logistic" || s == "logit") return Estimator::logistic;
    throw ConfigError("unknown estimator '" + s + "' (expected ols or logistic)");
}

std::vector<std::vector<std::size_t>> lexicographic_subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> current;
    // Depth-first walk: every prefix-extension is emitted before the next sibling.
    auto walk = [&](auto&& self, std::size_t start) -> void {
        for (std::size_t i = start; i < n; ++i) {
            current.push_back(i);
            out.push_back(current);
            self(self, i + 1);
            current.pop_back();
        }
    };
    walk(walk, 0);
    return out;
}

std::vector<std::string> subset_from_mask(const std::vector<std::string>& pool, std::uint64_t mask) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) out.push_back(pool[i]);
    }
    return out;
}

namespace {

SpecSpace skeleton(const std::vector<std::string>& y_cols, const std::vector<std::string>& x_cols,
                   const std::vector<std::string>& z_pool, OutcomeMode mode, Estimator estimator) {
    if (y_cols.empty()) throw ConfigError("at least one dependent variable is required");
    if (x_cols.empty()) throw ConfigError("at least one fixed predictor is required");
    if (z_pool.size() >= 63) throw ConfigError("control pool too large (max 62 candidates)");
    std::unordered_set<std::string> seen;
    auto claim = [&](const std::vector<std::string>& cols, const char* role) {
        for (const auto& c : cols) {
            if (!seen.insert(c).second) {
                throw ConfigError("column '" + c + "' is used more than once (" + role + ")");
            }
        }
    };
    claim(y_cols, "y");
    claim(x_cols, "x");
    claim(z_pool, "controls");
    if (mode == OutcomeMode::single_y && y_cols.size() != 1) {
        throw ConfigError("single-y mode takes exactly one dependent variable");
    }
    if (mode == OutcomeMode::multi_y && estimator == Estimator::logistic) {
        throw ConfigError("composite outcomes are continuous; multi-y mode requires the ols estimator");
    }

    SpecSpace space;
    space.x_cols = x_cols;
    space.z_pool = z_pool;
    space.estimator = estimator;
    space.mode = mode;
    if (mode == OutcomeMode::single_y) {
        space.y_options.push_back(y_cols);
    } else {
        for (const auto& idx : lexicographic_subsets(y_cols.size())) {
            std::vector<std::string> opt;
            for (auto i : idx) opt.push_back(y_cols[i]);
            space.y_options.push_back(std::move(opt));
        }
    }
    return space;
}

void fill_specs(SpecSpace& space, const std::vector<std::size_t>& y_opts,
                const std::vector<std::uint64_t>& masks) {
    space.specs.clear();
    space.specs.reserve(y_opts.size() * masks.size());
    for (auto yo : y_opts) {
        for (auto mask : masks) {
            Specification s;
            s.index = space.specs.size();
            s.y_option = yo;
            s.z_mask = mask;
            s.y_subset = space.y_options[yo];
            s.z_subset = subset_from_mask(space.z_pool, mask);
            space.specs.push_back(std::move(s));
        }
    }
}

}  // namespace

SpecSpace enumerate(const std::vector<std::string>& y_cols, const std::vector<std::string>& x_cols,
                    const std::vector<std::string>& z_pool, OutcomeMode mode, Estimator estimator) {
    SpecSpace space = skeleton(y_cols, x_cols, z_pool, mode, estimator);
    const std::uint64_t n_masks = std::uint64_t{1} << z_pool.size();
    if (n_masks * space.y_options.size() > kMaxMaterializedSpecs) {
        throw ConfigError("specification space has " +
                          std::to_string(n_masks * space.y_options.size()) +
                          " members; subsample it (--sample-z / --sample-y)");
    }
    std::vector<std::size_t> y_opts(space.y_options.size());
    for (std::size_t i = 0; i < y_opts.size(); ++i) y_opts[i] = i;
    std::vector<std::uint64_t> masks(n_masks);
    for (std::uint64_t m = 0; m < n_masks; ++m) masks[m] = m;
    fill_specs(space, y_opts, masks);
    return space;
}

SpecSpace subsample(const SpecSpace& space, std::size_t m_y, std::uint64_t m_z, std::uint64_t seed) {
    const std::uint64_t n_masks = std::uint64_t{1} << space.z_pool.size();
    if (m_y > space.y_options.size()) {
        throw ConfigError("cannot sample " + std::to_string(m_y) + " of " +
                          std::to_string(space.y_options.size()) + " outcome options");
    }
    if (m_z > n_masks) {
        throw ConfigError("cannot sample " + std::to_string(m_z) + " of " + std::to_string(n_masks) +
                          " control subsets");
    }
    if (m_y == 0 || m_z == 0) throw ConfigError("sample sizes must be positive");
    if (static_cast<std::uint64_t>(m_y) * m_z > kMaxMaterializedSpecs) {
        throw ConfigError("sampled space is too large to materialize");
    }
    Rng ry(derive_seed(seed, Stream::subsample_y));
    Rng rz(derive_seed(seed, Stream::subsample_z));
    const auto ys = sample_without_replacement(space.y_options.size(), m_y, ry);
    const auto masks = sample_without_replacement(n_masks, m_z, rz);

    SpecSpace out;
    out.y_options = space.y_options;
    out.x_cols = space.x_cols;
    out.z_pool = space.z_pool;
    out.estimator = space.estimator;
    out.mode = space.mode;
    std::vector<std::size_t> y_opts(ys.begin(), ys.end());
    fill_specs(out, y_opts, masks);
    return out;
}

SpecSpace enumerate_sampled(const std::vector<std::string>& y_cols,
                            const std::vector<std::string>& x_cols,
                            const std::vector<std::string>& z_pool, OutcomeMode mode,
                            Estimator estimator, std::size_t m_y, std::uint64_t m_z,
                            std::uint64_t seed) {
    return subsample(skeleton(y_cols, x_cols, z_pool, mode, estimator), m_y, m_z, seed);
}

std::vector<double> compose(const Dataset& ds, const std::vector<std::string>& y_subset) {
    if (y_subset.empty()) throw ConfigError("empty outcome subset");
    const std::size_t n = ds.n_rows();
    std::vector<double> out(n, 0.0);
    for (const auto& name : y_subset) {
        const auto col = ds.column(name);
        double sum = 0.0;
        std::size_t count = 0;
        for (double v : col) {
            if (!is_missing(v)) {
                sum += v;
                ++count;
            }
        }
        if (count == 0) throw SpecRejected(RejectReason::empty_column, name);
        const double mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (double v : col) {
            if (!is_missing(v)) ss += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(count));
        if (!(sd > 0.0)) throw SpecRejected(RejectReason::degenerate_outcome, name + " has zero variance");
        for (std::size_t r = 0; r < n; ++r) {
            out[r] += is_missing(col[r]) ? kMissing : (col[r] - mean) / sd;
        }
    }
    const double k = static_cast<double>(y_subset.size());
    for (auto& v : out) v /= k;
    return out;
}

std::string spec_label(const SpecSpace& space, const Specification& spec) {
    std::string z;
    for (std::size_t i = 0; i < spec.z_subset.size(); ++i) {
        if (i) z += ",";
        z += spec.z_subset[i];
    }
    if (space.mode == OutcomeMode::single_y) return z;
    std::string y;
    for (std::size_t i = 0; i < spec.y_subset.size(); ++i) {
        if (i) y += "+";
        y += spec.y_subset[i];
    }
    return y + " | " + z;
}

}  // namespace specurve
