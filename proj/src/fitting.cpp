#include "specurve/fitting.hpp"

#include "specurve/errors.hpp"

namespace specurve {

FitResult fit_design(const DesignMatrix& dm, Estimator estimator) {
    return estimator == Estimator::ols ? ols_fit(dm) : logit_fit(dm);
}

PreparedSpec::PreparedSpec(const Dataset& ds, std::span<const double> outcome, const SpecSpace& space,
                           const Specification& spec, bool fixed_effects)
    : estimator_(space.estimator), fixed_effects_(fixed_effects) {
    if (fixed_effects && !ds.group_column()) throw ConfigError("fixed effects need a group column");
    std::vector<std::string> x_cols = space.x_cols;
    raw_ = build_design(ds, outcome, x_cols, spec.z_subset, InterceptPolicy::automatic);
    position_.assign(ds.n_rows(), -1);
    for (std::size_t i = 0; i < raw_.rows.size(); ++i) position_[raw_.rows[i]] = static_cast<std::int64_t>(i);
    if (fixed_effects_) {
        groups_ = group_labels(ds, raw_);
        DemeanDiagnostics diag;
        design_ = demean_by_group(raw_, groups_, &diag);
        singleton_groups_ = diag.singleton_groups;
        if (design_.N() <= design_.P()) {
            throw SpecRejected(RejectReason::insufficient_rows, "too few rows after demeaning");
        }
    } else {
        design_ = raw_;
    }
}

FitResult PreparedSpec::fit() const {
    return fit_design(design_, estimator_);
}

std::vector<std::size_t> PreparedSpec::positions_of(std::span<const std::size_t> dataset_rows) const {
    std::vector<std::size_t> pos;
    pos.reserve(dataset_rows.size());
    for (auto r : dataset_rows) {
        const auto p = position_[r];
        if (p >= 0) pos.push_back(static_cast<std::size_t>(p));
    }
    return pos;
}

std::optional<PreparedSpec::Focal> PreparedSpec::refit_focal(std::span<const std::size_t> dataset_rows,
                                                             std::optional<double> null_shift) const {
    const auto pos = positions_of(dataset_rows);
    DesignMatrix dm = take_rows(raw_, pos);
    const Eigen::Index focal_raw = raw_.focal_column();
    Eigen::VectorXd offset;
    if (null_shift) {
        if (estimator_ == Estimator::ols) {
            dm.y -= *null_shift * dm.X.col(focal_raw);
        } else {
            offset = -*null_shift * dm.X.col(focal_raw);
        }
    }
    if (fixed_effects_) {
        std::vector<double> g;
        g.reserve(pos.size());
        for (auto p : pos) g.push_back(groups_[p]);
        dm = demean_by_group(dm, g);
    }
    const Eigen::Index focal = dm.focal_column();
    if (estimator_ == Estimator::ols) {
        const auto core = ols_core(dm.X, dm.y, focal);
        if (!core) return std::nullopt;
        return Focal{core->beta(focal), core->focal_p};
    }
    try {
        LogitOptions opt;
        if (offset.size() > 0) opt.offset = &offset;
        const auto fit = logit_fit(dm, opt);
        return Focal{fit.beta(focal), fit.pvalues(focal)};
    } catch (const SpecRejected&) {
        return std::nullopt;
    }
}

}  // namespace specurve
