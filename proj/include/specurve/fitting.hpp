#pragma once

#include "specurve/dataset.hpp"
#include "specurve/estimators.hpp"
#include "specurve/spec_space.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace specurve {

/// Everything needed to (re)fit one specification: the full-sample design
/// before and after fixed-effects demeaning plus a map from dataset rows to
/// design positions, so resamples over dataset row ids can be applied.
class PreparedSpec {
public:
    /// Builds the design for `spec`. `outcome` is the (possibly composite)
    /// outcome aligned with dataset rows. When `fixed_effects` is set the
    /// dataset's group column drives within-group demeaning.
    /// Throws SpecRejected if the full-sample design is unusable.
    PreparedSpec(const Dataset& ds, std::span<const double> outcome, const SpecSpace& space,
                 const Specification& spec, bool fixed_effects);

    const DesignMatrix& design() const noexcept { return design_; }
    const DesignMatrix& raw() const noexcept { return raw_; }
    Estimator estimator() const noexcept { return estimator_; }
    bool fixed_effects() const noexcept { return fixed_effects_; }
    std::size_t singleton_groups() const noexcept { return singleton_groups_; }

    /// Full-sample fit of design().
    FitResult fit() const;

    struct Focal {
        double estimate;
        double pvalue;
    };

    /// Refit on a resample given as dataset row ids (duplicates allowed). Rows
    /// incomplete for this spec are skipped. `null_shift` imposes beta_1 = 0 by
    /// removing shift * x_1 from the outcome (OLS) or as an offset (logistic).
    /// Returns nullopt if the resampled design cannot be fitted.
    std::optional<Focal> refit_focal(std::span<const std::size_t> dataset_rows,
                                     std::optional<double> null_shift = {}) const;

    /// Design positions of the dataset rows that survive listwise deletion.
    std::vector<std::size_t> positions_of(std::span<const std::size_t> dataset_rows) const;

private:
    DesignMatrix raw_;
    DesignMatrix design_;
    std::vector<double> groups_;
    std::vector<std::int64_t> position_;  // dataset row -> raw_ position or -1
    Estimator estimator_ = Estimator::ols;
    bool fixed_effects_ = false;
    std::size_t singleton_groups_ = 0;
};

/// Fits a design with the given estimator.
FitResult fit_design(const DesignMatrix& dm, Estimator estimator);

}  // namespace specurve
