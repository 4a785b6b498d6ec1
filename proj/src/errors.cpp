#include "specurve/errors.hpp"

namespace specurve {

const char* to_string(RejectReason r) noexcept {
    switch (r) {
        case RejectReason::insufficient_rows: return "insufficient rows";
        case RejectReason::empty_column: return "empty column";
        case RejectReason::collinear: return "collinear";
        case RejectReason::degenerate_outcome: return "degenerate outcome";
        case RejectReason::nonconvergence: return "nonconvergence";
    }
    return "unknown";
}

}  // namespace specurve
