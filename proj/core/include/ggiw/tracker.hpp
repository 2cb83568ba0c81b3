#pragma once

#include <vector>

#include "ggiw/vb_update.hpp"

namespace ggiw {

/// Fixed-cardinality multi-target tracker: time update then measurement
/// update per scan. Target indices never change.
class Tracker {
public:
    Tracker(TrackerConfig config, std::vector<GgiwState> initial);

    [[nodiscard]] const std::vector<GgiwState>& states() const { return states_; }
    [[nodiscard]] const TrackerConfig& config() const { return config_; }

    /// Predicts all targets one step and updates them with `frame`.
    UpdateResult step(const MeasurementFrame& frame);

private:
    TrackerConfig config_;
    std::vector<GgiwState> states_;
};

}  // namespace ggiw
