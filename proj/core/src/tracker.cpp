#include "ggiw/tracker.hpp"

#include "ggiw/error.hpp"

namespace ggiw {

Tracker::Tracker(TrackerConfig config, std::vector<GgiwState> initial)
    : config_(std::move(config)), states_(std::move(initial)) {
    if (states_.empty()) throw ConfigError("tracker needs at least one target");
    config_.model.validate();
    for (const auto& s : states_) s.validate();
}

UpdateResult Tracker::step(const MeasurementFrame& frame) {
    std::vector<GgiwState> predicted;
    predicted.reserve(states_.size());
    for (const auto& s : states_) predicted.push_back(predict(s, config_.model));
    UpdateResult result = measurement_update(predicted, frame, config_);
    states_ = result.states;
    return result;
}

}  // namespace ggiw
