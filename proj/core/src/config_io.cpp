#include "ggiw/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ggiw/error.hpp"

namespace ggiw {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <int R, int C>
void read_matrix(const json& j, const char* key, Eigen::Matrix<double, R, C>& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& a = j.at(key);
    const std::string path = where + "." + key;
    try {
        if constexpr (C == 1) {
            if (!a.is_array() || a.size() != R) throw ConfigError(path + ": expected " + std::to_string(R) + " numbers");
            for (int i = 0; i < R; ++i) out(i) = a.at(static_cast<std::size_t>(i)).get<double>();
        } else {
            if (!a.is_array() || a.size() != R) throw ConfigError(path + ": expected " + std::to_string(R) + " rows");
            for (int i = 0; i < R; ++i) {
                const json& row = a.at(static_cast<std::size_t>(i));
                if (!row.is_array() || row.size() != C) throw ConfigError(path + ": bad row length");
                for (int k = 0; k < C; ++k) out(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

template <int R>
json vec_json(const Eigen::Matrix<double, R, 1>& v) {
    json a = json::array();
    for (int i = 0; i < R; ++i) a.push_back(v(i));
    return a;
}

template <int R, int C>
json mat_json(const Eigen::Matrix<double, R, C>& m) {
    json a = json::array();
    for (int i = 0; i < R; ++i) {
        json row = json::array();
        for (int k = 0; k < C; ++k) row.push_back(m(i, k));
        a.push_back(row);
    }
    return a;
}

void parse_scenario(const json& j, ScenarioConfig& s) {
    const std::string w = "scenario";
    check_keys(j, {"duration_steps", "dt", "targets", "lambda_t", "lambda_c", "region", "detection_prob",
                   "spread_scale", "measurement_noise", "spread_law", "seed"},
               w);
    read(j, "duration_steps", s.duration_steps, w);
    read(j, "dt", s.dt, w);
    read(j, "lambda_t", s.lambda_t, w);
    read(j, "lambda_c", s.lambda_c, w);
    read(j, "detection_prob", s.detection_prob, w);
    read(j, "spread_scale", s.spread_scale, w);
    read(j, "seed", s.seed, w);
    read_matrix(j, "measurement_noise", s.measurement_noise, w);
    if (j.contains("spread_law")) {
        std::string law;
        read(j, "spread_law", law, w);
        s.spread_law = parse_spread_law(law);
    }
    if (j.contains("region")) {
        const json& r = j.at("region");
        check_keys(r, {"min", "max"}, w + ".region");
        read_matrix(r, "min", s.region.min, w + ".region");
        read_matrix(r, "max", s.region.max, w + ".region");
    }
    if (j.contains("targets")) {
        const json& ts = j.at("targets");
        if (!ts.is_array()) throw ConfigError("scenario.targets: expected an array");
        s.targets.clear();
        for (const auto& t : ts) {
            const std::string tw = w + ".targets[]";
            check_keys(t, {"initial_position", "velocity", "axis_lengths", "orientation"}, tw);
            TargetSpec spec;
            read_matrix(t, "initial_position", spec.initial_position, tw);
            read_matrix(t, "velocity", spec.velocity, tw);
            read_matrix(t, "axis_lengths", spec.axis_lengths, tw);
            read(t, "orientation", spec.orientation, tw);
            s.targets.push_back(spec);
        }
    }
}

GgiwState parse_state(const json& j, const std::string& w) {
    check_keys(j, {"m", "P", "v", "V", "alpha", "beta"}, w);
    GgiwState s;
    read_matrix(j, "m", s.m, w);
    read_matrix(j, "P", s.P, w);
    read(j, "v", s.v, w);
    read_matrix(j, "V", s.V, w);
    read(j, "alpha", s.alpha, w);
    read(j, "beta", s.beta, w);
    return s;
}

void parse_tracker(const json& j, TrackerSettings& t) {
    const std::string w = "tracker";
    check_keys(j, {"scheme", "n_vb", "tau", "forgetting", "distortion_scale", "evolution", "process_noise_diag",
                   "measurement_noise", "gate", "event_cap", "cluster", "prior", "initial_states"},
               w);
    if (j.contains("scheme")) {
        std::string name;
        read(j, "scheme", name, w);
        t.vb.scheme = parse_scheme(name);
    }
    read(j, "n_vb", t.vb.n_vb, w);
    read(j, "tau", t.tau, w);
    read(j, "forgetting", t.forgetting, w);
    read(j, "distortion_scale", t.distortion_scale, w);
    if (j.contains("evolution")) {
        read_matrix(j, "evolution", t.evolution, w);
    } else {
        t.evolution = Mat2::Identity() / std::sqrt(t.tau);
    }
    read_matrix(j, "process_noise_diag", t.process_noise_diag, w);
    read_matrix(j, "measurement_noise", t.measurement_noise, w);
    read(j, "gate", t.gate, w);
    read(j, "event_cap", t.event_cap, w);
    if (j.contains("cluster")) {
        const json& c = j.at("cluster");
        check_keys(c, {"epsilons", "min_pts", "events_per_epsilon", "max_events"}, w + ".cluster");
        read(c, "epsilons", t.cluster.epsilons, w + ".cluster");
        read(c, "min_pts", t.cluster.min_pts, w + ".cluster");
        read(c, "events_per_epsilon", t.cluster.events_per_epsilon, w + ".cluster");
        read(c, "max_events", t.cluster.max_events, w + ".cluster");
    }
    if (j.contains("prior")) {
        const json& p = j.at("prior");
        check_keys(p, {"P0_diag", "v", "V", "alpha", "beta"}, w + ".prior");
        read_matrix(p, "P0_diag", t.prior.P0_diag, w + ".prior");
        read(p, "v", t.prior.v, w + ".prior");
        read_matrix(p, "V", t.prior.V, w + ".prior");
        read(p, "alpha", t.prior.alpha, w + ".prior");
        read(p, "beta", t.prior.beta, w + ".prior");
    }
    if (j.contains("initial_states")) {
        const json& a = j.at("initial_states");
        if (!a.is_array()) throw ConfigError("tracker.initial_states: expected an array");
        t.initial_states.clear();
        for (const auto& s : a) t.initial_states.push_back(parse_state(s, w + ".initial_states[]"));
    }
}

json state_json(const GgiwState& s) {
    return {{"m", vec_json(s.m)}, {"P", mat_json(s.P)}, {"v", s.v},
            {"V", mat_json(s.V)}, {"alpha", s.alpha}, {"beta", s.beta}};
}

}  // namespace

void ExperimentConfig::validate() const {
    scenario.validate();
    if (scenario.targets.empty()) throw ConfigError("scenario: at least one target is required");
    if (mc_runs < 1) throw ConfigError("mc_runs must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (saved_runs < 0) throw ConfigError("saved_runs must be >= 0");
    if (tracker.vb.n_vb < 1) throw ConfigError("tracker.n_vb must be >= 1");
    if (!(tracker.gate > 0.0)) throw ConfigError("tracker.gate must be positive");
    if (tracker.cluster.epsilons.empty()) throw ConfigError("tracker.cluster.epsilons must not be empty");
    for (double e : tracker.cluster.epsilons) {
        if (!(e > 0.0)) throw ConfigError("tracker.cluster.epsilons must be positive");
    }
    if (tracker.cluster.min_pts < 1) throw ConfigError("tracker.cluster.min_pts must be >= 1");
    if (tracker.cluster.events_per_epsilon < 1) throw ConfigError("tracker.cluster.events_per_epsilon must be >= 1");
    if (!tracker.initial_states.empty() && tracker.initial_states.size() != scenario.targets.size()) {
        throw ConfigError("tracker.initial_states must match the number of scenario targets");
    }
    try {
        make_tracker_config(*this).model.validate();
        for (const auto& s : tracker.initial_states) s.validate();
        GgiwState probe;
        probe.P = tracker.prior.P0_diag.asDiagonal();
        probe.v = tracker.prior.v;
        probe.V = tracker.prior.V;
        probe.alpha = tracker.prior.alpha;
        probe.beta = tracker.prior.beta;
        probe.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("tracker: ") + e.what());
    }
}

ExperimentConfig default_experiment() { return ExperimentConfig{}; }

ExperimentConfig experiment_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c = default_experiment();
    check_keys(j, {"scenario", "tracker", "mc_runs", "workers", "output_dir", "saved_runs"}, "config");
    if (j.contains("scenario")) parse_scenario(j.at("scenario"), c.scenario);
    if (j.contains("tracker")) parse_tracker(j.at("tracker"), c.tracker);
    read(j, "mc_runs", c.mc_runs, "config");
    read(j, "workers", c.workers, "config");
    read(j, "output_dir", c.output_dir, "config");
    read(j, "saved_runs", c.saved_runs, "config");
    c.validate();
    return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return experiment_from_json(ss.str());
}

std::string experiment_to_json(const ExperimentConfig& c) {
    const auto& s = c.scenario;
    json targets = json::array();
    for (const auto& t : s.targets) {
        targets.push_back({{"initial_position", vec_json(t.initial_position)},
                           {"velocity", vec_json(t.velocity)},
                           {"axis_lengths", vec_json(t.axis_lengths)},
                           {"orientation", t.orientation}});
    }
    const auto& t = c.tracker;
    json states = json::array();
    for (const auto& st : t.initial_states) states.push_back(state_json(st));
    json j = {
        {"scenario",
         {{"duration_steps", s.duration_steps},
          {"dt", s.dt},
          {"targets", targets},
          {"lambda_t", s.lambda_t},
          {"lambda_c", s.lambda_c},
          {"region", {{"min", vec_json(s.region.min)}, {"max", vec_json(s.region.max)}}},
          {"detection_prob", s.detection_prob},
          {"spread_scale", s.spread_scale},
          {"measurement_noise", mat_json(s.measurement_noise)},
          {"spread_law", std::string(to_string(s.spread_law))},
          {"seed", s.seed}}},
        {"tracker",
         {{"scheme", std::string(to_string(t.vb.scheme))},
          {"n_vb", t.vb.n_vb},
          {"tau", t.tau},
          {"forgetting", t.forgetting},
          {"distortion_scale", t.distortion_scale},
          {"evolution", mat_json(t.evolution)},
          {"process_noise_diag", vec_json(t.process_noise_diag)},
          {"measurement_noise", mat_json(t.measurement_noise)},
          {"gate", t.gate},
          {"event_cap", t.event_cap},
          {"cluster",
           {{"epsilons", t.cluster.epsilons},
            {"min_pts", t.cluster.min_pts},
            {"events_per_epsilon", t.cluster.events_per_epsilon},
            {"max_events", t.cluster.max_events}}},
          {"prior",
           {{"P0_diag", vec_json(t.prior.P0_diag)},
            {"v", t.prior.v},
            {"V", mat_json(t.prior.V)},
            {"alpha", t.prior.alpha},
            {"beta", t.prior.beta}}},
          {"initial_states", states}}},
        {"mc_runs", c.mc_runs},
        {"workers", c.workers},
        {"output_dir", c.output_dir},
        {"saved_runs", c.saved_runs},
    };
    return j.dump(2) + "\n";
}

TrackerConfig make_tracker_config(const ExperimentConfig& c) {
    const auto& t = c.tracker;
    TrackerConfig out;
    out.model = MotionModel::constant_velocity(c.scenario.dt, t.process_noise_diag, t.measurement_noise, t.tau,
                                               t.forgetting, t.distortion_scale);
    out.model.evolution = t.evolution;
    out.clutter = {c.scenario.lambda_c, c.scenario.region.area()};
    out.vb = t.vb;
    out.gate = t.gate;
    out.cluster = t.cluster;
    out.event_cap = t.event_cap;
    return out;
}

std::vector<GgiwState> initial_states(const ExperimentConfig& c, std::span<const GroundTruthTrack> truth) {
    if (!c.tracker.initial_states.empty()) return c.tracker.initial_states;
    std::vector<GgiwState> out;
    const auto& p = c.tracker.prior;
    for (const auto& track : truth) {
        GgiwState s;
        s.m << track.center.front(), track.velocity.front();
        s.P = p.P0_diag.asDiagonal();
        s.v = p.v;
        s.V = p.V;
        s.alpha = p.alpha;
        s.beta = p.beta;
        out.push_back(s);
    }
    return out;
}

}  // namespace ggiw
