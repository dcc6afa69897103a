#include "aqtsp/cli/run_config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace aqtsp::cli {

using nlohmann::ordered_json;

namespace {

evolution::ScheduleKind parse_kind(const std::string& s) {
    using evolution::ScheduleKind;
    for (auto k : {ScheduleKind::linear, ScheduleKind::scaled, ScheduleKind::quadratic_boost,
                   ScheduleKind::exponential_boost, ScheduleKind::tabulated})
        if (evolution::to_string(k) == s) return k;
    throw ValidationError("unknown schedule kind '" + s +
                          "' (linear | scaled | quadratic_boost | exponential_boost | tabulated)");
}

void reject_unknown(const ordered_json& obj, const std::set<std::string>& known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const ordered_json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

void read_opt(const ordered_json& obj, const char* key, std::optional<int>& out) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) {
        out.reset();
        return;
    }
    if (!obj.at(key).is_number_integer()) throw ValidationError(std::string("config key '") + key + "' must be an integer");
    out = obj.at(key).get<int>();
}

ordered_json opt_json(const std::optional<int>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

} // namespace

evolution::Schedule ScheduleSpec::build() const {
    using evolution::Schedule;
    switch (kind) {
    case evolution::ScheduleKind::linear: return Schedule::linear();
    case evolution::ScheduleKind::scaled: return Schedule::scaled(K);
    case evolution::ScheduleKind::quadratic_boost: return Schedule::quadratic_boost(K);
    case evolution::ScheduleKind::exponential_boost: return Schedule::exponential_boost(K);
    case evolution::ScheduleKind::tabulated: return Schedule::tabulated(points);
    }
    return Schedule::linear();
}

RunConfig RunConfig::from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    reject_unknown(doc,
                   {"problem", "instance", "theta", "cutoff", "symmetric_links", "scale_inflation", "penalty",
                    "max_link_total", "fault", "schedule", "T", "dt", "stepper", "sample_stride", "krylov_tolerance",
                    "orthogonal_tol", "spectrum", "search", "output_dir", "report_format"},
                   "config");
    RunConfig c;
    read(doc, "problem", c.problem);
    read(doc, "instance", c.instance);
    if (doc.contains("theta")) {
        const auto& t = doc["theta"];
        if (t.is_string() && t.get<std::string>() == "auto") {
            c.theta.reset();
        } else if (t.is_number()) {
            c.theta = t.get<double>();
        } else {
            throw ValidationError("config key 'theta' must be a number or \"auto\"");
        }
    }
    if (doc.contains("cutoff")) {
        const auto& k = doc["cutoff"];
        if (!k.is_object()) throw ValidationError("config key 'cutoff' must be an object");
        reject_unknown(k, {"per_mode_max", "link_total_max", "hooker_total_max", "marker_total_max"}, "cutoff");
        read(k, "per_mode_max", c.cutoff.per_mode_max);
        read_opt(k, "link_total_max", c.cutoff.link_total_max);
        read_opt(k, "hooker_total_max", c.cutoff.hooker_total_max);
        read_opt(k, "marker_total_max", c.cutoff.marker_total_max);
    }
    read(doc, "symmetric_links", c.symmetric_links);
    read(doc, "scale_inflation", c.scale_inflation);
    if (doc.contains("penalty")) c.penalty = tsp::parse_penalty_variant(doc["penalty"].get<std::string>());
    read(doc, "max_link_total", c.max_link_total);
    if (doc.contains("fault")) {
        const auto f = doc["fault"].get<std::string>();
        if (f == "none") c.fault = tsp::FilterFault::none;
        else if (f == "transposed_link") c.fault = tsp::FilterFault::transposed_link;
        else throw ValidationError("unknown fault '" + f + "' (none | transposed_link)");
    }
    if (doc.contains("schedule")) {
        const auto& s = doc["schedule"];
        if (!s.is_object()) throw ValidationError("config key 'schedule' must be an object");
        reject_unknown(s, {"kind", "K", "points"}, "schedule");
        if (s.contains("kind")) c.schedule.kind = parse_kind(s["kind"].get<std::string>());
        read(s, "K", c.schedule.K);
        if (s.contains("points")) {
            for (const auto& p : s["points"]) {
                if (!p.is_array() || p.size() != 2) throw ValidationError("schedule points must be [tau, g] pairs");
                c.schedule.points.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
    }
    read(doc, "T", c.T);
    read(doc, "dt", c.dt);
    if (doc.contains("stepper")) c.stepper = evolution::parse_stepper(doc["stepper"].get<std::string>());
    read(doc, "sample_stride", c.sample_stride);
    read(doc, "krylov_tolerance", c.krylov_tolerance);
    read(doc, "orthogonal_tol", c.orthogonal_tol);
    if (doc.contains("spectrum")) {
        const auto& s = doc["spectrum"];
        reject_unknown(s, {"samples", "levels"}, "spectrum");
        read(s, "samples", c.spectrum_samples);
        read(s, "levels", c.spectrum_levels);
    }
    if (doc.contains("search")) {
        const auto& s = doc["search"];
        reject_unknown(s, {"M", "marked", "Ms", "family", "target", "dt_over_T", "T_max"}, "search");
        read(s, "M", c.search_M);
        read(s, "marked", c.search_marked);
        read(s, "Ms", c.search_Ms);
        if (s.contains("family")) c.search_family = search::parse_search_family(s["family"].get<std::string>());
        read(s, "target", c.search_target);
        read(s, "dt_over_T", c.search_dt_over_T);
        read(s, "T_max", c.search_T_max);
    }
    read(doc, "output_dir", c.output_dir);
    read(doc, "report_format", c.report_format);
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void RunConfig::validate() const {
    if (problem != "tsp" && problem != "search") throw ValidationError("problem must be tsp or search");
    cutoff.validate();
    if (theta && !std::isfinite(*theta)) throw ValidationError("theta must be finite");
    if (!(scale_inflation >= 0.0)) throw ValidationError("scale_inflation must be >= 0");
    if (!(T >= 0.0)) throw ValidationError("T must be >= 0");
    if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
    if (sample_stride < 1) throw ValidationError("sample_stride must be >= 1");
    if (spectrum_samples < 2 || spectrum_levels < 2) throw ValidationError("spectrum needs samples >= 2 and levels >= 2");
    if (report_format != "json" && report_format != "text") throw ValidationError("report_format must be json or text");
    if (search_M < 2) throw ValidationError("search M must be >= 2");
    if (!(search_target > 0.0 && search_target <= 1.0)) throw ValidationError("search target must be in (0, 1]");
    if (!(search_dt_over_T > 0.0)) throw ValidationError("search dt_over_T must be > 0");
    schedule.build();
}

std::string RunConfig::to_json(int indent) const {
    ordered_json doc;
    doc["problem"] = problem;
    doc["instance"] = instance;
    doc["theta"] = theta ? ordered_json(*theta) : ordered_json("auto");
    doc["cutoff"] = {{"per_mode_max", cutoff.per_mode_max},
                     {"link_total_max", opt_json(cutoff.link_total_max)},
                     {"hooker_total_max", opt_json(cutoff.hooker_total_max)},
                     {"marker_total_max", opt_json(cutoff.marker_total_max)}};
    doc["symmetric_links"] = symmetric_links;
    doc["scale_inflation"] = scale_inflation;
    doc["penalty"] = tsp::to_string(penalty);
    doc["max_link_total"] = max_link_total;
    doc["fault"] = fault == tsp::FilterFault::none ? "none" : "transposed_link";
    ordered_json sched;
    sched["kind"] = evolution::to_string(schedule.kind);
    sched["K"] = schedule.K;
    ordered_json pts = ordered_json::array();
    for (const auto& [t, g] : schedule.points) pts.push_back({t, g});
    sched["points"] = pts;
    doc["schedule"] = sched;
    doc["T"] = T;
    doc["dt"] = dt;
    doc["stepper"] = evolution::to_string(stepper);
    doc["sample_stride"] = sample_stride;
    doc["krylov_tolerance"] = krylov_tolerance;
    doc["orthogonal_tol"] = orthogonal_tol;
    doc["spectrum"] = {{"samples", spectrum_samples}, {"levels", spectrum_levels}};
    doc["search"] = {{"M", search_M},
                     {"marked", search_marked},
                     {"Ms", search_Ms},
                     {"family", search::to_string(search_family)},
                     {"target", search_target},
                     {"dt_over_T", search_dt_over_T},
                     {"T_max", search_T_max}};
    doc["output_dir"] = output_dir;
    doc["report_format"] = report_format;
    return doc.dump(indent);
}

} // namespace aqtsp::cli
