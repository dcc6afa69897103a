#pragma once

#include "aqtsp/evolution/propagate.hpp"
#include "aqtsp/evolution/schedule.hpp"
#include "aqtsp/fock/modes.hpp"
#include "aqtsp/search/search.hpp"
#include "aqtsp/tsp/hamiltonians.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aqtsp::cli {

struct ScheduleSpec {
    evolution::ScheduleKind kind = evolution::ScheduleKind::linear;
    double K = 1.0;
    std::vector<std::pair<double, double>> points;

    evolution::Schedule build() const;
};

/// Everything a run depends on. Serializes to and from a JSON document;
/// every report embeds the serialized form.
struct RunConfig {
    std::string problem = "tsp";  // tsp | search

    // TSP
    std::string instance;  // path to the instance document
    std::optional<double> theta;  // nullopt means "auto": ((N-1)!)^(-1/(2N))
    fock::OccupationCutoff cutoff;
    bool symmetric_links = false;
    double scale_inflation = tsp::default_scale_inflation;
    tsp::PenaltyVariant penalty = tsp::PenaltyVariant::hermitian_square;
    int max_link_total = 0;  // verify-filter; 0 means N + 1
    tsp::FilterFault fault = tsp::FilterFault::none;

    // dynamics
    ScheduleSpec schedule;
    double T = 64.0;
    double dt = 0.25;
    evolution::Stepper stepper = evolution::Stepper::magnus4;
    int sample_stride = 1;
    double krylov_tolerance = 1e-12;
    double orthogonal_tol = 1e-2;

    // spectrum
    int spectrum_samples = 41;
    int spectrum_levels = 4;

    // search
    int search_M = 4;
    int search_marked = 0;
    std::vector<int> search_Ms = {4, 8, 16, 32, 64};
    search::SearchFamily search_family = search::SearchFamily::linear;
    double search_target = 0.5;
    double search_dt_over_T = 1.0 / 400.0;
    double search_T_max = 4096.0;

    // output
    std::string output_dir = ".";
    std::string report_format = "json";  // json | text

    static RunConfig from_json(const std::string& text);
    static RunConfig load(const std::string& path);
    std::string to_json(int indent = 2) const;

    /// Throws ValidationError on inconsistent settings.
    void validate() const;
};

} // namespace aqtsp::cli
