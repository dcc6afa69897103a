#pragma once

#include "aqtsp/cli/run_config.hpp"
#include "aqtsp/evolution/propagate.hpp"
#include "aqtsp/fock/basis.hpp"
#include "aqtsp/oracle/classify.hpp"
#include "aqtsp/oracle/tour.hpp"
#include "aqtsp/tsp/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aqtsp::cli {

/// What a command produced. `report` is also written to
/// <output_dir>/<command>.json (or .txt).
struct CommandOutput {
    std::string report;
    std::vector<std::string> files;
    /// False when an embedded check failed; the CLI then exits with 3.
    bool checks_passed = true;
};

/// Link-only dynamics setup shared by spectrum, evolve and bounds. The
/// hooker and marker sectors are held empty (both Hamiltonians leave that
/// sector invariant), which keeps the basis small.
struct TspSetup {
    tsp::TspInstance instance;
    double theta = 0.0;
    double s = 0.0;
    fock::FockBasis basis;
    fock::SparseOperator H_I, H_P;
    Vector psi0;                      // ground state of the truncated H_I
    double coherent_overlap = 0.0;    // |<coherent|psi0>|^2
    double truncation_weight = 0.0;   // coherent mass lost to the caps
    oracle::OracleResult optimum;
    std::vector<Eigen::Index> optimal_indices;
    evolution::SubspaceProjector target;
};

TspSetup prepare_tsp(const RunConfig& config);

/// Resolved theta: the explicit value, or ((N-1)!)^(-1/(2N)) for "auto".
double resolve_theta(const RunConfig& config, int n_cities);

struct ClassCheck {
    oracle::ConfigClass config_class = oracle::ConfigClass::other;
    std::size_t configurations = 0;
    std::size_t failures = 0;
    double max_vacuum_component = 0.0;  // largest |h/m-vacuum part of Q|config>|
    std::vector<std::vector<int>> examples;  // up to 3 failing configurations
};

struct FilterVerification {
    int n_cities = 0;
    fock::OccupationCutoff cutoff;
    std::size_t dimension = 0;
    std::size_t tours = 0;
    double max_tour_residual = 0.0;     // max ||(Q - 1)|tour>||_inf
    std::size_t compared_columns = 0;
    double max_matrix_difference = 0.0; // matrix vs combinatorial Q, entrywise
    std::vector<ClassCheck> classes;
    bool passed = false;
};

/// Cutoff used by verify-filter: the configured per-mode cap, link total
/// max_link_total (0 means the full space at N = 3 and N + 1 above). Above
/// N = 3, unset hooker/marker totals become 1 and N - 1, which is all the
/// filter ever occupies when it starts from the h/m vacuum.
fock::OccupationCutoff filter_cutoff(const RunConfig& config, int n_cities);

/// Exhaustive filter check on one registry: tour eigenvalues, the six
/// elimination classes and matrix-vs-combinatorial agreement, all at
/// tolerance `tol`.
FilterVerification verify_filter(int n_cities, const RunConfig& config, double tol = 1e-12);

CommandOutput cmd_solve_classical(const RunConfig& config);
CommandOutput cmd_verify_filter(const RunConfig& config);
CommandOutput cmd_spectrum(const RunConfig& config);
CommandOutput cmd_evolve(const RunConfig& config);
CommandOutput cmd_bounds(const RunConfig& config);
CommandOutput cmd_search_bench(const RunConfig& config);

} // namespace aqtsp::cli
