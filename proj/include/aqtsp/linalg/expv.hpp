#pragma once

#include "aqtsp/common.hpp"

#include <functional>

namespace aqtsp::linalg {

using MatVec = std::function<void(const Vector& in, Vector& out)>;

struct ExpvStats {
    long matvecs = 0;
    long substeps = 0;
    double error_estimate = 0.0;
};

/// exp(-i h A) v for hermitian A, by Lanczos with full reorthogonalization.
/// The step is split into substeps whenever the a-posteriori Krylov error
/// estimate exceeds `tolerance` (scaled by the substep fraction) within
/// `max_krylov` vectors. The result is unitary up to the orthogonality of
/// the Krylov basis.
Vector expv_hermitian(const MatVec& matvec, const Vector& v, double h, double tolerance = 1e-12,
                      int max_krylov = 40, ExpvStats* stats = nullptr);

} // namespace aqtsp::linalg
