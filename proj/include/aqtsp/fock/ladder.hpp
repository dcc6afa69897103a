#pragma once

#include "aqtsp/fock/basis.hpp"
#include "aqtsp/fock/sparse_operator.hpp"

namespace aqtsp::fock {

struct LadderOps {
    SparseOperator creation;
    SparseOperator annihilation;
    SparseOperator number;
};

SparseOperator creation(const FockBasis& basis, ModeId mode);
SparseOperator annihilation(const FockBasis& basis, ModeId mode);
SparseOperator number(const FockBasis& basis, ModeId mode);

/// a^dagger |n> = sqrt(n+1)|n+1>, a|n> = sqrt(n)|n-1>, and n-hat. Creation
/// at any cap (per-mode or sector total) maps to zero.
LadderOps ladder_ops(const FockBasis& basis, ModeId mode);

/// Lifts a single-mode matrix, indexed by occupation 0..per_mode_max, to
/// the registry basis acting on `mode`. Entries that would leave the
/// truncated space are dropped.
SparseOperator extend_single_mode(const FockBasis& basis, ModeId mode, const DenseMatrix& local);

/// Sum of number operators over every mode of one kind.
SparseOperator total_number(const FockBasis& basis, ModeKind kind);

} // namespace aqtsp::fock
