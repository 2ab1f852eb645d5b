from .field import (
    TABLE_LIMIT,
    FieldCtx,
    LogTables,
    SubfieldHandle,
    coordinate_grid,
    make_field,
    parse_descriptor,
    span_indices,
)
from .fplinalg import batch_rank, inverse, nullspace, rank, rref, solve


def solve_fp_nullspace(system, p: int):
    """F_p-basis (rows) of the kernel of ``system``."""
    return nullspace(system, p)


__all__ = [
    "TABLE_LIMIT",
    "FieldCtx",
    "LogTables",
    "SubfieldHandle",
    "batch_rank",
    "coordinate_grid",
    "inverse",
    "make_field",
    "nullspace",
    "parse_descriptor",
    "rank",
    "rref",
    "solve",
    "solve_fp_nullspace",
    "span_indices",
]
