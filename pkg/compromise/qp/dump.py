"""Plain-text dumps of QP instances for triage."""

import io
from pathlib import Path

import numpy as np

from compromise.qp.types import NonnegQP, ProxMaster

__all__ = ["dump_qp", "write_qp_dump"]

_FORMAT = "%.17g"


def _block(out: io.StringIO, name: str, values: np.ndarray) -> None:
    array = np.atleast_2d(np.asarray(values, dtype=np.float64))
    out.write(f"{name} {array.shape[0]} {array.shape[1]}\n")
    if array.size:
        np.savetxt(out, array, fmt=_FORMAT)


def dump_qp(problem: NonnegQP | ProxMaster) -> str:
    """Render a QP as labelled whitespace-separated matrix blocks."""
    out = io.StringIO()
    if isinstance(problem, NonnegQP):
        out.write("# nonneg-qp: max -1/2 g'Hg + q'g + c0, g >= 0\n")
        _block(out, "H", problem.h_matrix)
        _block(out, "q", problem.q_vector)
        _block(out, "c0", np.array([problem.constant]))
        return out.getvalue()

    out.write("# prox-master: min sum_g w_g max(a + B x) + 1/2 x'Qx + c'x + rho/2 |x - anchor|^2\n")
    _block(out, "rho", np.array([problem.rho]))
    _block(out, "anchor", problem.anchor)
    a_region, b_region = problem.region.inequalities()
    _block(out, "A_region", a_region)
    _block(out, "b_region", b_region)
    if problem.q_matrix is not None:
        _block(out, "Q", problem.q_matrix)
    if problem.c_vector is not None:
        _block(out, "c", problem.c_vector)
    for index, group in enumerate(problem.groups):
        out.write(f"group {index} weight {group.weight!r}\n")
        _block(out, "alpha", group.intercepts)
        _block(out, "beta", group.slopes)
    return out.getvalue()


def write_qp_dump(problem: NonnegQP | ProxMaster, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_qp(problem), encoding="utf-8")
