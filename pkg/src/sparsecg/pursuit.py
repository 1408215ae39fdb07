"""Greedy sparse approximation of segments over a redundant dictionary.

The selection rule is the optimised variant of orthogonal matching pursuit:
at each step the atom maximising ``|<d, r>|^2 / (1 - sum_i <d, w_i>^2)`` is
chosen, which is exactly the atom minimising the new residual norm.  The
workspace keeps an orthonormal set ``w`` spanning the selected atoms (built
by Gram-Schmidt with one re-orthogonalisation pass) and the biorthogonal
(dual) vectors ``b`` that yield the expansion coefficients.

The constant atom (index 1) is always selected first: segments ride on a
smooth baseline, and anchoring the constant makes every later selection act
on the fluctuation only.  Atom indices are 1-based throughout, matching the
encoded stream format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dictionary import Dictionary
from .errors import DegenerateAtomError, DimensionError, SpanExhaustedError

__all__ = [
    "PursuitState",
    "SegmentApproximation",
    "oomp_init",
    "oomp_select",
    "oomp_extend",
    "approximate_segment",
    "approximate_record",
]

SPAN_EPS = 1e-10  # exclusion threshold on 1 - ||projection of d onto span||^2


@dataclass
class SegmentApproximation:
    """Result for one segment: 1-based atom indices, expansion coefficients
    (inner products with the biorthogonal vectors), and the final residual
    norm."""

    indices: list[int]
    coefficients: np.ndarray
    residual_norm: float


@dataclass
class PursuitState:
    """Evolving workspace of one pursuit.

    ``w`` rows are the orthonormalised selected atoms, ``b`` rows their
    biorthogonal duals.  ``corr`` caches ``<d_n, residual>`` for every atom
    and ``span_energy`` accumulates ``sum_i <d_n, w_i>^2`` (the projection
    energy of each candidate onto the selected span), so a selection step
    costs one pass over the cached values and an extension one dictionary
    mat-vec.
    """

    segment: np.ndarray
    gamma: list[int]                # selected atom indices, 1-based
    w: np.ndarray                   # (k, n_b) orthonormal rows
    b: np.ndarray                   # (k, n_b) biorthogonal rows
    residual: np.ndarray
    corr: np.ndarray                # (M,) cached <d_n, residual>
    span_energy: np.ndarray         # (M,) cached sum_i <d_n, w_i>^2
    excluded: set[int] = field(default_factory=set)

    @property
    def k(self) -> int:
        return len(self.gamma)

    def selected_mask(self, size: int) -> np.ndarray:
        m = np.zeros(size, dtype=bool)
        idx = [i - 1 for i in self.gamma] + [i - 1 for i in self.excluded]
        m[idx] = True
        return m


def oomp_init(segment: np.ndarray, dictionary: Dictionary) -> PursuitState:
    """Start a pursuit with the constant atom already selected."""
    f = np.asarray(segment, dtype=float)
    if f.shape != (dictionary.n_b,):
        raise DimensionError(
            f"segment length {f.shape} does not match dictionary n_b {dictionary.n_b}"
        )
    d1 = dictionary.matrix[0]
    residual = f - d1 * (f @ d1)
    t = dictionary.matrix @ d1
    return PursuitState(
        segment=f,
        gamma=[1],
        w=d1[None, :].copy(),
        b=d1[None, :].copy(),
        residual=residual,
        corr=dictionary.matrix @ residual,
        span_energy=t * t,
    )


def oomp_select(state: PursuitState, dictionary: Dictionary) -> int:
    """Pick the unselected atom giving the largest residual-norm decrease.

    Candidates whose span energy leaves less than ``SPAN_EPS`` outside the
    selected span are excluded (they are numerically inside it).  Ties
    resolve to the lowest index.  Returns a 1-based index.
    """
    denom = 1.0 - state.span_energy
    crit = state.corr * state.corr
    mask = state.selected_mask(dictionary.size) | (denom <= SPAN_EPS)
    if mask.all():
        raise SpanExhaustedError(
            "all candidate atoms lie in the selected span; the residual is "
            "numerically zero on the representable space"
        )
    crit = np.where(mask, -np.inf, crit / np.maximum(denom, SPAN_EPS))
    return int(np.argmax(crit)) + 1


def oomp_extend(state: PursuitState, dictionary: Dictionary, new_index: int) -> PursuitState:
    """Add one atom: orthogonalise, update duals, residual and caches.

    Mutates and returns ``state``.  Raises :class:`DegenerateAtomError` when
    the atom has no component outside the selected span.
    """
    if new_index in state.gamma:
        raise DegenerateAtomError(f"atom {new_index} is already selected")
    d = dictionary.matrix[new_index - 1]

    # Gram-Schmidt against the orthonormal rows, plus one
    # re-orthogonalisation pass for numerical accuracy
    w = d - state.w.T @ (state.w @ d)
    w -= state.w.T @ (state.w @ w)
    nsq = float(w @ w)
    if nsq <= SPAN_EPS:
        raise DegenerateAtomError(
            f"atom {new_index} is numerically inside the selected span"
        )
    nrm = np.sqrt(nsq)
    w_unit = w / nrm

    # duals: correct the old rows by the new one, then append it
    b_new = w_unit / nrm  # = w / ||w||^2
    state.b -= np.outer(state.b @ d, b_new)
    state.b = np.vstack([state.b, b_new])
    state.w = np.vstack([state.w, w_unit])
    state.gamma.append(new_index)

    coef = float(w_unit @ state.segment)
    state.residual -= coef * w_unit

    t = dictionary.matrix @ w_unit
    state.span_energy += t * t
    state.corr -= coef * t
    return state


def approximate_segment(
    segment: np.ndarray,
    dictionary: Dictionary,
    rho: float,
    k_max: int | None = None,
) -> SegmentApproximation:
    """Run the pursuit until ``||residual|| < rho``, ``k_max`` atoms are
    selected, or the span is exhausted.

    ``k_max`` defaults to ``n_b // 2``, bounding worst-case cost on
    pathological segments.  The returned coefficients make the
    reconstruction the orthogonal projection of the segment onto the
    selected span.
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if k_max is None:
        k_max = max(1, dictionary.n_b // 2)
    if not 1 <= k_max <= dictionary.n_b:
        raise ValueError(f"k_max must be in [1, n_b], got {k_max}")

    state = oomp_init(segment, dictionary)
    norm = float(np.linalg.norm(state.residual))
    while norm >= rho and norm > 0.0 and state.k < k_max:
        try:
            idx = oomp_select(state, dictionary)
            oomp_extend(state, dictionary, idx)
        except SpanExhaustedError:
            break
        except DegenerateAtomError:
            # stale cache let an in-span atom through; skip it and retry
            state.excluded.add(idx)
            continue
        norm = float(np.linalg.norm(state.residual))

    coeffs = state.b @ state.segment
    return SegmentApproximation(list(state.gamma), coeffs, norm)


def approximate_record(
    segments,
    dictionary: Dictionary,
    prd0: float,
    k_max: int | None = None,
) -> list[SegmentApproximation]:
    """Approximate each segment with per-segment threshold
    ``rho_q = prd0 * ||f_q|| / 100``.

    Zero-norm segments are represented by the constant atom with
    coefficient 0.  Segments are independent; output order matches input
    order.
    """
    out = []
    for f in segments:
        f = np.asarray(f, dtype=float)
        nrm = float(np.linalg.norm(f))
        if nrm == 0.0:
            out.append(SegmentApproximation([1], np.zeros(1), 0.0))
            continue
        out.append(approximate_segment(f, dictionary, prd0 * nrm / 100.0, k_max))
    return out


def reconstruct_segment(approx: SegmentApproximation, dictionary: Dictionary) -> np.ndarray:
    """Sum of the selected atoms weighted by the expansion coefficients."""
    idx = np.asarray(approx.indices, dtype=int) - 1
    return approx.coefficients @ dictionary.matrix[idx]
