"""
Nodal domains on the periodic grid.

A sign grid classifies every lattice sample as +1, -1 or 0 (|u| <= tau, the
discretised nodal set). Domains are the 4-connected components of same-sign
cells with wrap-around in both directions. Diagonal neighbours never merge:
at a crossing of two nodal lines the four open quadrants meet only at a point
of the nodal set.

The count is a heuristic certificate: the grid is refined until two successive
resolutions agree, it is not a proof.
"""

from collections import deque
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy import ndimage

from nodalparity.components.spectra import Eigenfunction, TorusShape, evaluate_grid
from nodalparity.config.config import CountConfig
from nodalparity.config.constants import ValidationConfig
from nodalparity.errors import SpectrumError, UnstableCountError, VanishingFunctionError
from nodalparity.utils.disjoint_set import DisjointSet
from nodalparity.utils.file_utils import write_pgm
from nodalparity.utils.logger import get_logger

logger = get_logger("Nodal")

POSITIVE, NEGATIVE, BOUNDARY = 1, -1, 0
FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


# ---------------------------------------------------------------------------------------------------------------
# Domain Types
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class SignGrid:
    n1: int
    n2: int
    signs: np.ndarray
    tau: float
    values: Optional[np.ndarray] = None


@dataclass(frozen=True)
class NodalDecomposition:
    labels: np.ndarray
    domain_count: int
    domain_signs: List[int]
    domain_cell_counts: List[int]
    resolution: Tuple[int, int]

    @property
    def positive_count(self) -> int:
        return sum(1 for s in self.domain_signs if s > 0)

    @property
    def negative_count(self) -> int:
        return sum(1 for s in self.domain_signs if s < 0)


class CountResult(NamedTuple):
    count: int
    resolution: int
    decomposition: NodalDecomposition


# ---------------------------------------------------------------------------------------------------------------
# Sign grid
# ---------------------------------------------------------------------------------------------------------------

def classify(values: np.ndarray, tau: float) -> np.ndarray:
    signs = np.sign(values).astype(np.int8)
    signs[np.abs(values) <= tau] = BOUNDARY
    return signs


def sign_grid(
    u: Eigenfunction,
    n1: int,
    n2: int,
    tau: Optional[float] = None,
    tau_relative: float = CountConfig.tau_relative,
) -> SignGrid:
    """Classify u at every lattice point; tau defaults to tau_relative * max|u| on the grid."""
    if n1 < ValidationConfig.MIN_GRID_RESOLUTION or n2 < ValidationConfig.MIN_GRID_RESOLUTION:
        raise SpectrumError(f"grid resolution must be at least {ValidationConfig.MIN_GRID_RESOLUTION}")
    values = evaluate_grid(u, n1, n2)
    if tau is None:
        tau = tau_relative * float(np.max(np.abs(values)))
    if tau < 0:
        raise SpectrumError(f"tau must be non-negative, got {tau}")
    signs = classify(values, tau)
    if not np.any(signs):
        raise VanishingFunctionError("function vanishes on grid")
    return SignGrid(n1=n1, n2=n2, signs=signs, tau=tau, values=values)


# ---------------------------------------------------------------------------------------------------------------
# Labelling
# ---------------------------------------------------------------------------------------------------------------

def _seam_pairs(raw: np.ndarray, signs: np.ndarray, a: Tuple, b: Tuple) -> np.ndarray:
    ra, rb = raw[a], raw[b]
    joined = (ra >= 0) & (rb >= 0) & (signs[a] == signs[b])
    if not np.any(joined):
        return np.empty((0, 2), dtype=np.int64)
    return np.unique(np.stack([ra[joined], rb[joined]], axis=1), axis=0)


def label_components(g: SignGrid) -> NodalDecomposition:
    """
    4-connected labelling with torus wrap-around.

    Each sign class is labelled by scipy's planar labeller; components touching
    across the row-0/row-(n1-1) and column-0/column-(n2-1) seams are then merged
    with a union-find. Labels are renumbered 0..k-1 in row-major first-occurrence order.
    """
    signs = g.signs
    if not np.any(signs):
        raise VanishingFunctionError("function vanishes on grid")

    raw = np.full(signs.shape, -1, dtype=np.int64)
    offset = 0
    for sign in (POSITIVE, NEGATIVE):
        lab, k = ndimage.label(signs == sign, structure=FOUR_CONNECTED)
        inside = lab > 0
        raw[inside] = lab[inside] - 1 + offset
        offset += k

    forest = DisjointSet(offset)
    seams = (
        _seam_pairs(raw, signs, (0, slice(None)), (-1, slice(None))),
        _seam_pairs(raw, signs, (slice(None), 0), (slice(None), -1)),
    )
    for pairs in seams:
        for x, y in pairs:
            forest.union(int(x), int(y))
    roots = forest.roots()

    inside = raw >= 0
    merged = roots[raw[inside]]
    uniq, first = np.unique(merged, return_index=True)
    order = uniq[np.argsort(first)]
    canonical = np.full(offset, -1, dtype=np.int64)
    canonical[order] = np.arange(order.size)

    labels = np.full(signs.shape, -1, dtype=np.int64)
    labels[inside] = canonical[merged]

    flat_labels = labels[inside]
    flat_signs = signs[inside]
    _, first_cell = np.unique(flat_labels, return_index=True)
    domain_signs = [int(s) for s in flat_signs[first_cell]]
    counts = np.bincount(flat_labels, minlength=order.size)

    return NodalDecomposition(
        labels=labels,
        domain_count=int(order.size),
        domain_signs=domain_signs,
        domain_cell_counts=[int(c) for c in counts],
        resolution=(g.n1, g.n2),
    )


def flood_fill_count(g: SignGrid) -> int:
    """Breadth-first flood fill with wrap-around; slow, used as an independent oracle."""
    n1, n2 = g.signs.shape
    seen = np.zeros((n1, n2), dtype=bool)
    count = 0
    for i in range(n1):
        for j in range(n2):
            if seen[i, j] or g.signs[i, j] == BOUNDARY:
                continue
            count += 1
            sign = g.signs[i, j]
            seen[i, j] = True
            queue = deque([(i, j)])
            while queue:
                a, b = queue.popleft()
                for da, db in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    c, d = (a + da) % n1, (b + db) % n2
                    if not seen[c, d] and g.signs[c, d] == sign:
                        seen[c, d] = True
                        queue.append((c, d))
    return count


def relabel_equivalent(a: np.ndarray, b: np.ndarray) -> bool:
    """True when two label matrices agree up to a renaming of labels (boundary = -1 in both)."""
    if a.shape != b.shape or np.any((a < 0) != (b < 0)):
        return False
    inside = a >= 0
    pairs = np.unique(np.stack([a[inside], b[inside]], axis=1), axis=0)
    return len(pairs) == len(np.unique(a[inside])) == len(np.unique(b[inside]))


# ---------------------------------------------------------------------------------------------------------------
# Counting with refinement
# ---------------------------------------------------------------------------------------------------------------

def decompose_at(u: Eigenfunction, resolution: int, tau_relative: float) -> NodalDecomposition:
    return label_components(sign_grid(u, resolution, resolution, tau_relative=tau_relative))


def count_nodal_domains(u: Eigenfunction, cfg: CountConfig = CountConfig()) -> CountResult:
    """
    Count at r and refinement_factor*r starting from base_resolution; stop when two
    successive counts agree and return the coarser of the two.
    """
    if u.eigenspace.is_zero:
        raise VanishingFunctionError("a constant function has no nodal set to count")

    r = cfg.base_resolution
    current = decompose_at(u, r, cfg.tau_relative)
    history = [(r, current.domain_count)]
    while r * cfg.refinement_factor <= cfg.max_resolution:
        finer_r = r * cfg.refinement_factor
        finer = decompose_at(u, finer_r, cfg.tau_relative)
        history.append((finer_r, finer.domain_count))
        if finer.domain_count == current.domain_count:
            logger.info(f"📊 Count {current.domain_count} stable at {r} → {finer_r}")
            return CountResult(current.domain_count, r, current)
        logger.warning(f"⚠️ Count changed {current.domain_count} → {finer.domain_count} at {finer_r}")
        r, current = finer_r, finer

    raise UnstableCountError(f"unstable count up to resolution {cfg.max_resolution}: {history}")


def domain_areas(d: NodalDecomposition, torus: TorusShape) -> List[float]:
    n1, n2 = d.resolution
    cell = (2 * np.pi / n1) * (torus.period_x2 / n2)
    return [c * cell for c in d.domain_cell_counts]


def label_image(d: NodalDecomposition) -> np.ndarray:
    """Labels as 8-bit grey levels: boundary 0, domains spread over 1..255."""
    img = np.zeros(d.labels.shape, dtype=np.uint8)
    inside = d.labels >= 0
    if d.domain_count:
        levels = 1 + (d.labels[inside] * 254) // max(d.domain_count - 1, 1)
        img[inside] = levels.astype(np.uint8)
    return img


def decomposition_summary(d: NodalDecomposition, torus: TorusShape) -> dict:
    return {
        "count": d.domain_count,
        "signs": list(d.domain_signs),
        "areas": domain_areas(d, torus),
        "resolution": list(d.resolution),
        "positive": d.positive_count,
        "negative": d.negative_count,
    }


def write_label_pgm(d: NodalDecomposition, path: str) -> str:
    """Binary P5 label map, rows along x1."""
    return write_pgm(label_image(d), path)
