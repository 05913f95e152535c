"""
Raster maps of nodal sets.

The image x axis runs along x1 and the y axis along x2 with x2 increasing
upwards, so the four rectangles of u^cc_{1,1} and the stripes of u^cc_{2,0}
come out in their usual layout. Grids are resampled to the requested size by
nearest neighbour, which keeps the output a pure function of the inputs.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from nodalparity.components.nodal import NodalDecomposition, SignGrid, label_components
from nodalparity.config.config import RenderConfig
from nodalparity.config.constants import Palette, ValidationConfig
from nodalparity.errors import SpectrumError
from nodalparity.utils.file_utils import write_ppm
from nodalparity.utils.logger import get_logger

logger = get_logger("Render")


@dataclass(frozen=True)
class RenderSpec:
    width: int = RenderConfig.WIDTH
    height: int = RenderConfig.HEIGHT
    palette: str = RenderConfig.PALETTE

    def __post_init__(self):
        if min(self.width, self.height) < ValidationConfig.MIN_RENDER_SIZE:
            raise SpectrumError(
                f"image size must be at least {ValidationConfig.MIN_RENDER_SIZE}x{ValidationConfig.MIN_RENDER_SIZE}, "
                f"got {self.width}x{self.height}"
            )
        if self.palette not in (Palette.SIGN, Palette.DOMAINS):
            raise SpectrumError(f"unknown palette '{self.palette}'")


def _sample_indices(shape, spec: RenderSpec):
    n1, n2 = shape
    cols = (np.arange(spec.width) * n1) // spec.width
    rows = n2 - 1 - (np.arange(spec.height) * n2) // spec.height
    return rows, cols


def _sign_colours(signs: np.ndarray) -> np.ndarray:
    rgb = np.empty(signs.shape + (3,), dtype=np.uint8)
    rgb[signs > 0] = Palette.POSITIVE
    rgb[signs < 0] = Palette.NEGATIVE
    rgb[signs == 0] = Palette.BOUNDARY
    return rgb


def _domain_colours(labels: np.ndarray) -> np.ndarray:
    cycle = np.array(Palette.DOMAIN_CYCLE, dtype=np.uint8)
    rgb = np.empty(labels.shape + (3,), dtype=np.uint8)
    inside = labels >= 0
    rgb[inside] = cycle[labels[inside] % len(cycle)]
    rgb[~inside] = Palette.BOUNDARY
    return rgb


def render_image(source: Union[SignGrid, NodalDecomposition], spec: RenderSpec = RenderSpec()) -> np.ndarray:
    """height x width x 3 uint8 image of a sign grid or a decomposition."""
    if spec.palette == Palette.DOMAINS:
        decomp = label_components(source) if isinstance(source, SignGrid) else source
        field_ = _domain_colours(decomp.labels)
    elif isinstance(source, SignGrid):
        field_ = _sign_colours(source.signs)
    else:
        signs = np.zeros(source.labels.shape, dtype=np.int8)
        inside = source.labels >= 0
        signs[inside] = np.asarray(source.domain_signs, dtype=np.int8)[source.labels[inside]]
        field_ = _sign_colours(signs)

    # field_ is indexed [i1, i2]; the image is indexed [row, col] = [x2 from the top, x1]
    rows, cols = _sample_indices(field_.shape[:2], spec)
    return np.ascontiguousarray(field_[np.ix_(cols, rows)].transpose(1, 0, 2))


def render(source: Union[SignGrid, NodalDecomposition], spec: RenderSpec, path: str) -> str:
    image = render_image(source, spec)
    write_ppm(image, path)
    logger.info(f"Rendered {spec.width}x{spec.height} ({spec.palette}) to {path}")
    return path
