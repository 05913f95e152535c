from typing import Dict, List, Tuple

# ---------------------------------------------------------------------------------------------------------------
# Process Exit Codes
# ---------------------------------------------------------------------------------------------------------------

class ExitCode:
    SUCCESS: int = 0
    VERIFICATION_FAILED: int = 1
    USAGE: int = 2
    UNSUPPORTED_REGIME: int = 3
    UNSTABLE_COUNT: int = 4
    IO: int = 5


# ---------------------------------------------------------------------------------------------------------------
# Torus Regimes (where an anti-symmetry vector is guaranteed)
# ---------------------------------------------------------------------------------------------------------------

class Regime:
    IRRATIONAL: str = "irrational"
    SQUARE: str = "square"
    ODD_FORM: str = "odd-form"


# ---------------------------------------------------------------------------------------------------------------
# Render Palettes (RGB)
# ---------------------------------------------------------------------------------------------------------------

class Palette:
    SIGN: str = "sign"
    DOMAINS: str = "domains"

    POSITIVE: Tuple[int, int, int] = (200, 40, 40)
    NEGATIVE: Tuple[int, int, int] = (40, 70, 200)
    BOUNDARY: Tuple[int, int, int] = (0, 0, 0)

    # Cycled per domain label in the "domains" palette
    DOMAIN_CYCLE: List[Tuple[int, int, int]] = [
        (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
        (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
        (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
        (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
    ]


# ---------------------------------------------------------------------------------------------------------------
# Input Validation Config
# ---------------------------------------------------------------------------------------------------------------

class ValidationConfig:
    FAMILIES: List[str] = ["cc", "cs", "sc", "ss"]

    # Eigenfunction input documents: {"lambda": "a/b", "coeffs": [{family, m, n, c}]}
    MANDATORY_TERM_KEYS: List[str] = ["family", "m", "n", "c"]
    MANDATORY_DOCUMENT_KEYS: Dict[str, List[str]] = {
        "eigenfunction": ["coeffs"],
    }
    OPTIONAL_DOCUMENT_KEYS: Dict[str, List[str]] = {
        "eigenfunction": ["lambda"],
    }

    MIN_GRID_RESOLUTION: int = 4
    MIN_RENDER_SIZE: int = 64
