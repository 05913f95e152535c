import json
import os
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from nodalparity.config.constants import ValidationConfig
from nodalparity.errors import ReportIOError, SpectrumError
from nodalparity.utils.logger import get_logger

logger = get_logger("FileUtils")


# ---------------------------------------------------------------------------------------------------------------
# JSON reports
# ---------------------------------------------------------------------------------------------------------------

def dump_json(report: BaseModel) -> str:
    """Canonical text of a report: sorted keys, two-space indent, trailing newline."""
    payload = report.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def write_text(text: str, path: str) -> str:
    try:
        _ensure_parent(path)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ReportIOError(f"cannot write {path}: {e}") from e
    return path


def write_json(report: BaseModel, path: str) -> str:
    write_text(dump_json(report), path)
    logger.info(f"Report saved to: {path}")
    return path


# ---------------------------------------------------------------------------------------------------------------
# Raster files (binary PGM / PPM)
# ---------------------------------------------------------------------------------------------------------------

def _write_bytes(header: bytes, body: np.ndarray, path: str) -> str:
    try:
        _ensure_parent(path)
        with open(path, "wb") as f:
            f.write(header)
            f.write(np.ascontiguousarray(body, dtype=np.uint8).tobytes())
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ReportIOError(f"cannot write {path}: {e}") from e
    return path


def write_pgm(image: np.ndarray, path: str) -> str:
    """P5 greymap; `image` is rows x cols uint8."""
    if image.ndim != 2:
        raise ValueError(f"PGM expects a 2-D array, got shape {image.shape}")
    rows, cols = image.shape
    return _write_bytes(f"P5\n{cols} {rows}\n255\n".encode("ascii"), image, path)


def write_ppm(image: np.ndarray, path: str) -> str:
    """P6 pixmap; `image` is rows x cols x 3 uint8."""
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"PPM expects a rows x cols x 3 array, got shape {image.shape}")
    rows, cols, _ = image.shape
    return _write_bytes(f"P6\n{cols} {rows}\n255\n".encode("ascii"), image, path)


def read_pnm_header(path: str) -> Tuple[str, int, int]:
    with open(path, "rb") as f:
        magic, size, _ = f.read().split(b"\n", 3)[:3]
    cols, rows = (int(v) for v in size.split())
    return magic.decode("ascii"), cols, rows


# ---------------------------------------------------------------------------------------------------------------
# Excel export
# ---------------------------------------------------------------------------------------------------------------

def save_to_excel(sheets: Mapping[str, pd.DataFrame], path: str) -> str:
    """One sheet per frame, column widths adjusted to content."""
    try:
        _ensure_parent(path)
        with pd.ExcelWriter(path, engine="openpyxl") as writer:
            for sheet_name, df in sheets.items():
                df.to_excel(writer, sheet_name=sheet_name, index=False)

            # Auto-adjust column widths
            for sheet_name in writer.sheets:
                worksheet = writer.sheets[sheet_name]
                for column in worksheet.columns:
                    column_letter = column[0].column_letter
                    max_length = max((len(str(cell.value)) for cell in column if cell.value is not None), default=0)
                    worksheet.column_dimensions[column_letter].width = min(max_length + 2, 100)
    except OSError as e:
        logger.error(f"Failed to save workbook: {e}")
        raise ReportIOError(f"cannot write {path}: {e}") from e

    logger.info(f"Workbook saved to: {path}")
    return path


# ---------------------------------------------------------------------------------------------------------------
# Eigenfunction documents: {"lambda": "a/b", "coeffs": [{family, m, n, c}]}
# ---------------------------------------------------------------------------------------------------------------

def validate_eigenfunction_document(document: Any) -> Tuple[bool, List[str]]:
    """
    Returns:
        (is_valid, errors):
            is_valid: True if the document can be handed to eigenfunction_from_terms.
            errors: list of human-readable error messages.
    """
    doc_type = "eigenfunction"
    if not isinstance(document, dict):
        return False, [f"{doc_type} document must be a JSON object"]

    errors: List[str] = []
    mandatory = set(ValidationConfig.MANDATORY_DOCUMENT_KEYS[doc_type])
    allowed = mandatory | set(ValidationConfig.OPTIONAL_DOCUMENT_KEYS[doc_type])
    missing = mandatory - set(document)
    extra = set(document) - allowed
    if missing:
        errors.append(f"Missing mandatory keys: {sorted(missing)}")
    if extra:
        errors.append(f"Unexpected keys: {sorted(extra)}")

    coeffs = document.get("coeffs")
    if coeffs is not None:
        if not isinstance(coeffs, list) or not coeffs:
            errors.append("'coeffs' must be a non-empty list")
        else:
            for position, term in enumerate(coeffs):
                if not isinstance(term, dict):
                    errors.append(f"Term {position}: must be an object")
                    continue
                absent = [k for k in ValidationConfig.MANDATORY_TERM_KEYS if k not in term]
                if absent:
                    errors.append(f"Term {position}: missing keys {absent}")
                    continue
                if term["family"] not in ValidationConfig.FAMILIES:
                    errors.append(
                        f"Term {position}: invalid family '{term['family']}'. Allowed: {ValidationConfig.FAMILIES}"
                    )
                for key in ("m", "n"):
                    if not isinstance(term[key], int) or isinstance(term[key], bool) or term[key] < 0:
                        errors.append(f"Term {position}: '{key}' must be a non-negative integer")
                if not isinstance(term["c"], (int, float)) or isinstance(term["c"], bool):
                    errors.append(f"Term {position}: 'c' must be a number")

    lam = document.get("lambda")
    if lam is not None and not isinstance(lam, (str, int)):
        errors.append("'lambda' must be a string 'a/b' or an integer")

    return len(errors) == 0, errors


def load_eigenfunction_document(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
    except OSError as e:
        raise ReportIOError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SpectrumError(f"{path} is not valid JSON: {e}") from e

    is_valid, errors = validate_eigenfunction_document(document)
    if not is_valid:
        raise SpectrumError(f"Validation failed for '{path}':\n  - " + "\n  - ".join(errors))
    logger.info(f"Eigenfunction document {path} loaded with {len(document['coeffs'])} terms")
    return document
