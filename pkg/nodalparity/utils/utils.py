import json
from fractions import Fraction
from typing import Any, Dict, List, Union

import pandas as pd

from nodalparity.utils.logger import get_logger

logger = get_logger("Utils")


def fraction_record(value: Union[int, Fraction]) -> Dict[str, int]:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def fraction_text(value: Union[int, Fraction]) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int]) -> Fraction:
    """'a/b' or 'a' to an exact Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"'{text}' is not a rational number") from e


def normalize_json_to_dataframe(json_object: Union[Dict[str, Any], List[Dict[str, Any]]]) -> pd.DataFrame:
    """
    Flattens one report record (or a list of them) into a DataFrame with dotted keys.
    Lists of scalars become comma-separated strings, nested lists stay JSON.
    """

    def _flatten(data: Dict[str, Any], parent_key: str = "") -> Dict[str, Any]:
        items = {}
        for key, value in data.items():
            new_key = f"{parent_key}.{key}" if parent_key else key
            if isinstance(value, dict):
                items.update(_flatten(value, new_key))
            elif isinstance(value, list):
                if all(isinstance(item, (str, int, float, bool)) for item in value):
                    items[new_key] = ", ".join(str(item) for item in value)
                else:
                    items[new_key] = json.dumps(value, ensure_ascii=False, sort_keys=True)
            else:
                items[new_key] = value
        return items

    try:
        if isinstance(json_object, dict):
            rows = [_flatten(json_object)]
        elif isinstance(json_object, list):
            if not all(isinstance(item, dict) for item in json_object):
                raise ValueError("JSON object list must contain only dictionaries")
            rows = [_flatten(item) for item in json_object]
        else:
            raise ValueError("Not a valid JSON object")
        return pd.DataFrame(rows)

    except Exception:
        logger.exception("Failed JSON → DataFrame normalization")
        raise
