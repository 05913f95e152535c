from typing import Any, Dict, List, Optional, TypedDict


class ParityScanState(TypedDict, total=False):
    # One eigenspace per graph invocation; only plain values so the checkpointer can store them
    torus_spec: str
    eigenvalue: Optional[str]
    index: Optional[List[int]]
    position: int
    seed: int
    functions: int
    sample_count: int
    count_config: Dict[str, Any]

    # Global Pipeline Status
    current_step: str
    step_status: str
    step_error: Optional[str]
    exit_code: int

    # Results
    approx: Optional[float]
    multiplicity: Optional[int]
    regime: Optional[str]
    vector: Optional[Dict[str, str]]
    exact_check: Optional[bool]
    function_results: List[Dict[str, Any]]


class ConstructionState(TypedDict, total=False):
    m: int
    n: int
    k: int
    epsilon: Optional[float]
    seed: int
    sample_count: int
    hyperbola_resolution: int
    count_config: Dict[str, Any]

    # Global Pipeline Status
    current_step: str
    step_status: str
    step_error: Optional[str]
    exit_code: int

    # Results
    rho_sq: Optional[str]
    count: Optional[Dict[str, Any]]
    half_period: Optional[Dict[str, Any]]
    negative_area: Optional[float]
    negative_area_limit: Optional[float]
    residuals: Dict[str, Optional[float]]
    quadrants: Optional[Dict[str, Any]]
