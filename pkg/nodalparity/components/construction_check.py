from functools import lru_cache
from typing import Optional

from nodalparity.components.antisym import pairing_resolution
from nodalparity.components.construct import (
    OddConstruction,
    branch_quadrant_check,
    extract_zero_points,
    half_period_shift_check,
    half_period_vector,
    hyperbola_residual,
    make_construction,
    negative_area,
    negative_area_limit,
    reflection_symmetry_check,
    verify_odd_count,
)
from nodalparity.components.nodal import decompose_at
from nodalparity.config.config import CountConfig, NumericsConfig
from nodalparity.config.constants import ExitCode
from nodalparity.errors import NodalParityError
from nodalparity.utils.logger import get_logger
from nodalparity.utils.state import ConstructionState

logger = get_logger("ConstructionNodes")


@lru_cache(maxsize=32)
def _construction(m: int, n: int, k: int, epsilon: Optional[float]) -> OddConstruction:
    return make_construction(m, n, k, epsilon)


def _load(state: ConstructionState) -> OddConstruction:
    return _construction(state["m"], state["n"], state["k"], state.get("epsilon"))


def _fail(state: ConstructionState, error: Exception) -> ConstructionState:
    logger.error(f"🛑 {state.get('current_step')}: {error}")
    state.update({
        "step_status": "failed",
        "step_error": str(error),
        "exit_code": getattr(error, "exit_code", ExitCode.VERIFICATION_FAILED),
    })
    return state


class ConstructionNodes:

    # --------------------------------------------------------------------------------------
    # Build v_eps
    # --------------------------------------------------------------------------------------

    def build(self, state: ConstructionState) -> ConstructionState:
        state.update({"current_step": "construction - build", "step_status": "pending", "residuals": {}})
        try:
            c = _load(state)
            state.update({"epsilon": c.epsilon, "rho_sq": c.torus.label(), "step_status": "success"})
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # Count, half-period symmetry, negative area
    # --------------------------------------------------------------------------------------

    def count(self, state: ConstructionState) -> ConstructionState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "construction - count", "step_status": "pending"})
        try:
            c = _load(state)
            cfg = CountConfig(**state["count_config"])
            report = verify_odd_count(c, cfg)
            decomp = report.decomposition
            state.update({
                "count": {
                    "expected_count": report.expected_count,
                    "predicted_count": report.predicted_count,
                    "actual_count": report.actual_count,
                    "channel_sign": report.channel_sign,
                    "positive_domains": report.positive_domains,
                    "negative_domains": report.negative_domains,
                    "resolution": report.resolution,
                    "matches_expected": report.matches_expected,
                    "passed": report.passed,
                },
                "negative_area": negative_area(c, decomp),
                "negative_area_limit": negative_area_limit(c),
            })

            if c.k % 2 == 0:
                r = pairing_resolution(half_period_vector(c), report.resolution)
                if r != report.resolution:
                    decomp = decompose_at(c.u, r, cfg.tau_relative)
                shift = half_period_shift_check(c, decomp)
                state["half_period"] = {
                    "shift": list(shift.shift),
                    "domains": len(shift.permutation),
                    "fixed_domains": shift.fixed_domains,
                    "max_discrepancy": shift.max_discrepancy,
                }
            state["step_status"] = "success"
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # xi-hyperbola and branch quadrants (k = 2)
    # --------------------------------------------------------------------------------------

    def geometry(self, state: ConstructionState) -> ConstructionState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "construction - geometry", "step_status": "pending"})
        c = _load(state)
        if c.k != 2:
            logger.info(f"k={c.k}: no closed-form nodal curve, geometry checks skipped")
            state["step_status"] = "success"
            return state
        try:
            points = extract_zero_points(c, state["hyperbola_resolution"])
            state["residuals"]["hyperbola"] = hyperbola_residual(c, points)
            quadrants = branch_quadrant_check(c, points)
            state["quadrants"] = {
                "points": quadrants.points,
                "lower_left": quadrants.lower_left,
                "upper_right": quadrants.upper_right,
                "off_diagonal": quadrants.off_diagonal,
                "excluded": quadrants.excluded,
                "min_off_diagonal_abs_xi1": quadrants.min_off_diagonal_abs_xi1,
            }
            state["step_status"] = "success"
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # Reflection symmetries
    # --------------------------------------------------------------------------------------

    def symmetry(self, state: ConstructionState) -> ConstructionState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "construction - symmetry", "step_status": "pending"})
        residuals = reflection_symmetry_check(_load(state), state["sample_count"], state["seed"])
        state["residuals"]["reflection_x1"] = residuals.x1
        state["residuals"]["reflection_x2"] = residuals.x2
        if residuals.max > NumericsConfig.REFLECTION_TOLERANCE:
            state.update({
                "step_status": "failed",
                "step_error": f"reflection residual {residuals.max:.3e} above {NumericsConfig.REFLECTION_TOLERANCE}",
                "exit_code": ExitCode.VERIFICATION_FAILED,
            })
        else:
            state["step_status"] = "success"
        return state
