import math
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np

from nodalparity.components.antisym import (
    TranslationVector,
    antisymmetry_vector,
    compose_action,
    pair_domains,
    pairing_resolution,
    regime_of,
    verify_by_sampling,
    verify_on_basis,
)
from nodalparity.components.nodal import count_nodal_domains, decompose_at
from nodalparity.components.spectra import (
    Eigenfunction,
    Eigenspace,
    TorusShape,
    eigenspace_for,
    eigenspace_of_index,
    random_eigenfunction,
)
from nodalparity.config.config import CountConfig, NumericsConfig
from nodalparity.config.constants import ExitCode
from nodalparity.errors import AntisymmetryError, NodalParityError
from nodalparity.schema.schema import vector_from_texts
from nodalparity.utils.logger import get_logger
from nodalparity.utils.state import ParityScanState
from nodalparity.utils.utils import fraction_text

logger = get_logger("ParityScanNodes")


@lru_cache(maxsize=256)
def _eigenspace(torus_spec: str, eigenvalue: Optional[str], index: Optional[Tuple[int, int]]) -> Tuple[TorusShape, Eigenspace]:
    torus = TorusShape.parse(torus_spec)
    if eigenvalue is not None:
        return torus, eigenspace_for(torus, eigenvalue)
    return torus, eigenspace_of_index(torus, *index)


def _load(state: ParityScanState) -> Tuple[TorusShape, Eigenspace]:
    index = tuple(state["index"]) if state.get("index") else None
    return _eigenspace(state["torus_spec"], state.get("eigenvalue"), index)


def _fail(state: ParityScanState, error: Exception) -> ParityScanState:
    logger.error(f"🛑 {state.get('current_step')}: {error}")
    state.update({
        "step_status": "failed",
        "step_error": str(error),
        "exit_code": getattr(error, "exit_code", ExitCode.VERIFICATION_FAILED),
    })
    return state


def sampling_tolerance(u: Eigenfunction) -> float:
    """Round-off tolerance for |u(x+v) + u(x)|; grows with the coefficient mass and the frequency."""
    return NumericsConfig.SAMPLING_TOLERANCE * max(1.0, u.coefficient_scale()) * (1.0 + math.sqrt(u.eigenvalue))


def check_function(
    u: Eigenfunction,
    v: TranslationVector,
    cfg: CountConfig,
    sample_count: int,
    seed: int,
) -> Dict[str, Any]:
    """Count, parity and pairing for one eigenfunction; a failing pairing raises."""
    result = count_nodal_domains(u, cfg)
    decomp = result.decomposition
    r_pair = pairing_resolution(v, result.resolution)
    if r_pair != result.resolution:
        decomp = decompose_at(u, r_pair, cfg.tau_relative)
    pairing = pair_domains(decomp, v)
    residual = verify_by_sampling(u, v, sample_count, seed)

    even = result.count % 2 == 0
    passed = (
        even
        and decomp.domain_count == result.count
        and pairing.max_discrepancy == 0
        and 2 * len(pairing.pairs) == decomp.domain_count
        and residual <= sampling_tolerance(u)
    )
    return {
        "count": result.count,
        "even": even,
        "resolution": result.resolution,
        "pairs": len(pairing.pairs),
        "max_discrepancy": pairing.max_discrepancy,
        "sampling_residual": residual,
        "status": "passed" if passed else "failed",
    }


class ParityScanNodes:

    # --------------------------------------------------------------------------------------
    # Resolve Eigenspace
    # --------------------------------------------------------------------------------------

    def resolve_eigenspace(self, state: ParityScanState) -> ParityScanState:
        state.update({"current_step": "parity_scan - resolve_eigenspace", "step_status": "pending"})
        try:
            _, space = _load(state)
            state.update({
                "approx": space.approx,
                "multiplicity": space.multiplicity,
                "function_results": [],
                "step_status": "success",
            })
            logger.info(f"Eigenspace λ≈{space.approx:.6g} with multiplicity {space.multiplicity}")
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # Anti-symmetry Vector
    # --------------------------------------------------------------------------------------

    def compute_vector(self, state: ParityScanState) -> ParityScanState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "parity_scan - compute_vector", "step_status": "pending"})
        try:
            torus, space = _load(state)
            regime, _ = regime_of(torus)
            v = antisymmetry_vector(space, torus)
            state.update({
                "regime": regime,
                "vector": {"v1_over_pi": fraction_text(v.v1_over_pi), "v2_over_rho_pi": fraction_text(v.v2_over_rho_pi)},
                "step_status": "success",
            })
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # Exact Basis Check
    # --------------------------------------------------------------------------------------

    def verify_basis(self, state: ParityScanState) -> ParityScanState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "parity_scan - verify_basis", "step_status": "pending"})
        try:
            _, space = _load(state)
            v = vector_from_texts(state["vector"])
            verify_on_basis(space, v)
            if not compose_action(space, v, 2).is_identity():
                raise AntisymmetryError("translation by 2v is not the identity")
            state.update({"exact_check": True, "step_status": "success"})
        except AntisymmetryError as e:
            state["exact_check"] = False
            _fail(state, e)
        except NodalParityError as e:
            _fail(state, e)
        return state

    # --------------------------------------------------------------------------------------
    # Random Eigenfunctions (count, parity, pairing)
    # --------------------------------------------------------------------------------------

    def check_functions(self, state: ParityScanState) -> ParityScanState:
        if state.get("step_status") == "failed":
            return state

        state.update({"current_step": "parity_scan - check_functions", "step_status": "pending"})
        torus, space = _load(state)
        v = vector_from_texts(state["vector"])
        cfg = CountConfig(**state["count_config"])

        results = []
        for i in range(state["functions"]):
            rng = np.random.default_rng([state["seed"], state["position"], i])
            u = random_eigenfunction(space, torus, rng)
            try:
                record = check_function(u, v, cfg, state["sample_count"], state["seed"])
            except NodalParityError as e:
                logger.warning(f"⚠️ λ≈{space.approx:.6g}, function {i}: {e}")
                record = {"status": "failed", "error": str(e)}
            record["index"] = i
            results.append(record)

        state["function_results"] = results
        failed = [r["index"] for r in results if r["status"] != "passed"]
        if failed:
            state.update({
                "step_status": "failed",
                "step_error": f"functions {failed} failed the parity check",
                "exit_code": ExitCode.VERIFICATION_FAILED,
            })
            logger.error(f"🛑 λ≈{space.approx:.6g}: {len(failed)} of {len(results)} functions failed")
        else:
            state["step_status"] = "success"
            logger.info(f"✅ λ≈{space.approx:.6g}: {len(results)} functions even and paired")
        return state
