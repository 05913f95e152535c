from langgraph.checkpoint.memory import MemorySaver
from langgraph.graph import END, START, StateGraph

from nodalparity.components.construction_check import ConstructionNodes
from nodalparity.components.parity_scan import ParityScanNodes
from nodalparity.utils.logger import get_logger
from nodalparity.utils.state import ConstructionState, ParityScanState

logger = get_logger("main_pipeline")


def _failure_router(next_node: str, phase: str):
    def router(state) -> str:
        if state.get("step_status") == "failed":
            logger.error(f"🛑 Phase failure detected in {phase}: {state.get('step_error')}. Terminating.")
            return END
        return next_node
    return router


def parity_scan_graph():
    """
    One eigenspace per invocation:

    1. Resolve the eigenspace
    2. Anti-symmetry vector for the torus regime
    3. Exact check of the vector on the basis
    4. Random eigenfunctions: count, parity, domain pairing
    """
    logger.info("Initializing Parity Scan Graph")
    nodes = ParityScanNodes()
    workflow = StateGraph(ParityScanState)

    workflow.add_node("scan_resolve_eigenspace", nodes.resolve_eigenspace)
    workflow.add_node("scan_compute_vector", nodes.compute_vector)
    workflow.add_node("scan_verify_basis", nodes.verify_basis)
    workflow.add_node("scan_check_functions", nodes.check_functions)

    workflow.add_edge(START, "scan_resolve_eigenspace")
    for source, target in (
        ("scan_resolve_eigenspace", "scan_compute_vector"),
        ("scan_compute_vector", "scan_verify_basis"),
        ("scan_verify_basis", "scan_check_functions"),
    ):
        workflow.add_conditional_edges(source, _failure_router(target, "Parity Scan"), {target: target, END: END})
    workflow.add_edge("scan_check_functions", END)

    logger.info("✨ Parity scan graph compiled.")
    return workflow.compile(checkpointer=MemorySaver())


def construction_graph():
    """
    One (m, n, k, eps) per invocation:

    1. Build v_eps on its torus
    2. Stabilised count, half-period symmetry, negative area
    3. xi-hyperbola residual and branch quadrants (k = 2)
    4. Reflection symmetries
    """
    logger.info("Initializing Construction Graph")
    nodes = ConstructionNodes()
    workflow = StateGraph(ConstructionState)

    workflow.add_node("construction_build", nodes.build)
    workflow.add_node("construction_count", nodes.count)
    workflow.add_node("construction_geometry", nodes.geometry)
    workflow.add_node("construction_symmetry", nodes.symmetry)

    workflow.add_edge(START, "construction_build")
    for source, target in (
        ("construction_build", "construction_count"),
        ("construction_count", "construction_geometry"),
        ("construction_geometry", "construction_symmetry"),
    ):
        workflow.add_conditional_edges(source, _failure_router(target, "Construction"), {target: target, END: END})
    workflow.add_edge("construction_symmetry", END)

    logger.info("✨ Construction graph compiled.")
    return workflow.compile(checkpointer=MemorySaver())
