"""Kernel lane selection.

The hot loops live twice: once jit-compiled (``_numba_impl``) and once in
plain NumPy/Python (``_numpy_impl``) with identical signatures and outputs.
The environment variable CTL_KERNEL picks the lane:

* ``CTL_KERNEL=numba`` -- require the jit lane (error if numba is missing);
* ``CTL_KERNEL=numpy`` -- force the fallback lane;
* unset               -- jit lane when numba imports, fallback otherwise.

``benchmarks/bench_kernels.py`` times the two lanes against each other.
"""
import os
from types import ModuleType

from .errors import ParameterError

KERNEL_ENV = "CTL_KERNEL"

KERNEL_NAMES = (
    "window_first_visits",
    "counter_first_visits",
    "window_pair_first_visits",
    "counter_pair_first_visits",
    "dijkstra_all",
    "pair_graph_components",
    "min_max_to_diagonal",
    "bfs_route",
    "fiber_scan",
)


def load_lane(name: str) -> ModuleType:
    """Import one lane by name ('numba' or 'numpy')."""
    if name == "numba":
        from . import _numba_impl

        return _numba_impl
    if name == "numpy":
        from . import _numpy_impl

        return _numpy_impl
    raise ParameterError(f"unknown kernel lane {name!r} (want 'numba' or 'numpy')")


def _select() -> tuple[str, ModuleType]:
    requested = os.environ.get(KERNEL_ENV)
    if requested is not None:
        return requested, load_lane(requested)
    try:
        return "numba", load_lane("numba")
    except ImportError:
        return "numpy", load_lane("numpy")


ACTIVE_LANE, _impl = _select()

INF64 = _impl.INF64

window_first_visits = _impl.window_first_visits
counter_first_visits = _impl.counter_first_visits
window_pair_first_visits = _impl.window_pair_first_visits
counter_pair_first_visits = _impl.counter_pair_first_visits
dijkstra_all = _impl.dijkstra_all
pair_graph_components = _impl.pair_graph_components
min_max_to_diagonal = _impl.min_max_to_diagonal
bfs_route = _impl.bfs_route
fiber_scan = _impl.fiber_scan
