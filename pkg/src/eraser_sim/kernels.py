"""Backend selection for the per-pair kernels.

``ERASER_SIM_BACKEND=numpy`` forces the pure-numpy path; otherwise numba is used
when it imports. ``ERASER_SIM_THREADS`` caps the worker count for either
backend. Neither variable changes any result: kernels are elementwise over pair
indices and every reduction happens afterwards, in numpy, on the full array.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType

import numpy as np

from . import _numpy_kernels as _np_k
from ._numpy_kernels import (  # noqa: F401
    ERASER,
    HIT_D1,
    HIT_D2,
    HIT_D3,
    HIT_D4,
    I10,
    I21,
    I22,
    I23,
    I24,
    LOST,
    N_COLS,
    R01,
    R02,
    R03,
    R04,
    WHICHWAY_A,
    WHICHWAY_B,
    seed_key,
)

try:
    from . import _numba_kernels as _nb_k
except ImportError:  # numba missing or broken
    _nb_k = None

# Below this many pairs the numpy path does not bother splitting work.
_MIN_CHUNK = 16384


def available_backends() -> tuple[str, ...]:
    return ("numpy", "numba") if _nb_k is not None else ("numpy",)


def backend_name() -> str:
    requested = os.environ.get("ERASER_SIM_BACKEND", "").strip().lower()
    if requested == "numpy" or _nb_k is None:
        return "numpy"
    if requested not in ("", "numba"):
        raise ValueError(f"ERASER_SIM_BACKEND must be 'numba' or 'numpy', got {requested!r}")
    return "numba"


def backend(name: str | None = None) -> ModuleType:
    name = name or backend_name()
    if name == "numba":
        if _nb_k is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _nb_k
    return _np_k


def worker_count() -> int:
    raw = os.environ.get("ERASER_SIM_THREADS", "").strip()
    limit = os.cpu_count() or 1
    if not raw:
        return limit
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"ERASER_SIM_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(n, limit))


def _numba_threads(n: int):
    import numba

    return max(1, min(n, numba.config.NUMBA_NUM_THREADS))


def simulate(key, start: int, n: int, sigma: float, phi: float, psi: float, tau: float,
             sign: float, mode: int, name: str | None = None):
    """Per-pair values (n, 9) and outcome codes for indices ``start .. start+n-1``."""
    name = name or backend_name()
    workers = worker_count()
    key = np.uint64(key)
    if name == "numba":
        import numba

        previous = numba.get_num_threads()
        numba.set_num_threads(_numba_threads(workers))
        try:
            return _nb_k.simulate(key, start, n, sigma, phi, psi, tau, sign, mode)
        finally:
            numba.set_num_threads(previous)

    if workers == 1 or n < 2 * _MIN_CHUNK:
        return _np_k.simulate(key, start, n, sigma, phi, psi, tau, sign, mode)
    bounds = np.linspace(0, n, min(workers, n // _MIN_CHUNK) + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(
            lambda lo_hi: _np_k.simulate(key, start + lo_hi[0], lo_hi[1] - lo_hi[0],
                                         sigma, phi, psi, tau, sign, mode),
            zip(bounds[:-1], bounds[1:]),
        ))
    return (np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]))


def draw_pairs(key, start: int, n: int, sigma: float, name: str | None = None):
    return backend(name).draw_pairs(np.uint64(key), start, n, sigma)


def pair_values(delta_f, eta, zeta_s, zeta_id, theta_id, phi, psi, tau, sign,
                name: str | None = None):
    arrays = [np.ascontiguousarray(a, dtype=np.float64)
              for a in (delta_f, eta, zeta_s, zeta_id, theta_id)]
    return backend(name).pair_values(*arrays, float(phi), float(psi), float(tau), float(sign))
