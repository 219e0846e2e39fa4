"""Hot-loop kernels with a compiled core and a numpy fallback.

The compiled extension is used when it imports; set ``MAXCUT_Q2_BACKEND=python``
to force the fallback. Both backends expose:

``cost_diagonal(n, src, dst, w, start=0, count=None)``
    Cut value of every basis index in ``[start, start + count)``.
``apply_phase(psi, cost, gamma)``
    ``psi *= exp(-i * gamma * cost)`` in place.
``apply_mixer(psi, n, beta)``
    ``exp(-i * beta * X)`` on every qubit, in place.
``one_exchange(indptr, indices, weights, spins, tol)``
    First-improvement single-flip local search on ``spins`` (int8, in place).
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active one)."""
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {available_backends()}") from None


def _select():
    wanted = os.environ.get("MAXCUT_Q2_BACKEND", "").strip().lower()
    if wanted:
        return get_backend(wanted)
    return _ckernels if _ckernels is not None else _pykernels


_active = _select()
BACKEND = _active.NAME

cost_diagonal = _active.cost_diagonal
apply_phase = _active.apply_phase
apply_mixer = _active.apply_mixer
one_exchange = _active.one_exchange
