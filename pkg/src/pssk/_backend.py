"""Select the compiled inner loops when the extension is built, else the fallback."""
from . import _pycore

try:
    from . import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _pycore}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

NAME = "compiled" if _compiled is not None else "python"
_active = BACKENDS[NAME]


def active():
    return _active


def use(name: str) -> None:
    """Switch the process-wide backend (``"compiled"`` or ``"python"``)."""
    global _active, NAME
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}")
    _active = BACKENDS[name]
    NAME = name


def pssk_sum(F, G, sigma):
    return _active.pssk_sum(F, G, sigma)


def hungarian(cost):
    return _active.hungarian(cost)


def jacobi_eigenvalues(A, rtol=1e-12, max_sweeps=100):
    return _active.jacobi_eigenvalues(A, rtol, max_sweeps)
