"""Backend selection for the term-dictionary kernels.

The compiled module is used when it was built; otherwise the pure-Python
module is used.  ``BACKEND`` names the active one.  Callers import the
functions from here, never from the backend modules directly.
"""

from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build
    _impl = _pykernels
    BACKEND = "python"

GREVLEX = _pykernels.GREVLEX
LEX = _pykernels.LEX

add = _impl.add
sub = _impl.sub
scale = _impl.scale
mul = _impl.mul
shift_scale = _impl.shift_scale
divides = _impl.divides
compare = _impl.compare
leading_key = _impl.leading_key
normal_form = _impl.normal_form
sort_key = _pykernels.sort_key


def backends():
    """Return the available kernel modules keyed by name."""
    out = {"python": _pykernels}
    if BACKEND == "compiled":
        out["compiled"] = _impl
    return out


_SWAPPABLE = ("add", "sub", "scale", "mul", "shift_scale", "divides", "compare", "leading_key", "normal_form")


@contextmanager
def use_backend(name: str):
    """Temporarily route the kernel functions through another backend."""
    avail = backends()
    if name not in avail:
        raise ValueError(f"backend {name!r} not available; have {sorted(avail)}")
    g = globals()
    saved = {k: g[k] for k in _SWAPPABLE}
    try:
        for k in _SWAPPABLE:
            g[k] = getattr(avail[name], k)
        yield avail[name]
    finally:
        g.update(saved)
