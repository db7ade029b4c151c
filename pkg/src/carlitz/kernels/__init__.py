"""Backend dispatch for the table-driven F_q kernels.

The environment variable CARLITZ_BACKEND selects the implementation:

    numba   jitted loops (error if numba is missing)
    numpy   pure-numpy reference implementation
    auto    numba when importable, numpy otherwise (default)

Both backends expose the same functions and must agree bit-for-bit;
tests/test_kernels.py enforces that on random inputs.
"""

import os

_choice = os.environ.get("CARLITZ_BACKEND", "auto").strip().lower()

if _choice == "numpy":
    from . import numpy_backend as _impl
elif _choice == "numba":
    from . import numba_backend as _impl
elif _choice in ("auto", ""):
    try:
        from . import numba_backend as _impl
    except ImportError:
        from . import numpy_backend as _impl
else:
    raise RuntimeError(
        f"CARLITZ_BACKEND={_choice!r} not recognized "
        "(expected numba, numpy, or auto)"
    )

rref = _impl.rref
matmul = _impl.matmul
conv = _impl.conv
tower_conv = _impl.tower_conv
poly_divmod = _impl.poly_divmod


def backend_name() -> str:
    return _impl.NAME


def warmup(spec=None):
    """Trigger jit compilation on tiny inputs so timings stay honest."""
    import numpy as np

    from ..field import field

    spec = spec or field(2)
    add, mul = spec.add_table, spec.mul_table
    neg, inv = spec.neg_table, spec.inv_table
    m = np.array([[1, 0], [1, 1]], dtype=np.int16)
    rref(m, add, mul, neg, inv)
    matmul(m, m, add, mul)
    v = np.array([1, 1], dtype=np.int16)
    conv(v, v, add, mul)
    red = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.int16)
    a2 = np.array([[1, 0], [0, 1]], dtype=np.int16)
    tower_conv(a2, a2, add, mul, red)
    poly_divmod(np.array([1, 0, 1], dtype=np.int16), v, add, mul, neg, inv)
