import json
import os
import subprocess
import sys

import numpy as np
import pytest

from abeljacobi import _kernels_py, kernels

try:
    from abeljacobi import _kernels
except ImportError:  # extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def _inputs(seed):
    rng = np.random.default_rng(seed)
    roots = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    xs = 3 + rng.standard_normal(16) + 1j * rng.standard_normal(16)
    dxw = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    x0 = complex(xs[0])
    return roots, xs, dxw, x0, complex(np.sqrt(np.prod(x0 - roots)))


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_fallback_continuation_is_square_root():
    roots, xs, _, x0, y0 = _inputs(0)
    y = y0 * _kernels_py.continuation_ratio(xs, roots, x0)
    assert np.allclose(y * y, np.prod(xs[:, None] - roots, axis=1))


@needs_ext
@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    roots, xs, dxw, x0, y0 = _inputs(seed)
    assert np.allclose(_kernels.continuation_ratio(xs, roots, x0),
                       _kernels_py.continuation_ratio(xs, roots, x0), rtol=1e-14)
    assert np.allclose(_kernels.piece_integrals(xs, dxw, roots, x0, y0, 3),
                       _kernels_py.piece_integrals(xs, dxw, roots, x0, y0, 3), rtol=1e-13)
    assert _kernels.arg_increment(x0, complex(xs[3]), roots) == \
        pytest.approx(_kernels_py.arg_increment(x0, complex(xs[3]), roots), rel=1e-13)


@needs_ext
def test_crossings_agree():
    t = np.linspace(0, 2 * np.pi, 301)
    a = np.exp(1j * t)
    b = 0.5 + 0.8 * np.exp(1j * (t + 0.1))
    ra = _kernels.segment_crossings(a[:-1], a[1:], b[:-1], b[1:], 1e-9)
    rb = _kernels_py.segment_crossings(a[:-1], a[1:], b[:-1], b[1:], 1e-9)
    ka = sorted(zip(ra[0].tolist(), ra[1].tolist()))
    kb = sorted(zip(rb[0].tolist(), rb[1].tolist()))
    assert ka == kb and len(ka) == 2


def test_pure_python_pipeline_matches():
    code = ("import json, abeljacobi as aj, numpy as np;"
            "P = aj.period_matrices(aj.new_curve([-1, 0, 0, 0, 0, 1]));"
            "v = np.concatenate([P.A.ravel(), P.B.ravel()]);"
            "print(json.dumps([aj.BACKEND, v.real.tolist(), v.imag.tolist()]))")
    outs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, ABELJACOBI_PURE_PYTHON=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, re, im = json.loads(r.stdout)
        outs[backend] = np.array(re) + 1j * np.array(im)
    assert "python" in outs
    if len(outs) == 2:
        assert np.allclose(outs["python"], outs["cython"], atol=1e-12)
