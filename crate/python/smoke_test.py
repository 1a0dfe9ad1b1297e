"""Smoke test for the Python bindings.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math
import os
import tempfile

import rearrange_py as rp


def main():
    u = rp.Grid.sample("max(0, 1 - 16*((x1-0.5)^2 + (x2-0.5)^2))", h=1 / 64)
    assert u.dim == 2 and len(u) == 64 * 64
    assert abs(u.measure - 1.0) < 1e-12

    p = u.decreasing_rearrangement()
    assert all(a >= b for a, b in zip(p.values, p.values[1:]))
    for t in (0.0, 0.25, 0.5, 0.9):
        assert p.distribution(t) == u.distribution(t)
    assert abs(p.lp_norm(2) - u.lp_norm(2)) < 1e-12

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "u.rgrid")
        u.write(path)
        assert rp.Grid.read(path).values == u.values

    r = rp.verify(u, "1.1")
    assert r.verdict == "holds", r
    assert 0.8 < r.ratio() <= 1.0

    c = rp.Grid.sample("cos(pi*x1)", h=1 / 64)
    q, _ = rp.search_constants(c)
    assert 0 < q
    local = rp.verify(c, "2.1", eps=0.1, q=q)
    assert local.verdict == "holds", local
    orl = rp.verify(c, "orlicz-local", eps=0.1, q=q, nfunc="tag=p-log p=1")
    assert orl.name == "orlicz.local" and orl.verdict == "holds", orl

    quad = rp.verify(u, "orlicz-global", nfunc="tag=power-p p=2")
    energy = rp.verify(u, "1.1")
    assert abs(quad.lhs - math.sqrt(energy.lhs)) < 1e-6 * quad.lhs

    t = rp.counterexample(2)
    assert abs(t["slope"][0] - math.pi ** 2) < 0.02 * math.pi ** 2

    try:
        rp.verify(u, "9.9")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown tag accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
