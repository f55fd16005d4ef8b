"""Smoke test for the dvrdual extension module.

Uses an installed ``dvrdual`` if there is one (``maturin develop`` in
crates/py), otherwise the library cargo left in target/release or
target/debug.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import dvrdual

        return dvrdual
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libdvrdual.so", "libdvrdual.dylib", "dvrdual.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("dvrdual", str(path))
                spec = importlib.util.spec_from_file_location("dvrdual", path, loader=loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                return module
    sys.exit("dvrdual not found: run `cargo build -p dvr-duality-py` first")


def main():
    dd = load()

    z2 = dd.Ring("mode=mixed,p=2,e=1,prec=8")
    assert (z2.p, z2.q, z2.precision) == (2, 2, 8)
    assert not z2.equal_characteristic

    m = dd.Module("[1,2];f=0")
    assert m.cardinality(z2) == 8
    elems = m.elements(z2)
    phis = m.dual_elements(z2)
    assert len(elems) == len(phis) == 8

    # the pairing separates points and double dual is the identity
    for x in elems:
        values = [dd.pair(z2, m, phi, x) for phi in phis]
        assert any(v["num"] != [0] * v["n"] for v in values) or x == elems[0]
        assert dd.double_dual(z2, m, x) == x

    out = dd.snf({"ring": z2.spec, "rows": [[2, 2], [2, 4]]})
    assert out["module"] == "[1,1];f=0", out

    f2 = dd.Ring("mode=equal,p=2,e=1,prec=8")
    b = dd.Module("[4]")
    assert all(dd.square(f2, 2, 4, phi) for phi in b.dual_elements(f2))

    t = dd.ell(f2, {"coeffs": [1, 0, 1]})
    assert t == {"n": 3, "num": [1, 0, 1]}, t
    assert dd.ell_inv(f2, t) == {"coeffs": [1, 0, 1]}

    assert dd.torsion_count(dd.Ring("mode=mixed,p=5,e=1,prec=8"), 3) == (125, 125)

    assert dd.zdelta_accepts(-1, 1) and not dd.zdelta_accepts(-1, 2)
    gauss = dd.ZDeltaRing(-1, 0)
    assert gauss.mul((1, 1), (1, -1)) == (2, 0)
    assert gauss.norm((3, 4)) == 25

    try:
        dd.Ring("mode=mixed,p=4,e=1,prec=8")
    except ValueError:
        pass
    else:
        raise AssertionError("p=4 accepted")

    report = dd.verify({"suites": ["arith.ring_laws", "flood.zdelta_predicate"]})
    assert report["status"] == "pass", report
    assert [e["name"] for e in report["entries"]] == ["arith.ring_laws", "flood.zdelta_predicate"]

    print("python smoke test passed")


if __name__ == "__main__":
    main()
