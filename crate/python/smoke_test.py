"""Smoke test for the logbehave_py extension.

Build first:
    cargo build --release -p logbehave-python --features extension-module
then run:
    python3 python/smoke_test.py

If the module is not installed, the built library is copied next to a
temporary import path under the name Python expects.
"""

import json
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import logbehave_py

        return logbehave_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = os.path.join(ROOT, "target", profile, "liblogbehave_py.so")
        if os.path.exists(lib):
            tmp = tempfile.mkdtemp()
            shutil.copy(lib, os.path.join(tmp, "logbehave_py.so"))
            sys.path.insert(0, tmp)
            import logbehave_py

            return logbehave_py
    sys.exit("logbehave_py not found; build it with cargo first")


def main():
    lb = load()

    assert lb.eval("a", 1, 5) == [(1, "-1"), (2, "1"), (3, "9"), (4, "61"), (5, "587")]
    assert lb.char_poly("b") == "x^3 - 35x^2 + 35x - 1"

    exact = sorted(r[1] for r in lb.roots([-1, 35, -35, 1]))
    assert exact == ["1", "17 + 12*sqrt(2)", "17 - 12*sqrt(2)"], exact

    assert lb.verify_recurrence("b", 1, 100).holds

    bad = lb.certify_ratio("a", 2, 60)
    assert not bad.holds and bad.first_violation == (2, "-20/9"), bad
    assert lb.certify_ratio("a", 3, 60).holds
    assert lb.certify_nth_root("b", 3, 80, mode="log").holds

    cls = lb.classify("a", 1, 200)
    assert json.loads(cls.to_json())["verdict"] == {"kind": "threshold", "n": 3}

    c, alpha, beta, window, r, flavor = lb.fit_puiseux("a", 1, 400)
    assert window == (101, 400) and abs(alpha - 2) < 0.2 and abs(c - 4.5) < 0.45
    assert (r, flavor) == (1, "log-convex")
    assert lb.r_order(-1.0, 1.0, 2.0) == (2, "log-concave")

    bounds = lb.audit_bounds("b", 1, 40)
    assert bounds.passed and 1 in json.loads(bounds.to_json())["details"]["upper_violations"]

    exact_a, formula, err = lb.apery_asymptotic(100)
    assert 0 < err * 100**2 < 0.1

    code, out, _ = lb.run_cli(["char-poly", "--seq", "a"])
    assert code == 0 and out.splitlines()[-1] == "x^3 - 35x^2 + 35x - 1"
    code, _, _ = lb.run_cli(["certify-ratio", "--seq", "a", "--range", "2..20"])
    assert code == 2

    try:
        lb.eval("nope", 1, 3)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown sequence accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
