"""Smoke test for the finmarkov_py extension.

Build first, then run from the repository root:

    cargo build --release -p finmarkov-py --features extension-module
    python3 python/smoke_test.py
"""

import json
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "crates", "cli", "fixtures")


def load_module():
    try:
        import finmarkov_py  # noqa: F401
    except ImportError:
        built = os.path.join(ROOT, "target", "release", "libfinmarkov_py.so")
        if not os.path.exists(built):
            sys.exit("extension not built; run: cargo build --release -p finmarkov-py --features extension-module")
        staging = tempfile.mkdtemp()
        shutil.copy(built, os.path.join(staging, "finmarkov_py.so"))
        sys.path.insert(0, staging)
    import finmarkov_py

    return finmarkov_py


def fixture(fm, name):
    with open(os.path.join(FIXTURES, name)) as f:
        return fm.Kernel.from_json(f.read())


def main():
    fm = load_module()

    e = fixture(fm, "e_static.json")
    report = fm.classify(e)
    assert report["idempotent"] and report["static"] and report["balanced"], report
    assert not report["strong"], report

    s = fm.blackwell_split(e)
    assert s["pi"].compose(s["iota"]) == fm.Kernel.identity("stoch", s["T"])
    assert s["iota"].compose(s["pi"]) == e
    assert s["classes"] == [["1"], ["2"]] and s["transient"] == ["3"], s

    upset = fixture(fm, "multi_upset.json")
    assert not fm.classify(upset)["balanced"]
    assert fm.search_split(upset, 2) is None
    cs = fm.cauchy_schwarz(upset, upset, upset)
    assert cs["antecedent"] and not cs["implication_ok"], cs

    for name in ("e_strong.json", "e_static.json", "e_balanced4.json"):
        laws = fm.envelope_check(fixture(fm, name))
        assert all(laws.values()), (name, laws)

    # Round trip and exact arithmetic through JSON.
    again = fm.Kernel.from_json(e.to_json())
    assert again == e and json.loads(e.to_json())["matrix"][0][2] == "1/2"

    labels, inclusion, factorization = fm.support(e)
    assert labels == ["1", "2"] and inclusion.compose(factorization) == e
    assert fm.abs_cont(e, e) and fm.ase(e, e, e)
    assert fm.upsilon(e).kind == "multi"
    assert all(fm.upsilon_check(e, e).values())

    joint = e.tensor(fm.Kernel.identity("stoch", ["u"]))
    c = fm.conditional(fm.Kernel.copy("stoch", ["a", "b"]), 2)
    assert c.dom == ["(a,a)", "(a,b)", "(b,a)", "(b,b)"] and c.cod == ["a", "b"], c
    assert joint.cod == ["(1,u)", "(2,u)", "(3,u)"]

    try:
        fm.classify(fm.Kernel.from_json('{"kind":"stoch","dom":["a"],"cod":["a","b"],"matrix":[[1],[0]]}'))
    except fm.FinMarkovError:
        pass
    else:
        raise AssertionError("non-endomorphism accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
