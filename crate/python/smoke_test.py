"""Smoke test for the chaoprop extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`
or `pip install ./crates/python`.
"""

import chaoprop as cp

EQ_NEQ = """\
domain 1 int [0..1]
domain 2 int [0..1]
constraint eq scheme (1,2) tuples {(0,0),(1,1)}
constraint ne scheme (1,2) tuples {(0,1),(1,0)}
"""

LINEQ = """\
domain 1 int [0..9]
domain 2 int [1..8]
constraint c1 scheme (1,2) lineq 3*x1 - 5*x2 = 4
"""


def main():
    p = cp.Csp.from_text(EQ_NEQ)
    assert p.is_arc_consistent()
    assert p.solutions() == []
    r = p.achieve("arc", mode="ciiq", strategy="seeded", seed=3)
    assert r.outcome == "converged" and r.csp.to_text() == p.to_text()

    q = cp.Csp.from_text(LINEQ)
    r = q.run(["lineq@c1"])
    assert (r.csp.domain(1), r.csp.domain(2)) == ("[3..8]", "[1..4]"), r.csp.to_text()
    assert q.equivalent(r.csp)

    assert cp.scheme_union([[3, 7, 2], [4, 3, 7, 5], [3, 5, 8]]) == [3, 7, 2, 4, 5, 8]
    assert cp.linear_eq_narrow([3, -5], 4, [(0, 9), (1, 8)]) == [(3, 9), (1, 4)]
    assert cp.cutting_plane([([2], 1)], ["1/2"]) == ([1], 0)
    try:
        cp.cutting_plane([([1, 1], 1), ([1, -1], 0)], ["1/2", "1/3"])
    except cp.ChaopropError as e:
        print("rejected:", e)
    else:
        raise AssertionError("non-integral cut accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
