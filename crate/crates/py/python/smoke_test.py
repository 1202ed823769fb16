"""Smoke test for the clonecalc_py extension module."""

import json

import clonecalc_py as cc


def main():
    md = cc.Modulus(6)
    assert md.primes == [2, 3]

    mul = cc.FnTable.from_callable(md, 2, lambda x: x[0] * x[1])
    square = cc.FnTable.from_callable(md, 1, lambda x: x[0] * x[0])
    assert cc.FnTable.from_json(mul.to_json()) == mul
    assert cc.FnTable.from_zs(md, 1, square.values_zs()) == square

    linear = cc.Clone.from_generators(md, [])
    assert linear.ranks() == [[0, 1, 0], [0, 1, 0, 0]]
    assert linear.member(mul) == (False, None)

    clone = cc.Clone.from_generators(md, [mul])
    yes, cert = clone.member(square)
    assert yes and json.loads(cert)["root"] is not None
    assert linear.leq(clone) and not clone.leq(linear)
    gens = clone.extract_generators()
    assert max(g.arity for g in gens) <= 3
    assert cc.Clone.from_generators(md, gens, 3).equal(clone)
    assert cc.Clone.from_json(clone.to_json()).equal(clone)

    lattice = cc.enumerate_clonoids(2, [3])
    assert len(lattice) == 6 and len(cc.enumerate_clonoids(3, [2])) == 4
    top = lattice[-1]
    assert all(c.leq(top) for c in lattice)
    assert cc.Clone.gamma(0, lattice[0], md).equal(linear)

    report = json.loads(cc.clone_count_bounds(6, [6, 4]))
    assert report["lower"] == 9 and report["upper"] == 2109375
    assert json.loads(cc.pq_bounds(2, 3))["upper"] == 55296
    assert json.loads(cc.run_suite("clonoid-lattice", 42))["passed"]

    try:
        cc.Modulus(4)
    except ValueError as e:
        assert "squarefree" in str(e)
    else:
        raise AssertionError("modulus 4 accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
