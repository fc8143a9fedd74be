"""Smoke test for the char2py extension module."""

import char2py


def main():
    names, gens = char2py.gamma_generators()
    assert names == ["w", "v2", "v1", "y", "u2", "u1"], names
    assert len(gens) == 6
    assert "y^2*u1 + v1^2" in gens

    p = char2py.Polynomial("x^2*y + 0x3*y + 1", ["x", "y"])
    q = char2py.Polynomial("x + y", ["x", "y"])
    assert str(p + p) == "0"
    assert (p * q).eval([1, 0]) == 1
    assert str(p.derivative(0)) == "0"

    a = char2py.AlternatingMatrix([[1, 2, 3], [4, 5], [7]])
    assert a.size == 4
    pf = a.pfaffian()
    # 1*7 + 2*5 + 3*4 in GF(2^16)
    assert pf == 1, pf
    # the 2x2 alternating matrix with entry pf has determinant pf^2
    assert a.det() == char2py.AlternatingMatrix([[pf]]).det()
    t, r = a.normal_form()
    assert len(t) == 4 and 2 * r == a.rank()

    jet = char2py.SingularJet("vars: x1, x2, xi1, xi2\nx1*x2 + xi1^3 + xi2^3\n")
    assert jet.n == 4 and jet.hessian_rank() == 2
    rep = jet.classify()
    assert rep["typeA"] and rep["typeC"] and rep["typeR"], rep
    assert jet.oracle()["typeR"]

    p2 = {"H^2": 1, "c1*H": 3, "c1^2": 9, "c2": 3}
    assert char2py.deg_r(2, p2, 4)["degree"] == 36
    assert char2py.divisibility_check(2, p2)["value"] == 12
    assert char2py.degree_class(2) == "6*lambda^2 - 6*c1*lambda + c1^2 + c2"

    basis = char2py.groebner_basis("vars: x, y\nx^2 + y\nx*y\n", "lex")
    assert basis, basis

    data = '{"n": 4, "m": 7, "phi0": "x1*x2 + xi1^3 + xi2^3 + x1*xi1^2",' \
           ' "aux": ["xi1^2 + x1*xi2 + xi2^3", "xi2^2 + xi1*xi2 + x2*xi1 + xi1^3"]}'
    recs = char2py.section_trials(data, trials=2, seed=3)
    assert len(recs) == 2 and all(r["cusp"] and not r["violations"] for r in recs)

    report = char2py.selftest(seed=5, trials=3)
    assert report["passed"] and len(report["suites"]) == 12

    try:
        char2py.Polynomial("x + *y", ["x", "y"])
    except ValueError as e:
        assert "column" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("char2py smoke test passed (pfaffian sample %d)" % pf)


if __name__ == "__main__":
    main()
