"""Smoke test for the starksic extension module."""

import json

import starksic


def main():
    f = starksic.Field(5)
    assert f.radicand == 3 and f.zauner_unit == "2 + 1*sqrt(3)", f
    assert f.minimal_congruent_unit() == "26 + 15*sqrt(3)"

    g = starksic.RayClassGroup(23)
    assert g.invariants == [2, 176], g
    assert starksic.RayClassGroup(5).order == 8

    t = starksic.zeta_table(5, 40)
    assert len(t.alpha) == 8 and t.antisymmetry_error < 1e-35

    r = starksic.recognize(5)
    assert r.f == starksic.Polynomial.fixture("f5")
    assert r.g == starksic.Polynomial.fixture("g5")
    assert r.f.is_palindromic() and r.g.degree == 8

    cert = starksic.fiducial(5)
    assert cert.valid and cert.e_max < 1e-40, cert
    assert json.loads(cert.json)["valid"] is True
    norm = sum(a * a + b * b for a, b in cert.vector_complex())
    assert abs(norm - 1) < 1e-12

    v = starksic.verify(5, starksic.fixture_text("v5"))
    assert v.valid and v.e_max < 1e-17
    bad = starksic.verify(5, "1\n0\n0\n0\n0\n")
    assert not bad.valid

    try:
        starksic.Field(7)
    except ValueError:
        pass
    else:
        raise AssertionError("d = 7 accepted")

    code, lines = starksic.run_cli(["group", "--d", "11"])
    assert code == 0 and json.loads(lines[0])["result"]["invariants"] == [40]

    print("smoke test passed")


if __name__ == "__main__":
    main()
