"""Smoke test for the Python bindings.

Build and install first:
    maturin develop -m crates/python/Cargo.toml
"""

import json
from fractions import Fraction
from math import factorial
from pathlib import Path

import gamma_mirror_py as gm

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    q = gm.Model.projective_space(4)
    assert (q.dim, q.cy_dim, q.rank) == (4, 3, 1)
    assert q.mori_basis == [[-5, 1, 1, 1, 1, 1]]
    assert q.coupling([1, 1, 1]) == "5"
    assert q.integral("c2*J1") == "50"
    assert q.integral("c3") == "-200"
    assert q.derivative([1, 1]) == "20*zeta2"

    periods = q.period_coefficients(6)
    for m in range(7):
        want = factorial(5 * m) // factorial(m) ** 5
        assert periods[str(m)] == str(want), (m, periods[str(m)])

    assert gm.gamma_polynomials(3, calabi_yau=True) == ["zeta2*c2", "zeta3*c3"]

    bicubic = gm.Model.from_file(str(FIXTURES / "p2xp2_bicubic.toml"))
    assert bicubic.couplings()["1,1,2"] == "3"
    report = bicubic.verify()
    assert report.all_exact, report.failures()
    assert json.loads(report.to_json())["all_exact"] is True

    rows = gm.grassmannian(20)
    assert len(rows) == 21 and all(ok for _, _, ok in rows)
    assert Fraction(rows[2][1]) == Fraction(5, 2)

    try:
        gm.Model.from_file(str(FIXTURES / "cube.toml"))
    except ValueError as e:
        assert "smooth Fano" in str(e)
    else:
        raise AssertionError("cube should be rejected")

    print(f"ok: {len(report)} bicubic checks exact, quintic periods through m=6")


if __name__ == "__main__":
    main()
