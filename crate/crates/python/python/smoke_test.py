"""Smoke test for the mldegree extension module.

Build and install first, e.g. `maturin develop --release` or
`pip install crates/python`, then run `python crates/python/python/smoke_test.py`.
"""

from fractions import Fraction

import mldegree


def main():
    assert mldegree.kappa(3) == 12
    points = list(mldegree.fixed_points(3))
    assert len(points) == 12
    assert points[0].blocks == [[1], [2], [3]]
    assert points[0].compass() == [
        [1, -1, 0],
        [1, 0, -1],
        [0, 1, -1],
        [2, -2, 0],
        [0, 2, -2],
    ]

    s = mldegree.Subgroup.default(2)
    assert s.weights == [2, 4]
    assert mldegree.validate_subgroup(s)
    assert not mldegree.Subgroup([1, 2, 3]).is_generic()

    p = mldegree.FixedPoint(2, [[1, 2]])
    assert mldegree.contribution(p, 1, 1, s) == Fraction(9)
    assert mldegree.limit_ratio([-4, 8], [-2, -4]) == Fraction(-4)

    assert mldegree.ml_degree(4, 4) == 17
    assert mldegree.ml_degree_row(4) == [1, 3, 9, 17, 21, 21, 17, 9, 3, 1]
    r = mldegree.Subgroup.random(4, seed=7, bound=1000)
    assert mldegree.ml_degree(4, 5, subgroup=r, threads=2) == 21

    assert mldegree.phi_closed_form(0, 4) == Fraction(-1)
    assert mldegree.beta_diagonal(4, 2) == 2
    coeffs = mldegree.interpolate_phi(4, [(n, mldegree.ml_degree(n, 4)) for n in range(3, 7)])
    assert coeffs == [Fraction(-1), Fraction(19, 6), Fraction(-3), Fraction(5, 6)]

    try:
        mldegree.ml_degree(3, 7)
    except ValueError:
        pass
    else:
        raise AssertionError("a out of range should raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
