"""Levi algebras, the q-transfer, the embeddings j^+/j^-."""

from propiwahori.hecke import HeckeAlgebra
from propiwahori.levi import LeviAlgebra, run_all_levi
from propiwahori.presets import load_preset


def ambient(name="gl3", p=3):
    pre = load_preset(name, p=p)
    return HeckeAlgebra(pre.datum, pre.field)


def test_levi_sweeps_gl2():
    H = ambient("gl2", 5)
    checks = run_all_levi(H)
    bad = [c for c in checks if c["status"] != "pass"]
    assert not bad, bad[:3]


def test_levi_sweeps_gl3():
    H = ambient("gl3", 3)
    checks = run_all_levi(H)
    bad = [c for c in checks if c["status"] != "pass"]
    assert not bad, bad[:3]


def test_q_map_gl3_middle_levi():
    # q_{M,s_0} maps to the single ambient class variable
    H = ambient("gl3", 3)
    levi = LeviAlgebra(H, {0})
    e = levi.sub.saff[0]
    exps = levi.sub.q_exponents(e.lift)
    assert sum(exps) == 2 and max(exps) == 2  # one inversion, ambient class


def test_torus_levi_group_algebra():
    # Theta empty: all T basis elements are invertible units (length 0)
    H = ambient("gl2", 5)
    levi = LeviAlgebra(H, frozenset())
    d = H.dat
    x = d.from_lattice((3, -2))
    y = d.from_lattice((-1, 5))
    assert levi.mul(levi.T(x), levi.T(y)) == levi.T(d.mul(x, y))
    inv = levi.inv_basis(x)
    assert levi.mul(levi.T(x), inv) == levi.one


def test_j_embed_cones_enforced():
    H = ambient("gl2", 5)
    levi = LeviAlgebra(H, frozenset())
    d = H.dat
    dominant = d.from_lattice((2, 0))  # T-negative
    h = levi.T(dominant)
    assert levi.j_embed("-", h) == H.t_star(dominant)
    import pytest

    with pytest.raises(ValueError):
        levi.j_embed("+", h)
