import pytest

from fpp import surfacex as sx


@pytest.fixture(scope="module")
def data():
    return sx.load_x()


def test_load_and_verify(data):
    v = sx.verify(data)
    assert v.ok, v
    assert len(data.singular_points) == 6 and len(data.equations) == 9


def test_d_is_even_invariant(data):
    assert sx._act(data.d, sx.sigma_action()) == data.d
    assert sx._act(data.d, sx.iota_action()) == data.d


def test_jacobian_rank_four(data):
    assert [sx.jacobian_rank_at(pt, data=data) for pt in data.singular_points] == [4] * 6


def test_checksum_guards_default_file(monkeypatch):
    monkeypatch.setattr(sx, "raw_text", lambda: "eq1 = W0\n")
    with pytest.raises(sx.DataCorrupt):
        sx.load_x()


def test_symmetry_break_is_corrupt():
    bad = sx.raw_text().replace("(1556072 - 378504 s15 )W5 W6", "(1556072 - 378505 s15 )W5 W6", 1)
    with pytest.raises(sx.DataCorrupt):
        sx.load_x(bad)


def test_coefficient_typo_is_corrupt():
    with pytest.raises(sx.DataCorrupt, match="does not vanish"):
        sx.load_x(sx.raw_text().replace("799064 W1^2", "799065 W1^2", 1))


def test_eq4_constant_is_corrupt():
    with pytest.raises(sx.DataCorrupt):
        sx.load_x(sx.raw_text().replace("-98948224478443260", "-98948224478443261", 1))


def test_ideal_stable_and_random_point():
    assert sx.ideal_is_stable(17)
    pt = sx.random_point_on_x(17)
    eqs = sx.reduced_equations(17)
    assert all(int(f.evaluate(dict(zip(f.vars, pt)))) % 17 == 0 for f in eqs)


def test_export_roundtrip(data):
    from fpp.multipoly import read_poly_text

    pf = read_poly_text(sx.export(data))
    assert pf.polys[:9] == data.equations
