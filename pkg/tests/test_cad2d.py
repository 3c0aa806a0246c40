"""Decomposition engine tests against hand-computed oracle values.

Cell counts, kept-cell ids and fingerprints for the golden formulas below
were derived by hand (stack-by-stack root isolation and limit tracking)
before the engine existed, then frozen here.
"""

import random
from fractions import Fraction
from functools import lru_cache

import pytest

import corpus
from specta import cad2d, topology
from specta._expr import parse_formula, parse_polynomial
from specta.arith import Polynomial
from specta.cad2d import And, Atom, CadError, Not, Or, UnboundedInput

DISK = "x^2 + y^2 < 1"
DISK_PT = "x^2 + y^2 < 1 OR (x = 1 AND y = 0)"
FAR_PT = "x^2 + y^2 < 1 OR (x = 2 AND y = 0)"
ANNULUS = "4x^2 + 4y^2 > 1 AND x^2 + y^2 < 1"
WHISKER = "x^2 + y^2 <= 1 OR (y = 0 AND x - 1 >= 0 AND x - 2 <= 0)"
ARC = "x y - 1 = 0 AND 2x >= 1 AND x <= 2"
STRIP = "x^2 + y^2 < 1 AND 2x^2 <= 1"
SEGMENT = "x = 0 AND y >= 0 AND y <= 1"
EMPTY = "x^2 + y^2 < 0"

GOLDEN = [DISK, DISK_PT, FAR_PT, ANNULUS, WHISKER, ARC, STRIP, SEGMENT, EMPTY]


@lru_cache(maxsize=None)
def _dec(text):
    return cad2d.decompose(parse_formula(text))


def _m_cells(dec):
    return {c for c in dec.complex.cells if dec.complex.in_m(c)}


# ---------------------------------------------------------------------------
# formulas and point membership


def test_atom_validation():
    x = Polynomial.var("x", ("x", "y"))
    with pytest.raises(CadError):
        Atom(x, "!=")
    with pytest.raises(CadError):
        Atom(x - x, "<")
    with pytest.raises(CadError):
        Atom("x", "<")


def test_parse_formula_is_exported_at_package_root():
    import specta

    dec = cad2d.decompose(specta.parse_formula("x^2 + y^2 <= 1"))
    assert dec.cell_count() == 13
    assert len(dec.complex.cells) == 5


def test_rejects_foreign_variables():
    with pytest.raises(CadError, match="only x and y"):
        cad2d.decompose(parse_formula("z > 0"))
    with pytest.raises(CadError, match="only x and y"):
        cad2d.contains_point(parse_formula("t^2 < 1"), (0, 0))


def test_contains_point_basics():
    disk = parse_formula(DISK)
    assert cad2d.contains_point(disk, (0, 0))
    assert not cad2d.contains_point(disk, (1, 0))
    parab = parse_formula("y - x^2 >= 0")
    assert cad2d.contains_point(parab, (Fraction(1, 2), Fraction(1, 4)))


def test_eval_formula_empty_connectives():
    assert cad2d.eval_formula(And(()), lambda p: 0)
    assert not cad2d.eval_formula(Or(()), lambda p: 0)


# ---------------------------------------------------------------------------
# projection


def _p(text):
    return parse_polynomial(text, variables=("x", "y"))


def test_projection_circle_gives_discriminant_roots():
    out = cad2d.projection_phase([_p("x^2 + y^2 - 1")])
    assert [q.to_text() for q in out] == ["x^2 - 1"]


def test_projection_of_horizontal_line_is_empty():
    assert cad2d.projection_phase([_p("y")]) == []


def test_projection_crossing_lines_gives_resultant():
    out = cad2d.projection_phase([_p("y - x"), _p("y + x")])
    assert [q.to_text() for q in out] == ["x"]


def test_projection_splits_content():
    # x(y - 1): vertical line content x plus the horizontal line y = 1
    out = cad2d.projection_phase([_p("x y - x")])
    assert [q.to_text() for q in out] == ["x"]


def test_projection_rejects_zero():
    with pytest.raises(CadError):
        cad2d.projection_phase([Polynomial.const(0, ("x", "y"))])


# ---------------------------------------------------------------------------
# golden corpus: frozen decompositions


def test_disk_decomposition():
    dec = _dec(DISK)
    assert dec.shear is None
    assert dec.cell_count() == 13
    assert len(dec._stacks) == 5
    assert sorted(dec.complex.cells) == ["c1_1", "c2_1", "c2_2", "c2_3", "c3_1"]
    assert _m_cells(dec) == {"c2_2"}
    assert dec.complex.closure_of("c2_2") == {"c1_1", "c2_1", "c2_3", "c3_1"}
    fp = topology.spectral_fingerprint(dec.complex)
    assert (fp.data.dim, fp.data.compact, fp.data.locally_compact) == (2, False, True)
    assert (fp.data.euler, fp.data.components, fp.data.eta_count) == (1, 1, 0)
    assert [b.dimension for b in fp.data.bricks] == [2]


def test_disk_plus_boundary_point():
    dec = _dec(DISK_PT)
    assert dec.cell_count() == 19
    assert len(dec.complex.cells) == 7
    assert dec.ambient_cells["c3_1"] == (0, True)
    assert dec.samples["c3_1"].approx() == (1, 0)
    rho0, rho1, mlc = topology.rho_sequence(dec.complex)
    assert rho1 == {"c3_1"}
    fp = topology.spectral_fingerprint(dec.complex)
    assert fp.data.euler == 2 and fp.data.components == 1
    assert not fp.data.locally_compact
    hand = topology.spectral_fingerprint(corpus.open_disk_plus_boundary_point())
    assert fp == hand


def test_disk_plus_far_point():
    dec = _dec(FAR_PT)
    assert dec.cell_count() == 25
    assert len(dec.complex.cells) == 8
    fp = topology.spectral_fingerprint(dec.complex)
    assert fp.data.components == 2 and fp.data.euler == 2


def test_annulus_decomposition():
    dec = _dec(ANNULUS)
    assert dec.cell_count() == 41
    assert len(dec._stacks) == 9
    assert len(_m_cells(dec)) == 8
    assert len(dec.complex.cells) == 24
    fp = topology.spectral_fingerprint(dec.complex)
    assert (fp.data.euler, fp.data.components) == (0, 1)
    assert fp.data.locally_compact and not fp.data.compact
    _, rho1, _ = topology.rho_sequence(dec.complex)
    assert rho1 == set()


def test_whisker_decomposition():
    dec = _dec(WHISKER)
    assert dec.cell_count() == 25
    kept = dec.complex
    assert len(kept.cells) == 9 and len(_m_cells(dec)) == 9
    fp = topology.spectral_fingerprint(kept)
    assert fp.data.compact and fp.data.euler == 1
    assert fp.data.eta_count == 1
    assert topology.eta_set(kept) == {"c5_1"}
    assert dec.samples["c5_1"].approx() == (2, 0)
    assert [b.dimension for b in fp.data.bricks] == [2, 1]
    assert fp.data.bricks[1].eta_count == 2
    hand = topology.spectral_fingerprint(corpus.disk_with_whisker())
    assert fp == hand


def test_sheared_hyperbola_arc():
    dec = _dec(ARC)
    assert dec.shear == Fraction(1, 2)
    assert len(dec.complex.cells) == 3
    fp = topology.spectral_fingerprint(dec.complex)
    assert (fp.data.dim, fp.data.euler, fp.data.compact) == (1, 1, True)
    assert fp.data.eta_count == 2


def test_strip_with_irrational_stacks():
    dec = _dec(STRIP)
    assert dec.cell_count() == 33
    assert len(dec.complex.cells) == 9
    assert not dec._xroots[1].is_rational  # cut at x = -1/sqrt(2)
    fp = topology.spectral_fingerprint(dec.complex)
    assert (fp.data.dim, fp.data.euler, fp.data.components) == (2, -1, 1)
    assert fp.data.locally_compact
    _, rho1, _ = topology.rho_sequence(dec.complex)
    assert rho1 == set()


def test_vertical_segment():
    dec = _dec(SEGMENT)
    assert dec.cell_count() == 15
    assert sorted(dec.complex.cells) == ["c1_1", "c1_2", "c1_3"]
    fp = topology.spectral_fingerprint(dec.complex)
    assert (fp.data.dim, fp.data.euler, fp.data.compact) == (1, 1, True)
    assert fp.data.eta_count == 2


def test_empty_set():
    dec = _dec(EMPTY)
    assert dec.cell_count() == 5
    assert len(dec.complex.cells) == 0


# ---------------------------------------------------------------------------
# unbounded inputs


@pytest.mark.parametrize("text", [
    "x + y > 0",
    "NOT (x^2 + y^2 < 1)",
    "0 < 1",
    "y = 0",
    "x = 0",
    "x^2 + y^2 > 1",
])
def test_unbounded_inputs_rejected(text):
    with pytest.raises(UnboundedInput):
        cad2d.decompose(parse_formula(text))


def test_unbounded_message_names_a_cell():
    with pytest.raises(UnboundedInput, match="c0_2"):
        cad2d.decompose(parse_formula("x + y > 0"))


# ---------------------------------------------------------------------------
# located membership against direct evaluation


def _battery(text, n, seed):
    dec = _dec(text)
    f = parse_formula(text)
    rng = random.Random(seed)
    hits = {}
    for _ in range(n):
        pt = (Fraction(rng.randrange(-40, 41), 16),
              Fraction(rng.randrange(-40, 41), 16))
        cid = cad2d.locate(dec, pt)
        direct = cad2d.contains_point(f, pt)
        assert direct == dec.ambient_cells[cid][1], (text, pt, cid)
        hits.setdefault(cid, []).append(pt)
    return hits


@pytest.mark.parametrize("text", GOLDEN)
def test_membership_consistency(text):
    _battery(text, 120, seed=sum(map(ord, text)))


def test_sign_vectors_constant_per_cell():
    for text in (DISK_PT, ANNULUS, WHISKER):
        f = parse_formula(text)
        polys = [a.poly for a in cad2d.formula_atoms(f)]
        hits = _battery(text, 150, seed=5)
        checked = 0
        for cid, pts in hits.items():
            if len(pts) < 3:
                continue
            vectors = set()
            for px, py in pts[:3]:
                v = tuple((lambda t: (t > 0) - (t < 0))(
                    p.eval_at({"x": px, "y": py})) for p in polys)
                vectors.add(v)
            assert len(vectors) == 1, (text, cid, vectors)
            checked += 1
        assert checked > 0


def test_locate_hits_sections_and_vertices():
    dec = _dec(DISK)
    assert cad2d.locate(dec, (1, 0)) == "c3_1"
    assert cad2d.locate(dec, (-1, 0)) == "c1_1"
    assert cad2d.locate(dec, (0, 1)) == "c2_3"
    assert cad2d.locate(dec, (0, -1)) == "c2_1"
    assert cad2d.locate(dec, (0, 0)) == "c2_2"
    assert cad2d.locate(dec, (5, 5)) == "c4_0"


def test_locate_respects_shear_frame():
    dec = _dec(ARC)
    assert dec.ambient_cells[cad2d.locate(dec, (1, 1))][1]
    assert dec.ambient_cells[cad2d.locate(dec, (2, Fraction(1, 2)))][1]
    assert dec.ambient_cells[cad2d.locate(dec, (Fraction(1, 2), 2))][1]
    assert not dec.ambient_cells[cad2d.locate(dec, (1, 2))][1]
    assert not dec.ambient_cells[cad2d.locate(dec, (3, Fraction(1, 3)))][1]


# ---------------------------------------------------------------------------
# structural invariants of the output complexes


@pytest.mark.parametrize("text", [t for t in GOLDEN if t != EMPTY])
def test_closure_transitive_and_dimension_decreasing(text):
    K = _dec(text).complex
    for c in K.cells:
        for f in K.closure_of(c):
            assert K.dim(f) < K.dim(c)
            assert K.closure_of(f) <= K.closure_of(c)


@pytest.mark.parametrize("text", [DISK, WHISKER, ANNULUS, ARC])
def test_serialization_round_trip(text):
    K = _dec(text).complex
    blob = topology.serialize_complex(K)
    assert topology.parse_complex(blob) == K


def test_determinism():
    a = cad2d.decompose(parse_formula(ANNULUS))
    b = cad2d.decompose(parse_formula(ANNULUS))
    assert cad2d.decomposition_text(a) == cad2d.decomposition_text(b)


def test_decomposition_text_annotations():
    text = cad2d.decomposition_text(_dec(ARC))
    assert text.startswith("complex ambient=2 bounded=1\n")
    assert "# shear lambda=1/2" in text
    assert "# sample c" in text
    assert cad2d.decomposition_text(_dec(DISK)).count("# sample") == 5


def test_subdivision_preserves_cad_fingerprint():
    K = _dec(WHISKER).complex
    sd = topology.barycentric_subdivision(K)
    assert topology.spectral_fingerprint(sd) == topology.spectral_fingerprint(K)


def test_samples_live_in_their_stack():
    dec = _dec(ANNULUS)
    for cid, sp in dec.samples.items():
        x, y = sp.approx()
        # even stacks carry rational x, odd stacks sit on projection roots
        si = int(cid[1:].split("_")[0])
        if si % 2 == 0:
            assert isinstance(sp.x, Fraction)
