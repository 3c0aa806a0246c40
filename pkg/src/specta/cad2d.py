"""Sign-invariant cylindrical decomposition of the plane.

A boolean combination of polynomial sign conditions in x and y is turned
into a finite regular cell complex: the x-axis is cut at the real roots of
a projected polynomial family, and over each resulting sector or root the
curves defined by the family slice the vertical line into points, arcs and
bands.  Every cell carries an exact sample point and a definite truth
value of the input formula, the satisfied cells become the marked part M
of the complex, and cell adjacency is certified by exact root counting
rather than floating point tracking.

The described set must be bounded; decompose raises UnboundedInput as
soon as a satisfied cell stretches to infinity.  Vertical asymptotes are
removed up front by an x -> x + lambda*y shear whenever some leading
y-coefficient of the projected family has a real root; the shear value is
recorded on the result and sample points then live in the sheared frame.
"""

from dataclasses import dataclass, field as _dcfield
from fractions import Fraction
from functools import cmp_to_key

from . import _numfield as nf
from .arith import (
    AlgebraicNumber,
    Polynomial,
    _poly_exact_div,
    coprime_squarefree_basis,
    discriminant,
    isolate_real_roots,
    normalize_primitive,
    poly_gcd,
    real_compare,
    resultant,
    simplest_between,
)
from .topology import CellComplex, serialize_complex


class CadError(ValueError):
    """Invalid formula, or a decomposition invariant failed to certify."""


class UnboundedInput(CadError):
    """The satisfied set is unbounded and has no bounded cell model."""


XY = ("x", "y")
_REL_SIGNS = {"<": {-1}, "<=": {-1, 0}, "=": {0}, ">=": {0, 1}, ">": {1}}


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class Atom:
    """Sign condition poly rel 0 with rel one of <, <=, =, >=, >."""

    poly: Polynomial
    rel: str

    def __post_init__(self):
        if self.rel not in _REL_SIGNS:
            raise CadError(f"unknown relation {self.rel!r}")
        if not isinstance(self.poly, Polynomial) or self.poly.is_zero():
            raise CadError("atom needs a nonzero polynomial")


@dataclass(frozen=True)
class And:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Not:
    part: object


def formula_atoms(f):
    """Every Atom of the formula, left to right."""
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (And, Or)):
        for p in f.parts:
            yield from formula_atoms(p)
    elif isinstance(f, Not):
        yield from formula_atoms(f.part)
    else:
        raise CadError(f"not a formula: {f!r}")


def map_polys(f, fn):
    """Rebuild the formula with fn applied to each atom polynomial."""
    if isinstance(f, Atom):
        return Atom(fn(f.poly), f.rel)
    if isinstance(f, And):
        return And(tuple(map_polys(p, fn) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(map_polys(p, fn) for p in f.parts))
    if isinstance(f, Not):
        return Not(map_polys(f.part, fn))
    raise CadError(f"not a formula: {f!r}")


def eval_formula(f, sign_of) -> bool:
    """Truth value given the sign of every atom polynomial.

    An empty And is true and an empty Or is false.
    """
    if isinstance(f, Atom):
        return sign_of(f.poly) in _REL_SIGNS[f.rel]
    if isinstance(f, And):
        return all(eval_formula(p, sign_of) for p in f.parts)
    if isinstance(f, Or):
        return any(eval_formula(p, sign_of) for p in f.parts)
    if isinstance(f, Not):
        return not eval_formula(f.part, sign_of)
    raise CadError(f"not a formula: {f!r}")


def _check_variables(f):
    for a in formula_atoms(f):
        for v in a.poly.variables:
            if v not in XY and a.poly.degree_in(v) > 0:
                raise CadError(
                    f"formula mentions variable {v!r}; only x and y are allowed")


def _embed_xy(p: Polynomial) -> Polynomial:
    return p if p.variables == XY else p.embed(XY)


def contains_point(formula, point) -> bool:
    """Exact membership of a rational point in the set the formula describes."""
    _check_variables(formula)
    px, py = Fraction(point[0]), Fraction(point[1])

    def sgn(p):
        v = p.eval_at({"x": px, "y": py})
        return (v > 0) - (v < 0)

    return eval_formula(formula, sgn)


# ---------------------------------------------------------------------------
# projection


def _to_x(p: Polynomial) -> Polynomial:
    """Rewrite a polynomial of y-degree zero over the single variable x."""
    if "y" in p.variables:
        p = p.coeffs_in("y")[0]
    if p.variables != ("x",):
        p = p.embed(("x",))
    return p


def _split_y_content(p: Polynomial):
    """(x-content or None, y-primitive part) of a polynomial of y-degree >= 1."""
    cs = p.coeffs_in("y")
    cont = Polynomial.const(0, ("x",))
    for c in cs:
        cont = poly_gcd(cont, c)
    if cont.is_constant():
        return None, normalize_primitive(p)
    y = Polynomial.var("y", XY)
    prim = Polynomial.const(0, XY)
    for i, c in enumerate(cs):
        prim = prim + _poly_exact_div(c, cont).embed(XY) * y ** i
    return cont, normalize_primitive(prim)


def _prepare(polys):
    """Split inputs into x-only parts and a coprime square-free y-basis."""
    xparts, yparts = [], []
    for p in polys:
        if p.is_zero():
            raise CadError("the zero polynomial has no sign-invariant cells")
        p = _embed_xy(p)
        if p.is_constant():
            continue
        if p.degree_in("y") == 0:
            xparts.append(normalize_primitive(_to_x(p)))
            continue
        cont, prim = _split_y_content(p)
        if cont is not None:
            xparts.append(cont)
        yparts.append(prim)
    return xparts, coprime_squarefree_basis(yparts)


def _project(xparts, basis):
    univ = list(xparts)
    for i, b in enumerate(basis):
        lc = b.coeffs_in("y")[-1]
        if not lc.is_constant():
            univ.append(_to_x(lc))
        if b.degree_in("y") >= 2:
            d = discriminant(b, "y")
            if not d.is_constant():
                univ.append(_to_x(d))
        for c in basis[i + 1:]:
            r = resultant(b, c, "y")
            if not r.is_constant():
                univ.append(_to_x(r))
    return coprime_squarefree_basis(univ)


def projection_phase(polys):
    """Univariate x-polynomials whose roots delineate the input family.

    The output is a coprime square-free basis collecting the x-only inputs
    and contents, nonconstant leading y-coefficients, y-discriminants and
    pairwise y-resultants of the y-primitive basis of the inputs.
    """
    xparts, basis = _prepare(polys)
    return _project(xparts, basis)


# ---------------------------------------------------------------------------
# shear


def _needs_shear(basis) -> bool:
    for b in basis:
        lc = b.coeffs_in("y")[-1]
        if not lc.is_constant() and isolate_real_roots(lc):
            return True
    return False


def _top_form_value(p: Polynomial, lam: Fraction) -> Fraction:
    d = p.total_degree()
    ix = p.variables.index("x")
    out = Fraction(0)
    for e, c in p.terms.items():
        if sum(e) == d:
            out += c * lam ** e[ix]
    return out


def _shear_candidates():
    for den in range(2, 1000):
        yield Fraction(1, den)
        yield Fraction(-1, den)


def _choose_shear(polys) -> Fraction:
    # any direction avoiding the top form of every input works; each top
    # form kills at most its degree many candidates, so the search ends
    polys = [p for p in polys if not p.is_constant()]
    for lam in _shear_candidates():
        if all(_top_form_value(p, lam) != 0 for p in polys):
            return lam
    raise CadError("no shear direction found")  # pragma: no cover


def _shear_poly(p: Polynomial, lam: Fraction) -> Polynomial:
    x = Polynomial.var("x", XY)
    y = Polynomial.var("y", XY)
    return _embed_xy(p.substitute({"x": x + Polynomial.const(lam, XY) * y}))


# ---------------------------------------------------------------------------
# stacks


@dataclass
class Stack:
    """One vertical slice of the decomposition.

    Even indices are open sectors with a rational x sample, odd indices sit
    on a projection root.  sections are the curve heights on the slice, in
    increasing order; level 2j+1 is section j, even levels are the open
    intervals in between.
    """

    index: int
    x: object
    field: object
    sections: list
    _cache: dict = _dcfield(default_factory=dict, repr=False)

    def ypoly(self, p: Polynomial):
        key = p.key()
        out = self._cache.get(key)
        if out is None:
            out = _subst_x(self.field, p)
            self._cache[key] = out
        return out


def _subst_x(fld, p: Polynomial):
    return [fld.element(c.univariate_coeffs()) for c in p.coeffs_in("y")]


def _fences(roots):
    """Rational values strictly interleaving an ordered list of roots.

    Works for both x-axis roots and field roots: anything with lo, hi and
    refine().  Returns len(roots)+1 values; for an empty list just [0].
    """
    if not roots:
        return [Fraction(0)]
    out = [roots[0].lo - 1]
    for a, b in zip(roots, roots[1:]):
        while a.hi > b.lo:
            a.refine()
            b.refine()
        if a.hi == b.lo:
            out.append(a.hi)
        else:
            g = b.lo - a.hi
            out.append(simplest_between(a.hi + g / 4, b.lo - g / 4))
    out.append(roots[-1].hi + 1)
    return out


def _build_stack(index, xval, basis) -> Stack:
    if index % 2 == 0:
        fld = nf.NumberField.rational(xval)
    elif xval.is_rational:
        fld = nf.NumberField.rational(xval.value)
    else:
        fld = nf.NumberField(xval.copy())
    prod = [fld.one()]
    for b in basis:
        prod = nf.ymul(fld, prod, _subst_x(fld, b))
    sections = nf.yisolate(fld, prod) if len(prod) > 1 else []
    return Stack(index, xval, fld, sections)


# ---------------------------------------------------------------------------
# certified adjacency


def _limit_assignment(Q, rstack, sstack, side, bound_root):
    """For each section of the sector, the root-stack point it converges to.

    side is -1 when the sector lies left of the root line, +1 when right.
    Separator heights fence the root-stack points into boxes; a sample
    x* is chosen so close to the root that no curve of the family crosses
    any separator height between x* and the root (certified by excluding
    the real roots of Q(x, separator) from that interval), so box
    membership at x* equals the limit assignment.  Returns 1-based indices.
    """
    K = len(sstack.sections)
    k = len(rstack.sections)
    if K == 0:
        return []
    if k == 0:
        raise CadError(
            "adjacency certification failed: curve sections approach a root "
            "line that carries no curve point")
    alpha = rstack.x
    seps = _fences(rstack.sections)
    cands = []
    for e in seps:
        h = Q.substitute({"y": e})
        if h.is_zero():  # pragma: no cover - separators are never curve heights
            raise CadError("adjacency certification failed: degenerate separator")
        if not h.is_constant():
            cands.extend(r for r in isolate_real_roots(h)
                         if real_compare(r, alpha) == side)
    if bound_root is not None:
        cands.append(bound_root)
    if not cands:
        xstar = alpha.lo - 1 if side < 0 else alpha.hi + 1
    else:
        best = cands[0]
        for c in cands[1:]:
            if real_compare(c, best) * side < 0:
                best = c
        lo, hi = (best, alpha) if side < 0 else (alpha, best)
        while lo.hi > hi.lo:
            lo.refine()
            hi.refine()
        if lo.hi == hi.lo:
            xstar = lo.hi
        else:
            g = hi.lo - lo.hi
            xstar = simplest_between(lo.hi + g / 4, hi.lo - g / 4)
    croots = isolate_real_roots(Q.substitute({"x": xstar}))
    if len(croots) != K:
        raise CadError(
            f"adjacency certification failed: {len(croots)} curve branches at "
            f"x={xstar}, expected {K}")
    ms = []
    for r in croots:
        below = 0
        for e in seps:
            c = real_compare(r, e)
            if c == 0:  # pragma: no cover - separators are root free at xstar
                raise CadError("adjacency certification failed: branch on separator")
            if c > 0:
                below += 1
        if not 1 <= below <= k:
            raise CadError(
                "adjacency certification failed: a curve branch escapes past "
                "the outermost root-stack point")
        if ms and below < ms[-1]:
            raise CadError(
                "adjacency certification failed: branch order twist")
        ms.append(below)
    return ms


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class SamplePoint:
    """Exact witness; y lives on the vertical line of the substituted x."""

    x: object
    y: object

    def approx(self, width=Fraction(1, 1 << 20)):
        ax = self.x if isinstance(self.x, Fraction) else self.x.approx(width)
        ay = self.y if isinstance(self.y, Fraction) else self.y.approx(width)
        return ax, ay


@dataclass
class Decomposition:
    """Result of decompose.

    complex holds the satisfied cells and their closure; ambient_cells maps
    every cell id of the full decomposition to (dim, satisfied) and samples
    gives each one an exact witness point.  When shear is set, all samples
    and cells live in the frame x' = x - shear*y (the input was rewritten
    as formula(x + shear*y, y)); locate performs the change of frame.
    """

    complex: CellComplex
    samples: dict
    shear: object
    basis: list
    projection: list
    ambient_cells: dict
    _stacks: list
    _xroots: list
    _curve: object

    def cell_count(self) -> int:
        return len(self.ambient_cells)


def decompose(formula) -> Decomposition:
    """Cell complex of the bounded set described by the formula.

    Raises UnboundedInput when some satisfied cell is unbounded, and
    CadError on malformed formulas or a failed adjacency certification.
    """
    _check_variables(formula)
    working = map_polys(formula, _embed_xy)
    atom_polys = [a.poly for a in formula_atoms(working)]
    lam = None
    xparts, basis = _prepare(atom_polys)
    if _needs_shear(basis):
        lam = _choose_shear(atom_polys)
        working = map_polys(working, lambda p: _shear_poly(p, lam))
        atom_polys = [a.poly for a in formula_atoms(working)]
        xparts, basis = _prepare(atom_polys)
        if _needs_shear(basis):  # pragma: no cover
            raise CadError("shear failed to remove leading coefficient roots")
    proj = _project(xparts, basis)

    xroots = []
    for q in proj:
        xroots.extend(isolate_real_roots(q))
    xroots.sort(key=cmp_to_key(real_compare))
    sector_xs = _fences(xroots)

    stacks = []
    for i in range(2 * len(xroots) + 1):
        xval = sector_xs[i // 2] if i % 2 == 0 else xroots[i // 2]
        stacks.append(_build_stack(i, xval, basis))

    ambient = {}
    samples = {}
    for st in stacks:
        K = len(st.sections)
        bands = _fences(st.sections)
        on_root = st.index % 2 == 1
        for lv in range(2 * K + 1):
            cid = f"c{st.index}_{lv}"
            if lv % 2 == 1:
                yval = st.sections[lv // 2]
                dim = 0 if on_root else 1
            else:
                yval = bands[lv // 2]
                dim = 1 if on_root else 2
            sat = eval_formula(working,
                               lambda p: nf.ysign_at(st.field, st.ypoly(p), yval))
            ambient[cid] = (dim, sat)
            samples[cid] = SamplePoint(st.x, yval)

    smax = 2 * len(xroots)
    for st in stacks:
        K = len(st.sections)
        for lv in range(2 * K + 1):
            cid = f"c{st.index}_{lv}"
            if not ambient[cid][1]:
                continue
            if st.index in (0, smax) or lv in (0, 2 * K):
                raise UnboundedInput(
                    f"the satisfied set is unbounded (cell {cid})")

    faces = []
    for st in stacks:
        K = len(st.sections)
        for t in range(K + 1):
            big = f"c{st.index}_{2 * t}"
            if t >= 1:
                faces.append((f"c{st.index}_{2 * t - 1}", big))
            if t < K:
                faces.append((f"c{st.index}_{2 * t + 1}", big))

    Q = None
    for b in basis:
        Q = b if Q is None else Q * b
    for ri in range(len(xroots)):
        rstack = stacks[2 * ri + 1]
        k = len(rstack.sections)
        for side in (-1, 1):
            sstack = stacks[2 * ri + 1 + side]
            if side < 0:
                bound = xroots[ri - 1] if ri >= 1 else None
            else:
                bound = xroots[ri + 1] if ri + 1 < len(xroots) else None
            ms = _limit_assignment(Q, rstack, sstack, side, bound)
            K = len(sstack.sections)
            for j in range(1, K + 1):
                faces.append((f"c{rstack.index}_{2 * ms[j - 1] - 1}",
                              f"c{sstack.index}_{2 * j - 1}"))
            for t in range(K + 1):
                mlo = ms[t - 1] if t >= 1 else None
                mhi = ms[t] if t < K else None
                big = f"c{sstack.index}_{2 * t}"
                for m in range((mlo if mlo is not None else 1),
                               (mhi if mhi is not None else k) + 1):
                    faces.append((f"c{rstack.index}_{2 * m - 1}", big))
                for tt in range((mlo if mlo is not None else 0),
                                (mhi - 1 if mhi is not None else k) + 1):
                    faces.append((f"c{rstack.index}_{2 * tt}", big))

    downward = {}
    for s, b in faces:
        downward.setdefault(b, set()).add(s)
    closed = {cid for cid, (_, sat) in ambient.items() if sat}
    todo = list(closed)
    while todo:
        c = todo.pop()
        for s in downward.get(c, ()):
            if s not in closed:
                closed.add(s)
                todo.append(s)
    cells = {cid: ambient[cid] for cid in ambient if cid in closed}
    fpairs = [(s, b) for s, b in faces if s in closed and b in closed]
    complex_ = CellComplex(2, True, cells, fpairs)
    return Decomposition(
        complex=complex_,
        samples=samples,
        shear=lam,
        basis=basis,
        projection=proj,
        ambient_cells=ambient,
        _stacks=stacks,
        _xroots=xroots,
        _curve=Q,
    )


def locate(dec: Decomposition, point) -> str:
    """Ambient cell id containing a rational point of the original plane."""
    px, py = Fraction(point[0]), Fraction(point[1])
    if dec.shear is not None:
        px = px - dec.shear * py
    si = 2 * len(dec._xroots)
    for i, r in enumerate(dec._xroots):
        c = real_compare(px, r)
        if c == 0:
            si = 2 * i + 1
            break
        if c < 0:
            si = 2 * i
            break
    st = dec._stacks[si]
    if si % 2 == 1:
        # on a root line the stack sections are the curve heights themselves
        lv = 2 * len(st.sections)
        for j, sec in enumerate(st.sections):
            c = sec.compare_rational(py)
            if c == 0:
                lv = 2 * j + 1
                break
            if c > 0:
                lv = 2 * j
                break
        return f"c{st.index}_{lv}"
    # inside a sector the curves must be re-sliced at the query x; their
    # order matches the stack sections since no branches cross the sector
    if dec._curve is None:
        return f"c{st.index}_0"
    heights = isolate_real_roots(dec._curve.substitute({"x": px}))
    if len(heights) != len(st.sections):  # pragma: no cover
        raise CadError("curve family is not delineable over a sector")
    lv = 2 * len(heights)
    for j, h in enumerate(heights):
        c = real_compare(py, h)
        if c == 0:
            lv = 2 * j + 1
            break
        if c < 0:
            lv = 2 * j
            break
    return f"c{st.index}_{lv}"


def _fmt_coord(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"~{float(v):.12g}"


def decomposition_text(dec: Decomposition) -> str:
    """Serialized kept complex plus sample and shear annotations."""
    lines = [serialize_complex(dec.complex).rstrip("\n")]
    if dec.shear is not None:
        lines.append(f"# shear lambda={dec.shear}")
    for cid in dec.complex.cells:
        sp = dec.samples[cid]
        lines.append(f"# sample {cid} x={_fmt_coord(sp.x)} y={_fmt_coord(sp.y)}")
    return "\n".join(lines) + "\n"
