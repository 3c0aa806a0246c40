"""Combinatorial engine on finite regular cell complexes.

A CellComplex represents a closed pair X = Cl(M): every cell carries a flag
``inM``; the complex as a whole stands for the closure of the flagged part.
On top of that the module computes local dimensions, the brick
decomposition into pure-dimensional closed pieces, the locally compact
part M_lc (with the two-step removal rho0, rho1), the finite set of
dangling endpoints eta(M), compactness, the core M_lc minus eta(M_lc), and
a spectral fingerprint whose components are homeomorphism invariants of
the flagged set.  Fingerprint comparison reports necessary-condition
verdicts for the four flavors of equivalence studied by the classification
theorems; it never claims a positive isomorphism.

Complexes must be regular: no loops (every 1-cell has two distinct
endpoints) and closures are unions of cells.  Inputs violating this raise
RegularityViolation.  Cells outside Cl(M) are tolerated on input; all
operations silently restrict to the carrier Cl(M).

Text format (one record per line, '#' starts a comment):

    complex ambient=<m> bounded=<0|1>
    cell <id> dim=<d> inM=<0|1>
    face <id_small> <id_big>

``face a b`` declares that cell ``a`` lies in the closure of cell ``b``.
Any generating set is accepted; serialization always emits the full strict
closure relation in canonical id order, so parse -> serialize is
byte-identical on canonical files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class TopologyError(ValueError):
    pass


class NotInM(TopologyError):
    """Operation requires a cell flagged inM."""


class RegularityViolation(TopologyError):
    """The complex is not a regular cell complex (or an axiom check failed)."""


def _id_key(cid: str):
    """Numeric-aware sort key so s2 < s10 and plain numbers order naturally."""
    return tuple((0, int(tok)) if tok.isdigit() else (1, tok)
                 for tok in re.split(r"(\d+)", cid) if tok != "")


class CellComplex:
    """Finite regular cell complex with an inM flag per cell.

    cells: mapping id -> (dim, inM).  faces: iterable of (small, big) pairs
    meaning small lies in the closure of big; any generating set works, the
    strict transitive closure is computed here.  The constructor validates
    the structural invariants and raises TopologyError subclasses.
    """

    def __init__(self, ambient_dim: int, bounded: bool, cells, faces):
        if int(ambient_dim) < 1:
            raise TopologyError("ambient dimension must be positive")
        self.ambient_dim = int(ambient_dim)
        self.bounded = bool(bounded)
        if isinstance(cells, dict):
            items = cells.items()
        else:
            items = [(c[0], (c[1], c[2])) for c in cells]
        self.cells = {}
        for cid, (dim, in_m) in items:
            cid = str(cid)
            if cid in self.cells:
                raise TopologyError(f"duplicate cell id {cid!r}")
            dim = int(dim)
            if dim < 0:
                raise TopologyError(f"negative dimension for cell {cid!r}")
            if dim > self.ambient_dim:
                raise TopologyError(
                    f"cell {cid!r} has dimension {dim} above ambient {self.ambient_dim}")
            self.cells[cid] = (dim, bool(in_m))
        self._direct = {cid: set() for cid in self.cells}
        for small, big in faces:
            small, big = str(small), str(big)
            if small not in self.cells or big not in self.cells:
                raise TopologyError(f"face pair ({small!r}, {big!r}) references unknown cell")
            if small == big:
                raise TopologyError(f"reflexive face pair on {small!r}")
            if self.dim(small) >= self.dim(big):
                raise TopologyError(
                    f"face pair ({small!r}, {big!r}) does not decrease dimension")
            self._direct[big].add(small)
        self._closure = self._compute_closure()
        self._star = {cid: set() for cid in self.cells}
        for big, smalls in self._closure.items():
            for s in smalls:
                self._star[s].add(big)
        self._check_regularity()

    # -- basic accessors ---------------------------------------------------

    def dim(self, cid) -> int:
        return self.cells[cid][0]

    def in_m(self, cid) -> bool:
        return self.cells[cid][1]

    def closure_of(self, cid):
        """Strictly smaller cells in the closure of cid."""
        return self._closure[cid]

    def star_of(self, cid):
        """Cells strictly containing cid in their closure."""
        return self._star[cid]

    def m_cells(self):
        return {cid for cid in self.cells if self.in_m(cid)}

    def carrier(self):
        """Cl(M): the inM cells together with all their faces."""
        out = set()
        for cid in self.cells:
            if self.in_m(cid):
                out.add(cid)
                out |= self._closure[cid]
        return out

    # -- internals ---------------------------------------------------------

    def _compute_closure(self):
        order = sorted(self.cells, key=lambda c: self.dim(c))
        closure = {}
        for cid in order:
            acc = set()
            for f in self._direct[cid]:
                acc.add(f)
                acc |= closure[f]
            closure[cid] = acc
        return closure

    def _check_regularity(self):
        for cid in self.cells:
            if self.dim(cid) == 1:
                zero_faces = {f for f in self._closure[cid] if self.dim(f) == 0}
                if len(zero_faces) != 2:
                    raise RegularityViolation(
                        f"1-cell {cid!r} has {len(zero_faces)} distinct endpoints, need 2")

    def __eq__(self, other):
        if not isinstance(other, CellComplex):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.bounded == other.bounded
                and self.cells == other.cells
                and self._closure == other._closure)

    def __repr__(self):
        m = sum(1 for c in self.cells if self.in_m(c))
        return (f"CellComplex(ambient={self.ambient_dim}, cells={len(self.cells)}, "
                f"inM={m}, bounded={self.bounded})")


# ---------------------------------------------------------------------------
# text format


def parse_complex(text: str) -> CellComplex:
    header = None
    cells = []
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "complex":
                if header is not None:
                    raise TopologyError("duplicate complex header")
                kv = dict(p.split("=", 1) for p in parts[1:])
                header = (int(kv["ambient"]), kv["bounded"] == "1")
            elif kind == "cell":
                cid = parts[1]
                kv = dict(p.split("=", 1) for p in parts[2:])
                cells.append((cid, int(kv["dim"]), kv["inM"] == "1"))
            elif kind == "face":
                faces.append((parts[1], parts[2]))
            else:
                raise TopologyError(f"unknown record {kind!r}")
        except (KeyError, IndexError, ValueError) as exc:
            if isinstance(exc, TopologyError):
                raise
            raise TopologyError(f"malformed line {lineno}: {raw!r}") from exc
    if header is None:
        raise TopologyError("missing complex header")
    return CellComplex(header[0], header[1], cells, faces)


def serialize_complex(K: CellComplex) -> str:
    lines = [f"complex ambient={K.ambient_dim} bounded={1 if K.bounded else 0}"]
    for cid in sorted(K.cells, key=_id_key):
        dim, in_m = K.cells[cid]
        lines.append(f"cell {cid} dim={dim} inM={1 if in_m else 0}")
    pairs = []
    for big in K.cells:
        for small in K.closure_of(big):
            pairs.append((small, big))
    pairs.sort(key=lambda p: (_id_key(p[0]), _id_key(p[1])))
    for small, big in pairs:
        lines.append(f"face {small} {big}")
    return "\n".join(lines) + "\n"


def restrict(K: CellComplex, m_cells) -> CellComplex:
    """Sub complex on Cl(m_cells) with exactly m_cells flagged inM.

    m_cells must be existing cell ids; their faces are pulled in with
    inM = false unless they are in m_cells themselves.
    """
    m_cells = {str(c) for c in m_cells}
    unknown = m_cells - set(K.cells)
    if unknown:
        raise TopologyError(f"unknown cells in restriction: {sorted(unknown)}")
    keep = set(m_cells)
    for c in m_cells:
        keep |= K.closure_of(c)
    cells = {cid: (K.dim(cid), cid in m_cells) for cid in keep}
    faces = [(s, b) for b in keep for s in K.closure_of(b) if s in keep]
    return CellComplex(K.ambient_dim, K.bounded, cells, faces)


# ---------------------------------------------------------------------------
# local dimension and bricks


@dataclass(frozen=True)
class Brick:
    dimension: int
    cells: frozenset
    index: int


def local_dimension(K: CellComplex, cid) -> int:
    """Largest dimension of an inM cell whose closure contains cid (or cid itself)."""
    cid = str(cid)
    if cid not in K.cells:
        raise TopologyError(f"unknown cell {cid!r}")
    if not K.in_m(cid):
        raise NotInM(f"cell {cid!r} is not in M")
    best = K.dim(cid)
    for big in K.star_of(cid):
        if K.in_m(big) and K.dim(big) > best:
            best = K.dim(big)
    return best


def bricks(K: CellComplex):
    """Brick decomposition: closures in M of the local-dimension strata.

    Returned in strictly decreasing dimension order.  The Lemma axioms
    (purity, covering, combinatorial density of B_i minus the others,
    decreasing dimensions) are verified before returning.
    """
    M = K.m_cells()
    if not M:
        raise TopologyError("brick decomposition of an empty complex")
    ldim = {c: local_dimension(K, c) for c in M}
    values = sorted(set(ldim.values()), reverse=True)
    out = []
    for i, d in enumerate(values):
        stratum = {c for c in M if ldim[c] == d}
        closure_in_m = set(stratum)
        for c in stratum:
            closure_in_m |= K.closure_of(c) & M
        out.append(Brick(dimension=d, cells=frozenset(closure_in_m), index=i))

    # axiom (i): purity
    for b in out:
        tops = {c for c in b.cells if K.dim(c) == b.dimension}
        for c in b.cells:
            if K.dim(c) == b.dimension:
                continue
            if not any(c in K.closure_of(t) for t in tops):
                raise RegularityViolation(
                    f"brick of dim {b.dimension} is not pure at cell {c!r}")
    # axiom (ii): union is M
    union = set()
    for b in out:
        union |= b.cells
    if union != M:
        raise RegularityViolation("bricks do not cover M")
    # axiom (iii): combinatorial density of B_i minus the other bricks
    for b in out:
        others = set()
        for b2 in out:
            if b2.index != b.index:
                others |= b2.cells
        private = b.cells - others
        for c in b.cells:
            if c in private:
                continue
            if not any(c in K.closure_of(t) for t in private):
                raise RegularityViolation(
                    f"brick of dim {b.dimension}: cell {c!r} not in closure of the "
                    "private part")
    # axiom (iv) holds by construction (strictly decreasing values)
    return out


# ---------------------------------------------------------------------------
# locally compact part, eta, compactness, core


def rho_sequence(K: CellComplex):
    """(rho0, rho1, M_lc) as id sets.

    rho0 is the non-flagged part of Cl(M); rho1 the inM cells sitting in
    the closure of a rho0 cell; M_lc the rest of M.  A self-check confirms
    that the restricted complex on Cl(M_lc) has empty rho1.
    """
    carrier = K.carrier()
    M = K.m_cells()
    rho0 = carrier - M
    rho1 = set()
    for c in M:
        if any(c in K.closure_of(z) for z in rho0):
            rho1.add(c)
    m_lc = M - rho1
    if m_lc:
        sub = restrict(K, m_lc)
        sub_carrier = sub.carrier()
        sub_rho0 = sub_carrier - sub.m_cells()
        for c in sub.m_cells():
            if any(c in sub.closure_of(z) for z in sub_rho0):
                raise RegularityViolation(
                    "locally compact part failed its compact-neighborhood self-check")
    return rho0, rho1, m_lc


def eta_set(K: CellComplex):
    """inM 0-cells whose star within M is one 1-cell, with no higher cell touching.

    These are the dangling endpoints: points with a punctured-interval
    neighborhood in M.  The result is always finite.
    """
    carrier = K.carrier()
    out = set()
    for cid in carrier:
        if K.dim(cid) != 0 or not K.in_m(cid):
            continue
        star = [c for c in K.star_of(cid) if c in carrier]
        if any(K.dim(c) >= 2 for c in star):
            continue
        m_edges = [c for c in star if K.in_m(c) and K.dim(c) == 1]
        if len(m_edges) == 1:
            out.add(cid)
    return out


def is_compact(K: CellComplex, subset=None) -> bool:
    """True iff the flagged set (or the given inM subset) is closed and bounded.

    Closedness is combinatorial: every face of a considered cell must be
    inM (and inside the subset when one is given).  Boundedness comes from
    the header flag; for subsets of an unbounded complex this is
    conservative (a bounded subset of an unbounded complex reports false).
    """
    if not K.bounded:
        return False
    if subset is None:
        considered = K.m_cells()
        for c in considered:
            for f in K.closure_of(c):
                if not K.in_m(f):
                    return False
        return True
    subset = {str(c) for c in subset}
    for c in subset:
        if not K.in_m(c):
            raise NotInM(f"subset cell {c!r} is not in M")
        for f in K.closure_of(c):
            if not K.in_m(f) or f not in subset:
                return False
    return True


def core(K: CellComplex) -> CellComplex:
    """Complex restricted to M_lc with the eta points of M_lc demoted.

    Idempotent whenever the result has empty eta.
    """
    _, _, m_lc = rho_sequence(K)
    if not m_lc:
        return CellComplex(K.ambient_dim, K.bounded, {}, [])
    sub = restrict(K, m_lc)
    eta = eta_set(sub)
    return restrict(sub, m_lc - eta)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class BrickRecord:
    dimension: int
    components: int
    euler: int
    compact: bool
    eta_count: int


@dataclass(frozen=True)
class FingerprintData:
    dim: int
    compact: bool
    locally_compact: bool
    euler: int
    components: int
    eta_count: int
    bricks: tuple


@dataclass(frozen=True)
class Fingerprint:
    """Homeomorphism invariants of M, of M minus eta, and of the core."""

    data: FingerprintData
    minus_eta: FingerprintData
    core: FingerprintData


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def count(self):
        return len({self.find(x) for x in self.parent})


def _component_count(K: CellComplex, cells) -> int:
    uf = _UnionFind(cells)
    for c in cells:
        for f in K.closure_of(c):
            if f in cells:
                uf.union(c, f)
    return uf.count()


def _euler(K: CellComplex, cells) -> int:
    return sum((-1) ** K.dim(c) for c in cells)


def fingerprint_data(K: CellComplex) -> FingerprintData:
    M = K.m_cells()
    if not M:
        return FingerprintData(dim=-1, compact=True, locally_compact=True,
                               euler=0, components=0, eta_count=0, bricks=())
    _, rho1, _ = rho_sequence(K)
    records = []
    for b in bricks(K):
        closed = True
        for c in b.cells:
            for f in K.closure_of(c):
                if f not in b.cells:
                    closed = False
                    break
            if not closed:
                break
        sub = restrict(K, b.cells)
        records.append(BrickRecord(
            dimension=b.dimension,
            components=_component_count(K, b.cells),
            euler=_euler(K, b.cells),
            compact=K.bounded and closed,
            eta_count=len(eta_set(sub)),
        ))
    return FingerprintData(
        dim=max(K.dim(c) for c in M),
        compact=is_compact(K),
        locally_compact=not rho1,
        euler=_euler(K, M),
        components=_component_count(K, M),
        eta_count=len(eta_set(K)),
        bricks=tuple(records),
    )


def spectral_fingerprint(K: CellComplex) -> Fingerprint:
    data = fingerprint_data(K)
    M = K.m_cells()
    eta = eta_set(K)
    remaining = M - eta
    if remaining:
        minus_eta = fingerprint_data(restrict(K, remaining))
    else:
        minus_eta = fingerprint_data(CellComplex(K.ambient_dim, K.bounded, {}, []))
    core_data = fingerprint_data(core(K))
    return Fingerprint(data=data, minus_eta=minus_eta, core=core_data)


RULED_OUT = "RULED_OUT"
CONSISTENT = "CONSISTENT"


@dataclass(frozen=True)
class ComparisonReport:
    """Necessary-condition verdicts; CONSISTENT never asserts an isomorphism.

    s            -- could the full function rings be isomorphic
    s_star       -- could the bounded-function rings be isomorphic
    s_vs_s_star  -- could S(first) be isomorphic to S*(second)
    beta_star    -- could the beta* remainders be homeomorphic
    """

    s: str
    s_star: str
    s_vs_s_star: str
    beta_star: str

    def as_dict(self):
        return {"S": self.s, "S*": self.s_star,
                "S(N)~S*(M)": self.s_vs_s_star, "beta*": self.beta_star}


def compare_spectral_types(K1: CellComplex, K2: CellComplex) -> ComparisonReport:
    """Compare fingerprints of two complexes under the four equivalence flavors.

    The s_vs_s_star verdict reads the first argument as N and the second
    as M: it needs N compact on top of the eta-removed fingerprints
    matching.  All other verdicts are symmetric.
    """
    f1 = spectral_fingerprint(K1)
    f2 = spectral_fingerprint(K2)
    s = CONSISTENT if f1 == f2 else RULED_OUT
    s_star = CONSISTENT if f1.minus_eta == f2.minus_eta else RULED_OUT
    if f1.data.compact and f1.minus_eta == f2.minus_eta:
        s_vs = CONSISTENT
    else:
        s_vs = RULED_OUT
    beta = CONSISTENT if f1.core == f2.core else RULED_OUT
    return ComparisonReport(s=s, s_star=s_star, s_vs_s_star=s_vs, beta_star=beta)


# ---------------------------------------------------------------------------
# barycentric subdivision


def barycentric_subdivision(K: CellComplex) -> CellComplex:
    """Order complex of the face poset; a simplicial refinement.

    New cells are chains c0 < c1 < ... < ck in the closure order; the open
    simplex of a chain lies inside the open cell ck, so it inherits ck's
    inM flag.  Faces are the proper nonempty subchains.
    """
    ids = sorted(K.cells, key=_id_key)
    chains = []

    def grow(chain):
        chains.append(chain)
        top = chain[-1]
        for nxt in ids:
            if top in K.closure_of(nxt):
                grow(chain + (nxt,))

    for cid in ids:
        grow((cid,))

    def name(chain):
        return "|".join(chain)

    cells = {}
    for chain in chains:
        top = chain[-1]
        cells[name(chain)] = (len(chain) - 1, K.in_m(top))
    faces = []
    for chain in chains:
        if len(chain) == 1:
            continue
        for drop in range(len(chain)):
            sub = chain[:drop] + chain[drop + 1:]
            faces.append((name(sub), name(chain)))
    return CellComplex(K.ambient_dim, K.bounded, cells, faces)
