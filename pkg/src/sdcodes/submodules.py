"""Classification of the component M_1 over a field ideal I_j.

Two generator matrices give equivalent components when they differ by row
operations, a permutation of cycle coordinates, a nonzero scalar per column
(a cyclic shift of that cycle) and a field automorphism (a substitution
x -> x^2).  For full-support codes this is projective equivalence under
PGammaL(d, q) of the multiset of column points, which is what we canonicalise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import cyclotomic, gf2core
from .cyclotomic import ModuleCode

Point = Tuple[int, ...]


class FieldIdeal:
    """The field I_j with elements indexed 0..q-1 (0 is zero, 1 is e_j)."""

    def __init__(self, p: int, j: int = 0):
        system = cyclotomic.factor_cyclotomic(p)
        self.p, self.j = p, j
        self.degree = system.degree(j)
        self.q = 1 << self.degree
        e = system.identities[j]
        # x*e_j has order dividing p; p prime and > 1 means it generates when p = q-1
        gen = None
        for a in system.ideal_elements(j):
            if a and self._order(a, e) == self.q - 1:
                gen = a
                break
        self.elements = [0]
        self.log: Dict[int, int] = {}
        a = e
        for k in range(self.q - 1):
            self.log[a] = k
            self.elements.append(a)
            a = cyclotomic.ring_mul(a, gen, p)
        self.generator = gen
        self.index = {a: i for i, a in enumerate(self.elements)}
        q = self.q
        self.add = [[self.index[self.elements[a] ^ self.elements[b]] for b in range(q)] for a in range(q)]
        self.mul = [[0 if a == 0 or b == 0 else 1 + (a - 1 + b - 1) % (q - 1) for b in range(q)]
                    for a in range(q)]
        self.inv = [0] + [1 + (-(a - 1)) % (q - 1) for a in range(1, q)]
        self.frob = [self.index[cyclotomic.ring_mul(x, x, p)] for x in self.elements]

    def _order(self, a: int, e: int) -> int:
        x, k = a, 1
        while x != e:
            x = cyclotomic.ring_mul(x, a, self.p)
            k += 1
            if k > self.q:
                return 0
        return k


@lru_cache(maxsize=None)
def field_ideal(p: int, j: int = 0) -> FieldIdeal:
    return FieldIdeal(p, j)


# --------------------------------------------------------------------------
# projective geometry helpers


def normalize(F: FieldIdeal, v: Sequence[int]) -> Optional[Point]:
    for x in v:
        if x:
            s = F.inv[x]
            return tuple(F.mul[s][y] for y in v)
    return None


def projective_points(F: FieldIdeal, d: int) -> List[Point]:
    pts = []
    for v in itertools.product(range(F.q), repeat=d):
        if any(v) and normalize(F, v) == v:
            pts.append(v)
    return pts


def mat_vec(F: FieldIdeal, M: Sequence[Sequence[int]], v: Sequence[int]) -> Tuple[int, ...]:
    out = []
    for row in M:
        acc = 0
        for a, b in zip(row, v):
            if a and b:
                acc = F.add[acc][F.mul[a][b]]
        out.append(acc)
    return tuple(out)


def det3(F: FieldIdeal, cols: Sequence[Sequence[int]]) -> int:
    (a, b, c), (d, e, f), (g, h, i) = cols
    m, ad = F.mul, F.add
    t1 = m[a][ad[m[e][i]][m[f][h]]]
    t2 = m[d][ad[m[b][i]][m[c][h]]]
    t3 = m[g][ad[m[b][f]][m[c][e]]]
    return ad[ad[t1][t2]][t3]


def rank_over(F: FieldIdeal, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(F, rows))


def row_reduce(F: FieldIdeal, rows: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Reduced row echelon basis over the field."""
    basis: List[List[int]] = []
    pivots: List[int] = []
    for r in rows:
        r = list(r)
        for b, pc in zip(basis, pivots):
            if r[pc]:
                s = r[pc]
                r = [F.add[x][F.mul[s][y]] for x, y in zip(r, b)]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        s = F.inv[r[lead]]
        r = [F.mul[s][x] for x in r]
        for bi, b in enumerate(basis):
            if b[lead]:
                t = b[lead]
                basis[bi] = [F.add[x][F.mul[t][y]] for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [tuple(basis[i]) for i in order]


def _inverse3(F: FieldIdeal, cols: Sequence[Sequence[int]]) -> List[List[int]]:
    """Inverse of the matrix with the given columns: rows are cross products over the determinant."""
    a, b, c = cols
    s = F.inv[det3(F, cols)]
    return [[F.mul[s][x] for x in _cross(F, u, v)] for u, v in ((b, c), (c, a), (a, b))]


def _cross(F: FieldIdeal, u: Sequence[int], v: Sequence[int]) -> Tuple[int, int, int]:
    m, ad = F.mul, F.add
    return (ad[m[u[1]][v[2]]][m[u[2]][v[1]]],
            ad[m[u[2]][v[0]]][m[u[0]][v[2]]],
            ad[m[u[0]][v[1]]][m[u[1]][v[0]]])


# --------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """A multiset of column points of a full-support generator matrix."""

    d: int
    points: Tuple[Point, ...]  # sorted


def configuration_of(F: FieldIdeal, rows: Sequence[Sequence[int]]) -> Configuration:
    basis = row_reduce(F, rows)
    d = len(basis)
    c = len(basis[0]) if basis else 0
    pts = []
    for i in range(c):
        col = tuple(b[i] for b in basis)
        pt = normalize(F, col)
        if pt is None:
            raise ValueError("zero column: component does not have full support")
        pts.append(pt)
    return Configuration(d, tuple(sorted(pts)))


def hyperplane_counts(F: FieldIdeal, conf: Configuration) -> List[int]:
    """Points (with multiplicity) on each hyperplane; a codeword's weight is c minus this."""
    out = []
    for y in projective_points(F, conf.d):
        cnt = 0
        for pt in conf.points:
            acc = 0
            for a, b in zip(y, pt):
                acc = F.add[acc][F.mul[a][b]]
            cnt += acc == 0
        out.append(cnt)
    return out


def min_weight_of(F: FieldIdeal, conf: Configuration) -> int:
    return len(conf.points) - max(hyperplane_counts(F, conf))


def _frob_point(F: FieldIdeal, pt: Point, k: int) -> Point:
    for _ in range(k):
        pt = tuple(F.frob[x] for x in pt)
    return pt


def _apply(F: FieldIdeal, M, pts: Sequence[Point]) -> Tuple[Point, ...]:
    return tuple(sorted(normalize(F, mat_vec(F, M, pt)) for pt in pts))


@lru_cache(maxsize=None)
def _pgl2(p: int, j: int) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    F = field_ideal(p, j)
    out = []
    for a, b, c, d in itertools.product(range(F.q), repeat=4):
        det = F.add[F.mul[a][d]][F.mul[b][c]]
        if det == 0:
            continue
        M = ((a, b), (c, d))
        # one representative per scalar class: first nonzero entry equals 1
        if normalize(F, (a, b, c, d)) != (a, b, c, d):
            continue
        out.append(M)
    return out


@lru_cache(maxsize=None)
def _line_action(p: int, j: int):
    """PGammaL(2, q) as permutations of the projective line, one row per group element."""
    F = field_ideal(p, j)
    pts = projective_points(F, 2)
    where = {pt: i for i, pt in enumerate(pts)}
    rows = set()
    for k in range(F.degree):
        for M in _pgl2(p, j):
            rows.add(tuple(where[normalize(F, mat_vec(F, M, _frob_point(F, x, k)))] for x in pts))
    return pts, np.array(sorted(rows), dtype=np.intp)


def _canonical_line_multiset(F: FieldIdeal, pts: Sequence[Point]) -> Tuple[Point, ...]:
    line, action = _line_action(F.p, F.j)
    where = {pt: i for i, pt in enumerate(line)}
    counts = np.zeros(len(line), dtype=np.int64)
    for pt in pts:
        counts[where[pt]] += 1
    images = np.zeros_like(action)
    np.put_along_axis(images, action, counts[None, :].repeat(len(action), 0), axis=1)
    best = min(map(tuple, images.tolist()))
    return tuple(line[i] for i in range(len(line)) for _ in range(best[i]))


def _point_labels(F: FieldIdeal, pts: Sequence[Point]) -> Dict[Point, tuple]:
    """PGammaL-invariant label per distinct point: multiplicity and line-occupancy profile."""
    distinct = sorted(set(pts))
    mult = {pt: pts.count(pt) for pt in distinct}
    labels = {}
    for a in distinct:
        lines: Dict[Point, int] = {}
        for b in distinct:
            if b == a:
                continue
            ln = normalize(F, _cross(F, a, b))
            lines[ln] = lines.get(ln, 0) + mult[b]
        labels[a] = (mult[a], tuple(sorted(lines.values())))
    return labels


def canonical_configuration(F: FieldIdeal, conf: Configuration) -> Tuple[Point, ...]:
    pts = list(conf.points)
    if conf.d == 1:
        return tuple(pts)
    best = None
    if conf.d == 2:
        return _canonical_line_multiset(F, pts)
    if conf.d != 3:
        raise NotImplementedError("canonical configurations are implemented for d <= 3")
    labels = _point_labels(F, pts)
    distinct = sorted(set(pts))
    frames = []
    for quad in itertools.permutations(distinct, 4):
        a, b, c, dd = quad
        if any(det3(F, trio) == 0 for trio in ((a, b, c), (a, b, dd), (a, c, dd), (b, c, dd))):
            continue
        frames.append(quad)
    if frames:
        key = min(tuple(labels[x] for x in fr) for fr in frames)
        frames = [fr for fr in frames if tuple(labels[x] for x in fr) == key]
        for k in range(F.degree):
            for fr in frames:
                a, b, c, dd = (_frob_point(F, x, k) for x in fr)
                inv = _inverse3(F, (a, b, c))
                lam = mat_vec(F, inv, dd)
                # map sending a,b,c to scaled basis vectors and dd to (1,1,1)
                M = [[F.mul[F.inv[lam[r]]][x] for x in inv[r]] for r in range(3)]
                img = _apply(F, M, [_frob_point(F, x, k) for x in pts])
                if best is None or img < best:
                    best = img
        return (("frame",),) + best
    triangles = [t for t in itertools.permutations(distinct, 3) if det3(F, t) != 0]
    key = min(tuple(labels[x] for x in t) for t in triangles)
    triangles = [t for t in triangles if tuple(labels[x] for x in t) == key]
    nz = range(1, F.q)
    for k in range(F.degree):
        fpts = [_frob_point(F, x, k) for x in pts]
        for t in triangles:
            a, b, c = (_frob_point(F, x, k) for x in t)
            inv = _inverse3(F, (a, b, c))
            for s2, s3 in itertools.product(nz, nz):
                M = [inv[0], [F.mul[s2][x] for x in inv[1]], [F.mul[s3][x] for x in inv[2]]]
                img = _apply(F, M, fpts)
                if best is None or img < best:
                    best = img
    return (("triangle",),) + best


# --------------------------------------------------------------------------
# enumeration


def _candidate_configurations(F: FieldIdeal, d: int, c: int):
    """Yield point multisets meeting every orbit of spanning configurations."""
    pts = projective_points(F, d)
    if d == 1:
        yield tuple([(1,)] * c)
        return
    if d == 2:
        for combo in itertools.combinations_with_replacement(pts, c):
            if len(set(combo)) >= 2:
                yield combo
        return
    if d != 3:
        raise NotImplementedError("component classification is implemented for d <= 3")
    e1, e2, e3, one = (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)
    # configurations with four points in general position contain the standard frame
    for extra in itertools.combinations_with_replacement(pts, c - 4):
        yield tuple(sorted((e1, e2, e3, one) + extra))
    # the rest contain a triangle and have every other point on its sides
    on_sides = [x for x in pts if 0 in x]
    for extra in itertools.combinations_with_replacement(on_sides, c - 3):
        combo = tuple(sorted((e1, e2, e3) + extra))
        if not _has_frame(F, combo):
            yield combo


def _has_frame(F: FieldIdeal, pts: Sequence[Point]) -> bool:
    distinct = sorted(set(pts))
    for quad in itertools.combinations(distinct, 4):
        if all(det3(F, trio) != 0 for trio in itertools.combinations(quad, 3)):
            return True
    return False


@dataclass(frozen=True)
class ComponentClass:
    configuration: Configuration
    canonical: tuple
    module: ModuleCode
    min_weight: int
    dual_min_weight: int


def module_from_points(F: FieldIdeal, pts: Sequence[Point]) -> ModuleCode:
    d = len(pts[0])
    rows = tuple(tuple(F.elements[pt[r]] for pt in pts) for r in range(d))
    return ModuleCode(F.p, len(pts), rows)


def field_rows(F: FieldIdeal, module: ModuleCode) -> List[Tuple[int, ...]]:
    """Generator rows of a component (all entries in the field ideal) as field indices."""
    system = cyclotomic.factor_cyclotomic(F.p)
    e = system.identities[F.j]
    rows = []
    for r in module.rows:
        rows.append(tuple(F.index[cyclotomic.ring_mul(a, e, F.p)] for a in r))
    return row_reduce(F, rows)


def dual_rows(F: FieldIdeal, rows: Sequence[Sequence[int]], c: int) -> List[Tuple[int, ...]]:
    """Euclidean dual over the field, by brute force over a basis complement."""
    rref = row_reduce(F, rows)
    pivots = [next(i for i, x in enumerate(r) if x) for r in rref]
    free = [i for i in range(c) if i not in pivots]
    out = []
    for fcol in free:
        v = [0] * c
        v[fcol] = 1
        for r, pc in zip(rref, pivots):
            v[pc] = r[fcol]  # char 2: -x = x
        out.append(tuple(v))
    return out


def min_weight_rows(F: FieldIdeal, rows: Sequence[Sequence[int]]) -> int:
    best = None
    for coeffs in itertools.product(range(F.q), repeat=len(rows)):
        if not any(coeffs):
            continue
        w = 0
        for i in range(len(rows[0])):
            acc = 0
            for a, r in zip(coeffs, rows):
                if a and r[i]:
                    acc = F.add[acc][F.mul[a][r[i]]]
            w += acc != 0
        best = w if best is None else min(best, w)
    return best


def component_key(F: FieldIdeal, module: ModuleCode) -> tuple:
    return canonical_configuration(F, configuration_of(F, field_rows(F, module)))


def enumerate_component_classes(p: int, c: int, d: int, min_weight: int = 2,
                                j: int = 0) -> List[ComponentClass]:
    """One representative per equivalence class of full-support [c, d] codes over I_j."""
    F = field_ideal(p, j)
    seen: Dict[tuple, ComponentClass] = {}
    for pts in _candidate_configurations(F, d, c):
        conf = Configuration(d, tuple(sorted(pts)))
        if rank_over(F, list(zip(*pts))) != d:
            continue
        mw = min_weight_of(F, conf) if d > 1 else c
        if mw < min_weight:
            continue
        key = canonical_configuration(F, conf)
        if key in seen:
            continue
        module = module_from_points(F, conf.points)
        drows = dual_rows(F, [tuple(pt[r] for pt in conf.points) for r in range(d)], c)
        dmw = min_weight_rows(F, drows) if drows else c + 1
        seen[key] = ComponentClass(conf, key, module, mw, dmw)
    return [seen[k] for k in sorted(seen)]


# --------------------------------------------------------------------------
# the M_1 cases for p = 7


@dataclass(frozen=True)
class M1Case:
    """A choice of M_1 together with the complement M_2 and the module C_phi = M_1 + M_2."""

    label: str
    m1: ModuleCode
    m2: ModuleCode
    phi: ModuleCode
    key: tuple


def _dual_key(F: FieldIdeal, cls: ComponentClass, c: int) -> tuple:
    rows = [tuple(pt[r] for pt in cls.configuration.points) for r in range(cls.configuration.d)]
    return canonical_configuration(F, configuration_of(F, dual_rows(F, rows, c)))


def enumerate_M1_cases(p: int = 7, c: int = 6, dims: Tuple[int, int] = (3, 3),
                       image_min_weight: int = 8) -> List[M1Case]:
    """Inequivalent choices of M_1 of I_1-dimension dims[0] whose C_phi keeps binary weight >= 8.

    The substitution x -> x^-1 swaps the two ideals and turns M_1 into its
    Euclidean dual over the field, so when both dimensions agree a class and
    its dual class are the same case.
    """
    system = cyclotomic.factor_cyclotomic(p)
    if system.s != 2 or cyclotomic.substitute(system.identities[0], p - 1, p) != system.identities[1]:
        raise ValueError(f"p={p}: need two ideals interchanged by x -> x^-1")
    d1, d2 = dims
    if d1 + d2 != c or not 1 <= d1 <= 3:
        raise ValueError(f"unsupported dimensions {dims} for c={c}")
    F = field_ideal(p, 0)
    out: List[M1Case] = []
    kept: Dict[tuple, ComponentClass] = {}
    for cls in enumerate_component_classes(p, c, d1, min_weight=2):
        if d1 == d2 and _dual_key(F, cls, c) in kept:
            continue
        m2 = cyclotomic.form_complement(cls.module, 1)
        phi = cls.module + m2
        if m2.binary_dim != F.degree * d2:
            raise AssertionError("form complement has the wrong dimension")
        w = gf2core.min_weight(phi.binary(), early_exit_at=image_min_weight)
        if w is None or w < image_min_weight:
            continue
        kept[cls.canonical] = cls
        out.append(M1Case(f"M1_{d1}_{len(out) + 1}", cls.module, m2, phi, cls.canonical))
    return out
