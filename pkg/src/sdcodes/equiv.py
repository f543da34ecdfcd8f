"""Permutation equivalence of binary codes.

Canonical labelling works on the incidence structure between coordinates and
the codewords of the lightest weight classes that already span the code (so
every structure automorphism is a code automorphism).  The search is the usual
individualisation-refinement tree with automorphism pruning; the leaf
certificate is the RREF of the relabelled code.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2core
from .gf2core import BinaryCode
from .perms import Perm, PermGroup, compose, inverse, orbits

_RNG_SEED = 0x5D44_2208
_MAX_WORDS = 400_000


def _tables(n_pts: int, n_edges: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(_RNG_SEED)
    pt = rng.integers(1, 1 << 40, size=max(n_pts, 1) + 1).astype(np.float64)
    ed = rng.integers(1, 1 << 36, size=max(n_edges, 1) + 1).astype(np.float64)
    return pt, ed


def _rank_pairs(primary: np.ndarray, secondary: np.ndarray) -> Tuple[np.ndarray, int, bytes]:
    """Dense ranks of (primary, secondary) pairs in sorted order, plus a trace blob."""
    order = np.lexsort((secondary, primary))
    p = primary[order]
    s = secondary[order]
    step = np.empty(len(order), dtype=bool)
    if len(order):
        step[0] = True
        step[1:] = (p[1:] != p[:-1]) | (s[1:] != s[:-1])
    ranks_sorted = np.cumsum(step) - 1
    out = np.empty(len(order), dtype=np.int64)
    out[order] = ranks_sorted
    blob = p[step].tobytes() + s[step].tobytes() + np.diff(np.flatnonzero(np.r_[step, True])).tobytes()
    return out, int(ranks_sorted[-1]) + 1 if len(order) else 0, blob


class _Node:
    __slots__ = ("cells", "ncells", "trace")

    def __init__(self, cells: np.ndarray, ncells: int, trace: bytes):
        self.cells = cells
        self.ncells = ncells
        self.trace = trace


@dataclass
class SearchResult:
    labelling: Tuple[int, ...]
    certificate: Hashable
    generators: List[Perm]
    order: int
    nodes: int


class IRSearch:
    """Canonical labelling of points 0..n-1 under a set of colored hyperedges.

    ``certificate(lab)`` must return a value that is equal for two labellings
    exactly when they map the structure to the same labelled object.
    """

    def __init__(self, n: int, edges: Sequence[int], edge_colors: Sequence[int],
                 point_colors: Optional[Sequence[int]],
                 certificate: Callable[[Sequence[int]], Hashable]):
        self.n = n
        m = len(edges)
        inc = np.zeros((m, n), dtype=np.float64)
        for i, e in enumerate(edges):
            while e:
                low = e & -e
                inc[i, low.bit_length() - 1] = 1.0
                e ^= low
        self.inc = inc
        self.inc_t = np.ascontiguousarray(inc.T)
        self.edge_colors = np.asarray(edge_colors, dtype=np.int64) if m else np.zeros(0, np.int64)
        self.pt_table, self.ed_table = _tables(n, m + len(set(edge_colors)) + 1)
        if point_colors is None:
            point_colors = [0] * n
        self.point_colors = np.asarray(point_colors, dtype=np.int64)
        self.certificate = certificate
        self.nodes = 0

    # -- refinement ---------------------------------------------------------

    def refine(self, cells: np.ndarray, ncells: int) -> _Node:
        h = hashlib.blake2b(digest_size=16)
        edge_cls = self.edge_colors
        n_edge_cls = -1
        if len(edge_cls):
            edge_cls, n_edge_cls, _ = _rank_pairs(edge_cls, np.zeros(len(edge_cls)))
        while True:
            if len(edge_cls):
                sig = self.inc @ self.pt_table[cells]
                edge_cls, n_new_edge, blob = _rank_pairs(edge_cls, sig)
                h.update(blob)
                sig_pt = self.inc_t @ self.ed_table[edge_cls]
            else:
                n_new_edge = 0
                sig_pt = np.zeros(self.n)
            cells, n_new, blob = _rank_pairs(cells, sig_pt)
            h.update(blob)
            if n_new == ncells and n_new_edge == n_edge_cls:
                break
            ncells, n_edge_cls = n_new, n_new_edge
        return _Node(cells, ncells, h.digest())

    def individualize(self, node: _Node, v: int) -> _Node:
        sec = np.ones(self.n)
        sec[v] = 0.0
        cells, ncells, _ = _rank_pairs(node.cells, sec)
        child = self.refine(cells, ncells)
        return child

    def target_cell(self, node: _Node) -> List[int]:
        counts = np.bincount(node.cells, minlength=node.ncells)
        idx = int(np.flatnonzero(counts > 1)[0])
        return [int(x) for x in np.flatnonzero(node.cells == idx)]

    # -- search -------------------------------------------------------------

    def run(self) -> SearchResult:
        start, nstart, _ = _rank_pairs(self.point_colors, np.zeros(self.n))
        root = self.refine(start, nstart)
        self.first = None
        self.best = None
        self.first_prefix: List[int] = []
        self.group: Optional[PermGroup] = None
        self.gens: List[Perm] = []
        self._dfs(root, (root.trace,), [])
        if self.group is None:
            self.group = PermGroup(self.n)
        lab, _, cert = self.best
        return SearchResult(tuple(int(x) for x in lab), cert, list(self.group.gens),
                            self.group.order(), self.nodes)

    def _add_automorphism(self, gamma: Perm) -> None:
        if self.group.add(gamma):
            self.gens.append(gamma)

    def _leaf(self, node: _Node, invs: tuple, prefix: List[int]) -> Optional[int]:
        lab = node.cells
        cert = self.certificate(lab)
        if self.first is None:
            self.first = (lab, invs, cert)
            self.best = (lab, invs, cert)
            self.first_prefix = list(prefix)
            self.group = PermGroup(self.n, base_prefix=prefix)
            return None
        flab, finvs, fcert = self.first
        if invs == finvs and cert == fcert:
            self._add_automorphism(_iso(flab, lab))
            k = 0
            while k < len(prefix) and prefix[k] == self.first_prefix[k]:
                k += 1
            return k
        blab, binvs, bcert = self.best
        if invs == binvs and cert == bcert:
            self._add_automorphism(_iso(blab, lab))
            return None
        if (invs, cert) > (binvs, bcert):
            self.best = (lab, invs, cert)
        return None

    def _stab_orbit_index(self, prefix: List[int], on_first: bool) -> List[int]:
        if self.group is None:
            return list(range(self.n))
        if on_first:
            gens = self.group.stabilizer_gens(len(prefix))
        else:
            gens = [g for g in self.group.gens if all(g[x] == x for x in prefix)]
        rep = list(range(self.n))
        for orb in orbits(gens, self.n):
            for x in orb:
                rep[x] = orb[0]
        return rep

    def _dfs(self, node: _Node, invs: tuple, prefix: List[int]) -> Optional[int]:
        self.nodes += 1
        if node.ncells == self.n:
            return self._leaf(node, invs, prefix)
        depth = len(prefix)
        cell = self.target_cell(node)
        explored_reps = set()
        group_size = -1
        rep = None
        for v in cell:
            on_first = self.first is None or prefix == self.first_prefix[:depth]
            if self.group is not None and len(self.group.gens) != group_size:
                group_size = len(self.group.gens)
                rep = self._stab_orbit_index(prefix, on_first)
                explored_reps = {rep[w] for w in explored_reps}
            if rep is not None and rep[v] in explored_reps:
                continue
            child = self.individualize(node, v)
            child_invs = invs + (child.trace,)
            if self.first is not None:
                _, finvs, _ = self.first
                _, binvs, _ = self.best
                k = len(child_invs)
                if child_invs != finvs[:k] and child_invs < binvs[:k]:
                    explored_reps.add(rep[v] if rep is not None else v)
                    continue
            explored_reps.add(rep[v] if rep is not None else v)
            jump = self._dfs(child, child_invs, prefix + [v])
            if jump is not None and jump < depth:
                return jump
        return None


def _iso(lab_a: np.ndarray, lab_b: np.ndarray) -> Perm:
    """Permutation g with lab_b[g(x)] == lab_a[x]."""
    inv_b = np.empty_like(lab_b)
    inv_b[lab_b] = np.arange(len(lab_b))
    return tuple(int(x) for x in inv_b[lab_a])


# --------------------------------------------------------------------------
# codes


@dataclass(frozen=True)
class CanonicalKey:
    n: int
    k: int
    rows: Tuple[int, ...]
    decoration: Tuple[Tuple[int, int], ...] = ()

    def to_bytes(self) -> bytes:
        width = (self.n + 7) // 8
        out = bytearray(self.n.to_bytes(2, "big") + self.k.to_bytes(2, "big"))
        for r in self.rows:
            out += r.to_bytes(width, "little")
        if self.decoration:
            total = max(m.bit_length() for _, m in self.decoration)
            dw = (total + 7) // 8
            out += b"|"
            for color, m in self.decoration:
                out += color.to_bytes(2, "big") + m.to_bytes(dw, "little")
        return bytes(out)

    def hexdigest(self) -> str:
        return hashlib.sha256(self.to_bytes()).hexdigest()

    def code(self) -> BinaryCode:
        return BinaryCode.from_rows(self.rows, self.n)


@dataclass
class AutGroupInfo:
    order: int
    generators: List[Perm] = field(default_factory=list)


@dataclass
class CanonicalForm:
    key: CanonicalKey
    relabelling: Perm
    aut: AutGroupInfo
    weight_distribution: Tuple[int, ...]
    nodes: int


@dataclass(frozen=True)
class Decoration:
    """Extra structure a relabelling must preserve.

    ``extra_points`` auxiliary points are numbered after the code coordinates
    and always sort after them; ``edges`` are (color, point mask) pairs over
    all points.  Automorphisms and relabellings then act on all points.
    """

    extra_points: int = 0
    edges: Tuple[Tuple[int, int], ...] = ()


def _spanning_words(code: BinaryCode, wd: Sequence[int]) -> Tuple[List[int], List[int]]:
    chosen: List[int] = []
    words: List[int] = []
    for w in range(1, code.n + 1):
        if wd[w] == 0:
            continue
        chosen.append(w)
        if sum(wd[x] for x in chosen) > _MAX_WORDS:
            chosen.pop()
            break
        words = gf2core.codewords_of_weights(code, chosen)
        if gf2core.rank_of(words, code.n) == code.k:
            break
    return words, [w.bit_count() for w in words]


def canonical_form(code: BinaryCode, colors: Optional[Sequence[int]] = None,
                   weight_distribution: Optional[Sequence[int]] = None,
                   decoration: Optional[Decoration] = None) -> CanonicalForm:
    """Canonical key, relabelling and automorphism group of a binary code.

    ``colors`` (one per code coordinate) restricts relabellings to
    color-preserving ones; ``decoration`` adds further structure.
    """
    n = code.n
    wd = list(weight_distribution) if weight_distribution is not None else \
        gf2core.weight_distribution(code)
    words, wcolors = _spanning_words(code, wd)
    if len(words) and gf2core.rank_of(words, n) != code.k:
        raise RuntimeError("codeword structure does not span the code; raise _MAX_WORDS")
    rows = code.rows
    deco = decoration or Decoration()
    total = n + deco.extra_points
    pcolors = list(colors) if colors is not None else [0] * n
    if len(pcolors) != n:
        raise ValueError("one color per coordinate required")
    top = max(pcolors, default=0) + 1
    pcolors += [top] * deco.extra_points
    base_color = n + 1
    edges = list(words) + [m for _, m in deco.edges]
    ecolors = list(wcolors) + [base_color + col for col, _ in deco.edges]

    def cert(lab):
        lab = [int(x) for x in lab]
        basis, _, _ = gf2core.rref([gf2core.permute_vector(r, lab) for r in rows], n)
        if not deco.edges:
            return tuple(basis), ()
        extra = tuple(sorted((col, gf2core.permute_vector(m, lab)) for col, m in deco.edges))
        return tuple(basis), extra

    search = IRSearch(total, edges, ecolors, pcolors if (colors is not None or deco.extra_points) else None, cert)
    res = search.run()
    key = CanonicalKey(n, code.k, res.certificate[0], res.certificate[1])
    return CanonicalForm(key, res.labelling, AutGroupInfo(res.order, res.generators),
                         tuple(wd), res.nodes)


def canonical_key(code: BinaryCode) -> CanonicalKey:
    return canonical_form(code).key


def invariant_signature(code: BinaryCode) -> tuple:
    """Cheap equivalence invariant: (n, k, weight distribution, min-weight support profile)."""
    wd = gf2core.weight_distribution(code)
    d = next((w for w in range(1, code.n + 1) if wd[w]), None)
    if d is None:
        return (code.n, code.k, tuple(wd), ())
    words = gf2core.codewords_of_weights(code, [d])
    per = [0] * code.n
    for w in words:
        while w:
            low = w & -w
            per[low.bit_length() - 1] += 1
            w ^= low
    return (code.n, code.k, tuple(wd), tuple(sorted(per)))


def are_equivalent(a: BinaryCode, b: BinaryCode) -> bool:
    if a.n != b.n or a.k != b.k:
        return False
    if invariant_signature(a) != invariant_signature(b):
        return False
    return canonical_form(a).key == canonical_form(b).key


def aut_order(code: BinaryCode) -> AutGroupInfo:
    return canonical_form(code).aut


def is_automorphism(code: BinaryCode, perm: Sequence[int]) -> bool:
    return all(gf2core.permute_vector(r, perm) in code for r in code.rows)


BRUTE_FORCE_LIMIT = 10


def brute_force_equiv(a: BinaryCode, b: BinaryCode, limit: int = BRUTE_FORCE_LIMIT) -> bool:
    """Ground truth by trying every coordinate permutation."""
    if a.n > limit:
        raise ValueError(f"brute force is capped at length {limit}")
    if a.n != b.n or a.k != b.k:
        return False
    for perm in itertools.permutations(range(a.n)):
        if all(gf2core.permute_vector(r, perm) in b for r in a.rows):
            return True
    return False


def brute_force_aut_order(code: BinaryCode, limit: int = BRUTE_FORCE_LIMIT) -> int:
    if code.n > limit:
        raise ValueError(f"brute force is capped at length {limit}")
    return sum(1 for perm in itertools.permutations(range(code.n)) if is_automorphism(code, perm))


class KeyRegistry:
    """Insert-if-absent map from canonical keys to first representatives."""

    def __init__(self):
        self._items: Dict[CanonicalKey, object] = {}

    def insert(self, key: CanonicalKey, payload) -> bool:
        if key in self._items:
            return False
        self._items[key] = payload
        return True

    def __contains__(self, key) -> bool:
        return key in self._items

    def __len__(self) -> int:
        return len(self._items)

    def items(self):
        return self._items.items()

    def values(self):
        return self._items.values()
