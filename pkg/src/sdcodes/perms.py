"""Permutations on {0..n-1} and a deterministic Schreier-Sims stabilizer chain.

A permutation is a tuple ``p`` with ``p[i]`` the image of ``i``.
``compose(a, b)`` applies ``a`` first, then ``b``.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Perm = Tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    return tuple(b[x] for x in a)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def power(p: Sequence[int], k: int) -> Perm:
    result = identity(len(p))
    base = tuple(p)
    if k < 0:
        base, k = inverse(base), -k
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def perm_order(p: Sequence[int]) -> int:
    from math import lcm
    seen = [False] * len(p)
    out = 1
    for i in range(len(p)):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            out = lcm(out, length)
    return out


def cycles(p: Sequence[int]) -> List[List[int]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def format_cycles(p: Sequence[int], one_based: bool = True) -> str:
    off = 1 if one_based else 0
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + ",".join(str(x + off) for x in c) + ")" for c in cs)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int, one_based: bool = True) -> Perm:
    """Parse cycle notation such as ``(1,3,5)(2,4)``; ``id`` and ``()`` give the identity."""
    text = text.strip()
    img = list(range(n))
    if text in ("", "id", "()"):
        return tuple(img)
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise ValueError(f"cannot parse cycle notation {text!r}")
    off = 1 if one_based else 0
    for body in _CYCLE_RE.findall(text):
        pts = [int(t) - off for t in re.split(r"[,\s]+", body.strip()) if t]
        if len(set(pts)) != len(pts) or any(not 0 <= x < n for x in pts):
            raise ValueError(f"bad cycle ({body}) for degree {n}")
        # cycles compose left to right
        cyc = {a: b for a, b in zip(pts, pts[1:] + pts[:1])}
        img = [cyc.get(x, x) for x in img]
    return tuple(img)


def from_images(images: Sequence[int]) -> Perm:
    p = tuple(images)
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")
    return p


def restrict(p: Sequence[int], points: Sequence[int]) -> Perm:
    """Restrict to an invariant set, relabelled as 0..len(points)-1 in order."""
    index = {x: i for i, x in enumerate(points)}
    try:
        return tuple(index[p[x]] for x in points)
    except KeyError:
        raise ValueError("point set is not invariant under the permutation")


def orbits(gens: Iterable[Sequence[int]], n: int) -> List[List[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g):
            a, b = find(i), find(x)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def orbit_of(point: int, gens: Sequence[Sequence[int]]) -> List[int]:
    seen = {point}
    queue = [point]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


class _Level:
    __slots__ = ("point", "gens", "trans", "checked")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: List[Perm] = []
        self.trans: Dict[int, Perm] = {point: identity(n)}
        self.checked: set = set()


class PermGroup:
    """Permutation group with a stabilizer chain.

    ``base_prefix`` fixes the first base points, so ``stabilizer_gens(i)``
    generates the pointwise stabilizer of ``base_prefix[:i]``.
    """

    def __init__(self, n: int, gens: Iterable[Sequence[int]] = (),
                 base_prefix: Sequence[int] = ()):
        self.n = n
        self.gens: List[Perm] = []
        self.levels: List[_Level] = [_Level(b, n) for b in base_prefix]
        for g in gens:
            self.add(g)

    # -- chain maintenance -------------------------------------------------

    def _sift(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lev = self.levels[i]
            x = g[lev.point]
            t = lev.trans.get(x)
            if t is None:
                return g, i
            g = compose(g, inverse(t))
        return g, len(self.levels)

    def _close(self, i: int) -> None:
        lev = self.levels[i]
        # orbit extension
        queue = list(lev.trans)
        for x in queue:
            tx = lev.trans[x]
            for s in lev.gens:
                y = s[x]
                if y not in lev.trans:
                    lev.trans[y] = compose(tx, s)
                    queue.append(y)
        # Schreier generators
        changed = True
        while changed:
            changed = False
            for x in list(lev.trans):
                tx = lev.trans[x]
                for gi, s in enumerate(list(lev.gens)):
                    key = (x, gi)
                    if key in lev.checked:
                        continue
                    lev.checked.add(key)
                    y = s[x]
                    sg = compose(compose(tx, s), inverse(lev.trans[y]))
                    if is_identity(sg):
                        continue
                    h, j = self._sift(sg, i + 1)
                    if not is_identity(h):
                        self._insert_below(h, j, i)
                        changed = True

    def _insert_below(self, h: Perm, j: int, i: int) -> None:
        # h fixes the base points of levels < j; it generates at levels i+1..j
        if j == len(self.levels):
            moved = next(x for x in range(self.n) if h[x] != x)
            self.levels.append(_Level(moved, self.n))
        for level in range(i + 1, j + 1):
            self.levels[level].gens.append(h)
        for level in range(j, i, -1):
            self._close(level)

    def add(self, g: Sequence[int]) -> bool:
        """Add a generator; returns False when it was already a member."""
        g = tuple(g)
        if len(g) != self.n:
            raise ValueError("degree mismatch")
        h, j = self._sift(g)
        if is_identity(h):
            return False
        self.gens.append(g)
        if j == len(self.levels):
            moved = next(x for x in range(self.n) if h[x] != x)
            self.levels.append(_Level(moved, self.n))
        for level in range(0, j + 1):
            self.levels[level].gens.append(h)
        for level in range(j, -1, -1):
            self._close(level)
        return True

    # -- queries -------------------------------------------------------------

    def order(self) -> int:
        out = 1
        for lev in self.levels:
            out *= len(lev.trans)
        return out

    def __contains__(self, g: Sequence[int]) -> bool:
        h, _ = self._sift(tuple(g))
        return is_identity(h)

    @property
    def base(self) -> List[int]:
        return [lev.point for lev in self.levels]

    def stabilizer_gens(self, i: int) -> List[Perm]:
        """Generators of the pointwise stabilizer of the first ``i`` base points."""
        if i >= len(self.levels):
            return []
        return list(self.levels[i].gens)

    def basic_orbit(self, i: int) -> List[int]:
        return sorted(self.levels[i].trans)

    def elements(self) -> Iterable[Perm]:
        """Enumerate all elements (only sensible for small groups)."""
        def rec(i, acc):
            if i == len(self.levels):
                yield acc
                return
            for t in self.levels[i].trans.values():
                yield from rec(i + 1, compose(t, acc))
        yield from rec(0, identity(self.n))

    def orbits(self) -> List[List[int]]:
        return orbits(self.gens, self.n)


def group_order(gens: Iterable[Sequence[int]], n: int) -> int:
    return PermGroup(n, gens).order()
