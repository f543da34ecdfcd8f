"""Enumeration of self-dual [44,22,8] codes with a prescribed automorphism of odd prime order.

A candidate is a pair (C_pi, C_phi) placed on a fixed cycle layout.  Symmetry
reduction uses two permutation groups on the cycle coordinates:

* ``S``: automorphisms of C_pi that keep the cycle coordinates together,
  restricted to them.
* ``L``: block permutations of the binary image of C_phi that extend, with
  per-cycle shifts and one global multiplier x -> x^t, to a symmetry of it.

For a permutation ``tau`` of the cycles, ``C^tau`` assembles ``C_pi`` with its
cycle coordinates moved by ``tau`` together with the unchanged ``C_phi``.  Then
``C^tau == C^(s.tau)`` for ``s`` in ``S`` and ``C^tau ~ C^(tau.l)`` for ``l`` in
``L`` (products written in application order), so one ``tau`` per double coset
``S tau L`` suffices.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import cyclotomic, gf2core
from .cyclotomic import ModuleCode
from .decomp import AutomorphismSpec, assemble, split
from .equiv import CanonicalForm, CanonicalKey, Decoration, canonical_form
from .gf2core import BinaryCode
from .perms import Perm, compose, identity, inverse, PermGroup
from .submodules import M1Case, enumerate_M1_cases

log = logging.getLogger(__name__)

# --------------------------------------------------------------------------
# weight enumerator families at length 44


class NotExtremal(ValueError):
    pass


_FAMILIES = {
    "W1": ((44, 4), (976, -8), (12289, -20)),
    "W2": ((44, 4), (1232, -8), (10241, -20)),
}


@dataclass(frozen=True, order=True)
class ExtremalProfile:
    family: str
    beta: int

    def coefficients(self) -> Tuple[int, int, int]:
        """(A8, A10, A12) implied by the profile."""
        return tuple(a + b * self.beta for a, b in _FAMILIES[self.family])

    def __str__(self) -> str:
        return f"{self.family} beta={self.beta}"


def beta_profile(wd: Sequence[int]) -> ExtremalProfile:
    """Resolve (family, beta) from a length-44 weight distribution."""
    if len(wd) != 45:
        raise NotExtremal(f"expected 45 coefficients, got {len(wd)}")
    if any(wd[i] for i in range(1, 8)) or wd[0] != 1:
        raise NotExtremal("not an extremal length-44 profile: a nonzero weight below 8 occurs")
    a8, a10, a12 = wd[8], wd[10], wd[12]
    if (a8 - 44) % 4 or a8 < 44:
        raise NotExtremal(f"not an extremal length-44 profile: A8={a8} is not 44+4*beta")
    beta = (a8 - 44) // 4
    for family in ("W1", "W2"):
        prof = ExtremalProfile(family, beta)
        if prof.coefficients() == (a8, a10, a12):
            return prof
    raise NotExtremal(f"not an extremal length-44 profile: A8={a8} A10={a10} A12={a12}")


# --------------------------------------------------------------------------
# the groups S and L


@dataclass(frozen=True)
class TransformGroup:
    degree: int
    generators: Tuple[Perm, ...]

    @property
    def order(self) -> int:
        return PermGroup(self.degree, self.generators).order()

    def __contains__(self, g: Sequence[int]) -> bool:
        return tuple(g) in PermGroup(self.degree, self.generators)


def _dedup_gens(gens: Iterable[Sequence[int]], degree: int) -> Tuple[Perm, ...]:
    out, seen = [], {identity(degree)}
    for g in gens:
        g = tuple(int(x) for x in g)
        if g not in seen:
            seen.add(g)
            out.append(g)
    return tuple(out)


def compute_S(code_pi: BinaryCode, c: int, f: int) -> TransformGroup:
    """Automorphisms of C_pi preserving the first ``c`` coordinates as a set, restricted to them."""
    if code_pi.n != c + f:
        raise ValueError("C_pi length must be c+f")
    if c == 0:
        return TransformGroup(0, ())
    form = canonical_form(code_pi, colors=[0] * c + [1] * f)
    return TransformGroup(c, _dedup_gens((g[:c] for g in form.aut.generators), c))


def _rotation_decoration(p: int, c: int) -> Decoration:
    """Arcs (i, j) -> (i, j+1) inside every block through one auxiliary point each."""
    n = p * c
    edges = []
    for i in range(c):
        for j in range(p):
            here, nxt, arc = p * i + j, p * i + (j + 1) % p, n + p * i + j
            edges.append((0, (1 << here) | (1 << arc)))
            edges.append((1, (1 << arc) | (1 << nxt)))
    return Decoration(extra_points=n, edges=tuple(edges))


def _multiplier_map(p: int, c: int, t: int) -> Perm:
    return tuple(p * (x // p) + (t * (x % p)) % p for x in range(p * c))


def _block_perm(g: Sequence[int], p: int, c: int) -> Perm:
    return tuple(int(g[p * i]) // p for i in range(c))


def compute_L(code_phi: ModuleCode, multipliers: Optional[Sequence[int]] = None) -> TransformGroup:
    """Block permutations of the binary image of C_phi extendable to a symmetry of it.

    Symmetries act on coordinate (block i, position j) as (i, j) -> (l(i), t*j + k_i)
    with independent shifts k_i and one multiplier t.  By default every unit t
    mod p is tried.
    """
    p, c = code_phi.p, code_phi.c
    image = code_phi.binary()
    deco = _rotation_decoration(p, c)
    base = canonical_form(image, decoration=deco)
    gens = [_block_perm(g, p, c) for g in base.aut.generators]
    units = multipliers if multipliers is not None else range(2, p)
    for t in units:
        if math.gcd(t, p) != 1 or t % p == 1:
            continue
        moved = gf2core.permute(image, _multiplier_map(p, c, t))
        other = canonical_form(moved, weight_distribution=base.weight_distribution, decoration=deco)
        if other.key == base.key:
            iso = compose(base.relabelling, inverse(other.relabelling))
            gens.append(_block_perm(iso, p, c))
    return TransformGroup(c, _dedup_gens(gens, c))


# --------------------------------------------------------------------------
# double cosets and subset orbits


DOUBLE_COSET_LIMIT = 10


def _all_permutations(c: int) -> np.ndarray:
    """All permutations of range(c) in lexicographic order, one per row."""
    if c == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    prev = _all_permutations(c - 1)
    blocks = []
    for first in range(c):
        rest = prev + (prev >= first)
        blocks.append(np.hstack([np.full((len(prev), 1), first, dtype=np.uint8), rest.astype(np.uint8)]))
    return np.vstack(blocks)


def _lehmer_rank(perms: np.ndarray) -> np.ndarray:
    m, c = perms.shape
    rank = np.zeros(m, dtype=np.int64)
    for i in range(c):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        rank += smaller * math.factorial(c - 1 - i)
    return rank


def _few_generators(gens: Sequence[Sequence[int]], c: int, seed: int = 7) -> List[Perm]:
    """A smaller generating set for the same group (random products, fixed seed)."""
    gens = list(_dedup_gens(gens, c))
    if len(gens) <= 2:
        return gens
    import random
    rng = random.Random(seed)
    target = PermGroup(c, gens).order()
    for size in (2, 3):
        for _ in range(40):
            pick = []
            for _ in range(size):
                g = identity(c)
                for _ in range(12):
                    g = compose(g, rng.choice(gens))
                pick.append(g)
            if PermGroup(c, pick).order() == target:
                return pick
    return gens


def double_coset_reps(S: Sequence[Sequence[int]], L: Sequence[Sequence[int]], c: int) -> List[Perm]:
    """One lexicographically least permutation per double coset S tau L of the symmetric group.

    Products are in application order: ``s.tau`` applies ``s`` first.
    """
    if c > DOUBLE_COSET_LIMIT:
        raise ValueError(f"exhaustive double cosets are limited to c <= {DOUBLE_COSET_LIMIT}")
    S, L = _few_generators(S, c), _few_generators(L, c)
    perms = _all_permutations(c)
    m = len(perms)
    labels = np.arange(m, dtype=np.int64)
    moves: List[Callable[[np.ndarray], np.ndarray]] = []
    for s in S:
        moves.append(lambda P, s=np.asarray(s, dtype=np.intp): P[:, s])
    for l in L:
        moves.append(lambda P, l=np.asarray(l, dtype=np.uint8): l[P])
    for move in moves:
        target = _lehmer_rank(move(perms))
        graph = coo_matrix((np.ones(m, dtype=np.int8), (labels, labels[target])), shape=(m, m))
        _, comp = connected_components(graph, directed=False)
        labels = comp[labels]
        # keep labels dense in [0, m)
    _, first = np.unique(labels, return_index=True)
    return [tuple(int(x) for x in perms[i]) for i in sorted(first)]


def double_coset_sizes(S, L, c: int) -> List[int]:
    reps = double_coset_reps(S, L, c)
    grp_s, grp_l = PermGroup(c, S), PermGroup(c, L)
    out = []
    for tau in reps:
        seen = {compose(s, compose(tau, l)) for s in grp_s.elements() for l in grp_l.elements()}
        out.append(len(seen))
    return out


def orbit_reps_on_subsets(gens: Sequence[Sequence[int]], n: int, size: int) -> List[Tuple[int, ...]]:
    """One subset per orbit of the group on ``size``-subsets of range(n), the least in each orbit."""
    seen = set()
    reps = []
    for combo in itertools.combinations(range(n), size):
        m = sum(1 << i for i in combo)
        if m in seen:
            continue
        reps.append(combo)
        seen.add(m)
        stack = [combo]
        while stack:
            cur = stack.pop()
            for g in gens:
                img = tuple(sorted(g[i] for i in cur))
                mm = sum(1 << i for i in img)
                if mm not in seen:
                    seen.add(mm)
                    stack.append(img)
    return reps


# --------------------------------------------------------------------------
# candidates


def cycles_first(code: BinaryCode, fixed: Sequence[int]) -> BinaryCode:
    """Relabel so the coordinates in ``fixed`` come last (in order) and the rest first."""
    rest = [i for i in range(code.n) if i not in fixed]
    order = rest + list(fixed)
    perm = [0] * code.n
    for new, old in enumerate(order):
        perm[old] = new
    return gf2core.permute(code, perm)


def place_cycles(code_pi: BinaryCode, tau: Sequence[int], c: int) -> BinaryCode:
    return gf2core.permute(code_pi, tuple(tau) + tuple(range(c, code_pi.n)))


@dataclass
class Representative:
    key: CanonicalKey
    code: BinaryCode
    profile: ExtremalProfile
    aut_order: int
    provenance: str

    @property
    def digest(self) -> str:
        return self.key.hexdigest()[:16]


@dataclass
class Candidate:
    index: int
    group: str
    code_pi: BinaryCode
    code_phi: ModuleCode
    provenance: str
    spec: AutomorphismSpec


@dataclass
class Evaluation:
    index: int
    group: str
    provenance: str
    key: Optional[CanonicalKey] = None
    profile: Optional[ExtremalProfile] = None
    aut_order: Optional[int] = None
    code: Optional[BinaryCode] = None


def evaluate(cand: Candidate, min_weight: int = 8, verify_sigma: bool = True) -> Evaluation:
    """assemble -> early-exit min weight -> canonical form -> profile."""
    spec = cand.spec
    code = assemble(cand.code_pi, cand.code_phi, spec)
    out = Evaluation(cand.index, cand.group, cand.provenance)
    d = gf2core.min_weight(code, early_exit_at=min_weight)
    if d is None or d < min_weight:
        return out
    wd = gf2core.weight_distribution(code)
    if verify_sigma:
        parts = split(code, spec)
        if parts.fixed.k != (spec.c + spec.f) // 2 or parts.even.k != spec.c * (spec.p - 1) // 2:
            raise AssertionError(f"candidate {cand.index}: dimension identities fail")
    form = canonical_form(code, weight_distribution=wd)
    out.key, out.code = form.key, code
    out.aut_order = form.aut.order
    out.profile = beta_profile(wd) if code.n == 44 else None
    return out


# --------------------------------------------------------------------------
# checkpoint log


class CheckpointError(RuntimeError):
    pass


def _line_checksum(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


class Checkpoint:
    """Append-only JSON-lines log of evaluated candidates; each line carries its own checksum."""

    def __init__(self, path):
        self.path = Path(path)
        self.done: Dict[int, Evaluation] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        for lineno, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                body = rec["body"]
            except (ValueError, KeyError):
                raise CheckpointError(f"{self.path}:{lineno}: unreadable checkpoint line")
            if _line_checksum(json.dumps(body, sort_keys=True)) != rec.get("sha"):
                raise CheckpointError(f"{self.path}:{lineno}: checksum mismatch")
            ev = Evaluation(body["index"], body["group"], body["provenance"])
            if body.get("rows") is not None:
                code = BinaryCode.from_rows([int(r, 16) for r in body["rows"]], body["n"])
                ev.code = code
                ev.key = CanonicalKey(body["n"], len(body["key_rows"]),
                                      tuple(int(r, 16) for r in body["key_rows"]),
                                      tuple((a, int(m, 16)) for a, m in body.get("key_extra", [])))
                ev.profile = ExtremalProfile(*body["profile"]) if body.get("profile") else None
                ev.aut_order = body["aut_order"]
            self.done[ev.index] = ev

    def record(self, ev: Evaluation) -> None:
        body = {"index": ev.index, "group": ev.group, "provenance": ev.provenance}
        if ev.key is not None:
            body.update({
                "n": ev.code.n,
                "rows": [format(r, "x") for r in ev.code.rows],
                "key_rows": [format(r, "x") for r in ev.key.rows],
                "key_extra": [[a, format(m, "x")] for a, m in ev.key.decoration],
                "profile": [ev.profile.family, ev.profile.beta] if ev.profile else None,
                "aut_order": ev.aut_order,
            })
        line = json.dumps({"body": body, "sha": _line_checksum(json.dumps(body, sort_keys=True))})
        with open(self.path, "a") as fh:
            fh.write(line + "\n")
        self.done[ev.index] = ev


# --------------------------------------------------------------------------
# reports


@dataclass
class GroupSummary:
    name: str
    candidates: int = 0
    passed: int = 0
    representatives: List[Representative] = field(default_factory=list)


@dataclass
class ClassificationReport:
    target: str
    representatives: List[Representative]
    groups: Dict[str, GroupSummary]
    inputs: Dict[str, str]
    candidates: int
    seconds: float

    @property
    def counts(self) -> Dict[ExtremalProfile, int]:
        return dict(sorted(Counter(r.profile for r in self.representatives).items()))

    @property
    def total(self) -> int:
        return len(self.representatives)

    def group_counts(self, name: str) -> Dict[ExtremalProfile, int]:
        return dict(sorted(Counter(r.profile for r in self.groups[name].representatives).items()))

    def profile_table(self) -> str:
        lines = ["family\tbeta\tcount"]
        for prof, cnt in self.counts.items():
            lines.append(f"{prof.family}\t{prof.beta}\t{cnt}")
        lines.append(f"TOTAL\t\t{self.total}")
        return "\n".join(lines) + "\n"

    def representative_table(self) -> str:
        lines = ["digest\tfamily\tbeta\taut_order\tprovenance"]
        for r in self.representatives:
            lines.append(f"{r.digest}\t{r.profile.family}\t{r.profile.beta}\t{r.aut_order}\t{r.provenance}")
        return "\n".join(lines) + "\n"


def _sort_reps(reps: Iterable[Representative]) -> List[Representative]:
    return sorted(reps, key=lambda r: (r.profile, -r.aut_order, r.key.to_bytes()))


def run_candidates(target: str, candidates: Iterable[Candidate], inputs: Dict[str, str],
                   checkpoint: Optional[Checkpoint] = None, threads: int = 1,
                   progress: Optional[Callable[[int], None]] = None) -> ClassificationReport:
    """Evaluate candidates, dedup per group and globally, and build the report."""
    start = time.perf_counter()
    groups: Dict[str, GroupSummary] = {}
    group_keys: Dict[str, Dict[CanonicalKey, Representative]] = {}
    global_keys: Dict[CanonicalKey, Representative] = {}
    total = 0

    def consume(ev: Evaluation) -> None:
        summary = groups.setdefault(ev.group, GroupSummary(ev.group))
        summary.candidates += 1
        if ev.key is None:
            return
        summary.passed += 1
        local = group_keys.setdefault(ev.group, {})
        if ev.key not in local:
            rep = Representative(ev.key, ev.code, ev.profile, ev.aut_order, ev.provenance)
            local[ev.key] = rep
            global_keys.setdefault(ev.key, rep)

    pending: List[Candidate] = []
    for cand in candidates:
        total += 1
        if checkpoint is not None and cand.index in checkpoint.done:
            consume(checkpoint.done[cand.index])
        else:
            pending.append(cand)

    def finish(ev: Evaluation) -> None:
        if checkpoint is not None:
            checkpoint.record(ev)
        consume(ev)
        if progress:
            progress(ev.index)

    if threads > 1 and len(pending) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for ev in pool.map(evaluate, pending, chunksize=4):
                finish(ev)
    else:
        for cand in pending:
            finish(evaluate(cand))
    for name, summary in groups.items():
        summary.representatives = _sort_reps(group_keys.get(name, {}).values())
    reps = _sort_reps(global_keys.values())
    return ClassificationReport(str(target), reps, dict(sorted(groups.items())), inputs, total,
                                time.perf_counter() - start)


def merge_reports(label: str, reports: Sequence[ClassificationReport]) -> ClassificationReport:
    """Union of several reports with a global dedup by canonical key (first occurrence wins)."""
    seen: Dict[CanonicalKey, Representative] = {}
    groups: Dict[str, GroupSummary] = {}
    inputs: Dict[str, str] = {}
    for rep in reports:
        for r in rep.representatives:
            seen.setdefault(r.key, r)
        for name, g in rep.groups.items():
            groups[f"{rep.target} {name}"] = g
        inputs.update(rep.inputs)
    return ClassificationReport(label, _sort_reps(seen.values()), groups, inputs,
                                sum(r.candidates for r in reports), sum(r.seconds for r in reports))


# --------------------------------------------------------------------------
# pipelines


def _checksum_code(code: BinaryCode) -> str:
    return hashlib.sha256(gf2core.format_matrix(code).encode()).hexdigest()


def _checksum_module(code: ModuleCode) -> str:
    return hashlib.sha256(cyclotomic.format_module(code).encode()).hexdigest()


def double_coset_candidates(code_pi: BinaryCode, code_phi: ModuleCode, spec: AutomorphismSpec,
                            group: str, start: int = 0, label: str = "") -> List[Candidate]:
    """One candidate per double coset of S (from C_pi) and L (from C_phi)."""
    S = compute_S(code_pi, spec.c, spec.f)
    L = compute_L(code_phi)
    out = []
    for tau in double_coset_reps(S.generators, L.generators, spec.c):
        out.append(Candidate(start + len(out), group, place_cycles(code_pi, tau, spec.c), code_phi,
                             f"{label} tau={_cycles_text(tau)}".strip(), spec))
    return out


def _cycles_text(tau: Sequence[int]) -> str:
    from .perms import format_cycles
    return format_cycles(tau).replace(" ", "")


def order7_type_6_2_candidates(dims: Sequence[Tuple[int, int]] = ((1, 5), (2, 4), (3, 3))
                               ) -> Tuple[List[Candidate], Dict[str, str]]:
    """Candidates for type 7-(6,2): every M_1 case, base C_pi in {C2^4, E8}, every placement."""
    from . import catalog
    spec = AutomorphismSpec(7, 6, 2)
    bases = {"C2^4": catalog.load("C2_4"), "E8": catalog.load("E8")}
    inputs = {f"catalog:{n}": _checksum_code(b) for n, b in (("C2_4", bases["C2^4"]), ("E8", bases["E8"]))}
    case_names = {(1, 5): "I", (2, 4): "II", (3, 3): "III"}
    out: List[Candidate] = []
    for dim in dims:
        cases = enumerate_M1_cases(7, 6, tuple(dim))
        for base_name, base in bases.items():
            aut = canonical_form(base).aut.generators
            for fixed in orbit_reps_on_subsets(aut, 8, 2):
                code_pi = cycles_first(base, fixed)
                for m1 in cases:
                    group = f"case {case_names.get(tuple(dim), dim)} / {base_name}"
                    label = f"{m1.label} {base_name} fixed={fixed[0] + 1},{fixed[1] + 1}"
                    out.extend(double_coset_candidates(code_pi, m1.phi, spec, group, len(out), label))
    return out, inputs


def orthonormal_completions(D: BinaryCode) -> Iterator[Tuple[int, ...]]:
    """Ordered r-tuples (F_1..F_r) in D^perp, independent mod D, with F_i . F_j = delta_ij.

    Here ``r = dim D^perp - dim D``, so that [[0 | D], [I_r | F]] is self-dual.
    """
    n = D.n
    perp = gf2core.dual(D)
    if not perp.contains_code(D):
        raise ValueError("D is not self-orthogonal")
    # coset representatives of D^perp / D
    basis, _, piv = gf2core.rref(D.rows, n)
    reps_basis = []
    cur, cur_piv = list(basis), list(piv)
    for v in perp.rows:
        red = gf2core.reduce_by(v, cur, cur_piv)
        if red:
            reps_basis.append(red)
            cur, _, cur_piv = gf2core.rref(cur + [red], n)
    cosets = []
    for mask in range(1, 1 << len(reps_basis)):
        v = 0
        for i, b in enumerate(reps_basis):
            if (mask >> i) & 1:
                v ^= b
        cosets.append(v)
    unit = [v for v in cosets if gf2core.weight(v) % 2 == 1]
    r = perp.k - D.k
    if r == 0:
        yield ()
        return

    def extend(chosen):
        if len(chosen) == r:
            yield tuple(chosen)
            return
        for v in unit:
            if all(gf2core.dot(v, u) == 0 for u in chosen) and \
                    gf2core.rank_of(list(D.rows) + chosen + [v], n) == D.k + len(chosen) + 1:
                yield from extend(chosen + [v])

    yield from extend([])


def order7_type_3_23_candidates(dataset=None) -> Tuple[List[Candidate], Dict[str, str]]:
    """Candidates for type 7-(3,23): C_pi = [[0|D],[I3|F]] over the [23,10,8] codes D."""
    from . import catalog
    spec = AutomorphismSpec(7, 3, 23)
    if dataset is None:
        dataset = catalog.golay_hyperplane_dataset()
    phi = catalog.load("M1_7_3_23") + catalog.load("M2_7_3_23")
    inputs = {"dataset": dataset.name, "completeness": dataset.completeness}
    for src, sha in zip(dataset.sources, dataset.checksums):
        inputs[f"dataset:{Path(src).name}"] = sha
    out: List[Candidate] = []
    for idx, D in enumerate(dataset.entries, start=1):
        for F in orthonormal_completions(D):
            if len(F) != 3:
                raise ValueError(f"D{idx}: expected a [23,10] code with D^perp/D of dimension 3")
            rows = [d << 3 for d in D.rows] + [(1 << i) | (F[i] << 3) for i in range(3)]
            code_pi = BinaryCode.from_rows(rows, 26)
            out.append(Candidate(len(out), f"D{idx}", code_pi, phi, f"D{idx} F#{len(out)}", spec))
    return out, inputs


def order3_R24_candidates(phi_name: str, use_published: bool = False
                          ) -> Tuple[List[Candidate], Dict[str, str]]:
    """Type 3-(10,14) with C_pi = G_pi(R24) and C_phi from the bundled E10 or B10 matrix."""
    from . import catalog
    spec = AutomorphismSpec(3, 10, 14)
    code_pi = catalog.load("Gpi_R24")
    phi = ModuleCode.from_binary(catalog.load(f"Esigma_10_14_{phi_name}"), 3, 10)
    inputs = {"catalog:Gpi_R24": _checksum_code(code_pi), f"catalog:Esigma_10_14_{phi_name}": _checksum_module(phi)}
    if use_published:
        taus = catalog.load(f"tau_R24_{phi_name}")
        return [Candidate(i, f"R24+{phi_name}", place_cycles(code_pi, t, 10), phi,
                          f"published tau={_cycles_text(t)}", spec) for i, t in enumerate(taus)], inputs
    return double_coset_candidates(code_pi, phi, spec, f"R24+{phi_name}", label=f"R24 {phi_name}"), inputs


PIPELINES = {
    "p=7 c=6 f=2": "order7_type_6_2_candidates",
    "p=7 c=3 f=23": "order7_type_3_23_candidates",
    "p=3 c=10 f=14": "order3_R24_candidates",
    "order 7": "both order-7 types",
}


def _renumber(parts: Iterable[Tuple[str, List[Candidate]]]) -> List[Candidate]:
    out = []
    for prefix, cands in parts:
        for cnd in cands:
            cnd.index = len(out)
            if prefix:
                cnd.group = f"{prefix} {cnd.group}"
            out.append(cnd)
    return out


def classify_candidates(target, inputs: Optional[dict] = None) -> Tuple[str, List[Candidate], Dict[str, str]]:
    """Candidate list for an AutomorphismSpec, or for every type of a prime order (an int)."""
    inputs = dict(inputs or {})
    if isinstance(target, int):
        if target != 7:
            raise ValueError(f"order {target}: only order 7 is assembled from its types here")
        c62, m62 = order7_type_6_2_candidates(inputs.get("dims", ((1, 5), (2, 4), (3, 3))))
        c323, m323 = order7_type_3_23_candidates(inputs.get("dataset"))
        return "order 7", _renumber([("7-(6,2)", c62), ("7-(3,23)", c323)]), {**m62, **m323}
    key = str(target)
    if key == "p=7 c=6 f=2":
        cands, meta = order7_type_6_2_candidates(inputs.get("dims", ((1, 5), (2, 4), (3, 3))))
    elif key == "p=7 c=3 f=23":
        cands, meta = order7_type_3_23_candidates(inputs.get("dataset"))
    elif key == "p=3 c=10 f=14":
        which = inputs.get("phi", "both")
        names = ["B10", "E10"] if which == "both" else [which]
        parts, meta = [], {}
        for name in names:
            more, m = order3_R24_candidates(name, use_published=inputs.get("published_tau", False))
            parts.append(("", more))
            meta.update(m)
        cands = _renumber(parts)
    else:
        raise ValueError(f"no pipeline for {target}; supported: {', '.join(PIPELINES)}")
    return key, cands, meta


def classify(target, inputs: Optional[dict] = None, checkpoint=None,
             threads: int = 1, progress=None) -> ClassificationReport:
    """Run the pipeline registered for ``target``.

    ``target`` is an AutomorphismSpec or the prime order 7 (both order-7 types
    with a global dedup).  ``inputs`` may carry ``dataset`` (a catalog Dataset
    of [23,10,8] codes for 7-(3,23)), ``phi`` ('E10', 'B10' or 'both' for
    3-(10,14) with C_pi = R24), ``published_tau`` (use the bundled tau lists
    instead of double cosets) and ``dims`` (a subset of the M_1 dimension
    cases for 7-(6,2)).
    """
    label, cands, meta = classify_candidates(target, inputs)
    cp = Checkpoint(checkpoint) if isinstance(checkpoint, (str, Path)) else checkpoint
    return run_candidates(label, cands, meta, cp, threads, progress)


# --------------------------------------------------------------------------
# expectations


class ExpectError(ValueError):
    pass


@dataclass
class Expectation:
    counts: Dict[ExtremalProfile, int]
    total: Optional[int]


def parse_expect(text: str, source: str = "<expect>") -> Expectation:
    counts: Dict[ExtremalProfile, int] = {}
    total = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0].upper() == "TOTAL" and len(parts) == 2:
                total = int(parts[1])
            elif len(parts) == 3 and parts[0] in _FAMILIES:
                counts[ExtremalProfile(parts[0], int(parts[1]))] = int(parts[2])
            else:
                raise ValueError
        except ValueError:
            raise ExpectError(f"{source}:{lineno}: expected 'FAMILY BETA COUNT' or 'TOTAL N'")
    return Expectation(counts, total)


def check_expectation(report: ClassificationReport, exp: Expectation) -> List[str]:
    problems = []
    got = report.counts
    for prof in sorted(set(got) | set(exp.counts)):
        if got.get(prof, 0) != exp.counts.get(prof, 0):
            problems.append(f"{prof.family} {prof.beta}: expected {exp.counts.get(prof, 0)}, got {got.get(prof, 0)}")
    if exp.total is not None and report.total != exp.total:
        problems.append(f"TOTAL: expected {exp.total}, got {report.total}")
    return problems


# --------------------------------------------------------------------------
# output


def write_report(report: ClassificationReport, outdir) -> List[Path]:
    """profiles.tsv, representatives.tsv, inputs.tsv, codes/<digest>.gm and two figures."""
    outdir = Path(outdir)
    (outdir / "codes").mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in (("profiles.tsv", report.profile_table()),
                       ("representatives.tsv", report.representative_table()),
                       ("inputs.tsv", "".join(f"{k}\t{v}\n" for k, v in sorted(report.inputs.items())))):
        (outdir / name).write_text(text)
        written.append(outdir / name)
    for r in report.representatives:
        fp = outdir / "codes" / f"{r.digest}.gm"
        gf2core.write_matrix(r.code, fp)
        written.append(fp)
    written.extend(plot_report(report, outdir))
    return written


def plot_report(report: ClassificationReport, outdir) -> List[Path]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    paths = []
    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5), sharey=True)
    for ax, family in zip(axes, ("W1", "W2")):
        items = [(p.beta, n) for p, n in report.counts.items() if p.family == family]
        if items:
            betas, counts = zip(*items)
            ax.bar([str(b) for b in betas], counts, color="tab:blue" if family == "W1" else "tab:orange")
        ax.set_title(family)
        ax.set_xlabel("beta")
    axes[0].set_ylabel("codes")
    fig.suptitle(f"{report.target}: {report.total} codes")
    fig.tight_layout()
    paths.append(outdir / "beta_counts.png")
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 3.5))
    orders = Counter(r.aut_order for r in report.representatives)
    if orders:
        xs = sorted(orders)
        ax.bar(range(len(xs)), [orders[x] for x in xs])
        ax.set_xticks(range(len(xs)))
        ax.set_xticklabels([str(x) for x in xs], rotation=60, ha="right", fontsize=7)
    ax.set_xlabel("|Aut|")
    ax.set_ylabel("codes")
    fig.tight_layout()
    paths.append(outdir / "aut_orders.png")
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)
    return paths
