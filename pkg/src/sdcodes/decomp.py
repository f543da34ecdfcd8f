"""Split a binary code along a prescribed automorphism of prime order and rebuild it.

Layout convention: cycle ``i`` occupies coordinates ``p*i .. p*i+p-1`` and the
``f`` fixed points come last.  The automorphism shifts each cycle block by one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from . import cyclotomic, gf2core
from .cyclotomic import ModuleCode
from .gf2core import BinaryCode


class SpecError(ValueError):
    pass


class NotAnAutomorphism(ValueError):
    def __init__(self, witness: int, n: int):
        self.witness = witness
        super().__init__("the cycle layout does not preserve the code; witness "
                         + gf2core.vector_to_string(witness, n))


class SelfDualityError(ValueError):
    def __init__(self, verdict: "SelfDualityVerdict"):
        self.verdict = verdict
        super().__init__(verdict.describe())


@dataclass(frozen=True)
class AutomorphismSpec:
    p: int
    c: int
    f: int

    def __post_init__(self):
        if not cyclotomic.is_prime(self.p) or self.p < 3:
            raise SpecError(f"p={self.p} is not an odd prime")
        if self.c < 0 or self.f < 0:
            raise SpecError("c and f must be nonnegative")

    @property
    def n(self) -> int:
        return self.p * self.c + self.f

    def cycle(self, i: int) -> range:
        return range(self.p * i, self.p * (i + 1))

    def fixed_point(self, j: int) -> int:
        return self.p * self.c + j

    def permutation(self) -> Tuple[int, ...]:
        img = list(range(self.n))
        for i in range(self.c):
            base = self.p * i
            for t in range(self.p):
                img[base + t] = base + (t + 1) % self.p
        return tuple(img)

    def admits_self_dual(self) -> bool:
        return (self.c + self.f) % 2 == 0 and (self.c * (self.p - 1)) % 2 == 0

    def __str__(self) -> str:
        return f"p={self.p} c={self.c} f={self.f}"

    @classmethod
    def parse(cls, text: str) -> "AutomorphismSpec":
        fields = dict(re.findall(r"([pcf])\s*=\s*(\d+)", text))
        leftover = re.sub(r"[pcf]\s*=\s*\d+", "", text).replace(",", " ").strip()
        if set(fields) != {"p", "c", "f"} or leftover:
            raise SpecError(f"cannot parse automorphism spec {text!r}; expected 'p=7 c=6 f=2'")
        return cls(int(fields["p"]), int(fields["c"]), int(fields["f"]))


@dataclass(frozen=True)
class DecompositionParts:
    fixed: BinaryCode
    even: BinaryCode
    spec: AutomorphismSpec


def _cycle_mask(spec: AutomorphismSpec, i: int) -> int:
    return ((1 << spec.p) - 1) << (spec.p * i)


def split(code: BinaryCode, spec: AutomorphismSpec) -> DecompositionParts:
    if code.n != spec.n:
        raise SpecError(f"code length {code.n} differs from n={spec.n}")
    sigma = spec.permutation()
    shifted = [gf2core.permute_vector(r, sigma) for r in code.rows]
    for r, s in zip(code.rows, shifted):
        if s not in code:
            raise NotAnAutomorphism(r, code.n)
    fixed = gf2core.kernel_combinations(code.rows, [r ^ s for r, s in zip(code.rows, shifted)])
    parity = []
    for r in code.rows:
        bits = 0
        for i in range(spec.c):
            bits |= (gf2core.weight(r & _cycle_mask(spec, i)) & 1) << i
        bits |= (r >> (spec.p * spec.c)) << spec.c
        parity.append(bits)
    even = gf2core.kernel_combinations(code.rows, parity)
    return DecompositionParts(BinaryCode.from_rows(fixed, code.n),
                              BinaryCode.from_rows(even, code.n), spec)


def _project_vector(v: int, spec: AutomorphismSpec) -> int:
    out = 0
    for i in range(spec.c):
        block = v & _cycle_mask(spec, i)
        if block == 0:
            continue
        if block != _cycle_mask(spec, i):
            raise ValueError(f"codeword is not constant on cycle {i + 1}")
        out |= 1 << i
    return out | ((v >> (spec.p * spec.c)) << spec.c)


def _lift_vector(u: int, spec: AutomorphismSpec) -> int:
    out = 0
    for i in range(spec.c):
        if (u >> i) & 1:
            out |= _cycle_mask(spec, i)
    return out | ((u >> spec.c) << (spec.p * spec.c))


def project_pi(fixed: BinaryCode, spec: AutomorphismSpec) -> BinaryCode:
    return BinaryCode.from_rows([_project_vector(r, spec) for r in fixed.rows], spec.c + spec.f)


def lift_pi(code_pi: BinaryCode, spec: AutomorphismSpec) -> BinaryCode:
    if code_pi.n != spec.c + spec.f:
        raise SpecError(f"C_pi must have length c+f={spec.c + spec.f}, got {code_pi.n}")
    return BinaryCode.from_rows([_lift_vector(r, spec) for r in code_pi.rows], spec.n)


def map_phi(even: BinaryCode, spec: AutomorphismSpec) -> ModuleCode:
    pc = spec.p * spec.c
    for r in even.rows:
        if r >> pc:
            raise ValueError("even subcode has support on a fixed point")
        for i in range(spec.c):
            if gf2core.weight(r & _cycle_mask(spec, i)) % 2:
                raise ValueError(f"odd weight on cycle {i + 1}")
    return ModuleCode.from_binary(BinaryCode.from_rows(even.rows, pc), spec.p, spec.c)


def lift_phi(code_phi: ModuleCode, spec: AutomorphismSpec) -> BinaryCode:
    if code_phi.p != spec.p or code_phi.c != spec.c:
        raise SpecError("module parameters differ from the automorphism spec")
    return BinaryCode.from_rows(code_phi.binary().rows, spec.n)


@dataclass(frozen=True)
class SelfDualityVerdict:
    pi_self_dual: bool
    form_vanishes: bool
    phi_dimension_ok: bool
    violating_pair: Optional[Tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return self.pi_self_dual and self.form_vanishes and self.phi_dimension_ok

    @property
    def condition_i(self) -> bool:
        return self.pi_self_dual

    @property
    def condition_ii(self) -> bool:
        return self.form_vanishes and self.phi_dimension_ok

    def describe(self) -> str:
        if self.ok:
            return "both conditions hold"
        parts = []
        if not self.pi_self_dual:
            parts.append("condition (i) fails: C_pi is not self-dual")
        if not self.form_vanishes:
            i, j = self.violating_pair
            parts.append(f"condition (ii) fails: form of generators {i + 1} and {j + 1} is nonzero")
        if not self.phi_dimension_ok:
            parts.append("condition (ii) fails: C_phi is not maximal (component dimensions do not sum to cs/2)")
        return "; ".join(parts)


def check_self_duality_conditions(code_pi: BinaryCode, code_phi: ModuleCode,
                                  spec: AutomorphismSpec) -> SelfDualityVerdict:
    """Both halves of the self-duality criterion; the form is checked on generator pairs."""
    pi_ok = code_pi.n == spec.c + spec.f and gf2core.is_self_dual(code_pi)
    pair = None
    rows = code_phi.rows
    for i, u in enumerate(rows):
        for j in range(i, len(rows)):
            if cyclotomic.form_value(u, rows[j], spec.p):
                pair = (i, j)
                break
        if pair:
            break
    dim_ok = code_phi.in_P() and 2 * code_phi.binary_dim == spec.c * (spec.p - 1)
    return SelfDualityVerdict(pi_ok, pair is None, dim_ok, pair)


def assemble(code_pi: BinaryCode, code_phi: ModuleCode, spec: AutomorphismSpec,
             check: bool = True) -> BinaryCode:
    """lift_pi(C_pi) + lift_phi(C_phi); raises SelfDualityError when ``check`` and a condition fails."""
    if check:
        verdict = check_self_duality_conditions(code_pi, code_phi, spec)
        if not verdict.ok:
            raise SelfDualityError(verdict)
    return BinaryCode.from_rows(lift_pi(code_pi, spec).rows + lift_phi(code_phi, spec).rows, spec.n)


@dataclass(frozen=True)
class PiStructure:
    B: Tuple[int, ...]
    D: Tuple[int, ...]
    E: Tuple[int, ...]
    F: Tuple[int, ...]
    c: int
    f: int

    @property
    def k1(self) -> int:
        return len(self.B)

    @property
    def k2(self) -> int:
        return len(self.D)

    @property
    def k3(self) -> int:
        return len(self.E)

    def generator_rows(self) -> List[int]:
        """Rows in the block shape [[B,0],[0,D],[E,F]]."""
        c = self.c
        return list(self.B) + [d << c for d in self.D] + [e | (f << c) for e, f in zip(self.E, self.F)]


class StructureError(RuntimeError):
    pass


def structure_split(code_pi: BinaryCode, c: int, f: int, verify: bool = True) -> PiStructure:
    if code_pi.n != c + f:
        raise SpecError("length must be c+f")
    left = list(range(c))
    right = list(range(c, c + f))
    b_code = code_pi.shorten(left) if c else BinaryCode.zero(0)
    d_code = code_pi.shorten(right) if f else BinaryCode.zero(0)
    known = list(b_code.rows) + [d << c for d in d_code.rows]
    basis, _, piv = gf2core.rref(known, c + f)
    extra = []
    for r in code_pi.rows:
        red = gf2core.reduce_by(r, basis, piv)
        if red:
            extra.append(red)
            basis, _, piv = gf2core.rref(basis + [red], c + f)
    low = (1 << c) - 1
    E = tuple(r & low for r in extra)
    F = tuple(r >> c for r in extra)
    out = PiStructure(tuple(b_code.rows), tuple(d_code.rows), E, F, c, f)
    if verify:
        problems = structure_violations(out, code_pi.k)
        if problems:
            raise StructureError("; ".join(problems))
    return out


def structure_violations(s: PiStructure, k: int) -> List[str]:
    problems = []
    c, f = s.c, s.f
    if gf2core.rank_of(list(s.E), c) != s.k3 or gf2core.rank_of(list(s.F), f) != s.k3:
        problems.append("rank(E) or rank(F) differs from k3")
    if 2 * s.k2 != 2 * s.k1 + f - c:
        problems.append("k2 != k1 + (f-c)/2")
    if s.k1 + s.k2 + s.k3 != k:
        problems.append("block dimensions do not sum to k")
    b_star = BinaryCode.from_rows(s.B, c)
    b_e = BinaryCode.from_rows(s.B + s.E, c)
    if not gf2core.dual(b_e).same_space(b_star):
        problems.append("span(B,E) dual differs from span(B)")
    d_star = BinaryCode.from_rows(s.D, f)
    d_f = BinaryCode.from_rows(s.D + s.F, f)
    if not gf2core.dual(d_f).same_space(d_star):
        problems.append("span(D,F) dual differs from span(D)")
    return problems
