"""Arithmetic in R_p = GF(2)[x]/(x^p - 1) and its even-weight ideal P.

Ring elements are p-bit ints (bit i holds the coefficient of x^i).  An
:class:`IdealSystem` carries the factorisation of (x^p - 1)/(x - 1) and the
primitive idempotents that split P into a direct sum of fields I_1..I_s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from . import gf2core


# --------------------------------------------------------------------------
# plain GF(2)[x] polynomials


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> Tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def poly_gcdex(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = poly_divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 ^ poly_mul(q, s1)
        t0, t1 = t1, t0 ^ poly_mul(q, t1)
    return a, s0, t0


def poly_str(a: int) -> str:
    if a == 0:
        return "0"
    terms = []
    for i in range(a.bit_length() - 1, -1, -1):
        if (a >> i) & 1:
            terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
    return "+".join(terms)


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def multiplicative_order(a: int, p: int) -> int:
    k, v = 1, a % p
    while v != 1:
        v = v * a % p
        k += 1
    return k


# --------------------------------------------------------------------------
# ring R_p


class ModulusMismatch(ValueError):
    pass


@dataclass(frozen=True)
class RingElement:
    """An element of R_p; mostly a convenience wrapper over the int form."""

    p: int
    coeffs: int

    def __post_init__(self):
        if self.coeffs >> self.p:
            raise ValueError("coefficient mask exceeds the modulus")

    def _check(self, other: "RingElement") -> None:
        if other.p != self.p:
            raise ModulusMismatch(f"R_{self.p} vs R_{other.p}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.p, self.coeffs ^ other.coeffs)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.p, ring_mul(self.coeffs, other.coeffs, self.p))

    def substitute(self, t: int) -> "RingElement":
        return RingElement(self.p, substitute(self.coeffs, t, self.p))

    def conjugate(self) -> "RingElement":
        return RingElement(self.p, conjugate(self.coeffs, self.p))

    def __str__(self) -> str:
        return element_to_string(self.coeffs, self.p)


def ring_add(a: int, b: int) -> int:
    return a ^ b


def ring_mul(a: int, b: int, p: int) -> int:
    full = (1 << p) - 1
    out = 0
    i = 0
    while b:
        if b & 1:
            out ^= ((a << i) | (a >> (p - i))) & full
        b >>= 1
        i += 1
    return out


def shift(a: int, k: int, p: int) -> int:
    """Multiply by x^k (a cyclic shift of the coefficient vector)."""
    k %= p
    full = (1 << p) - 1
    return ((a << k) | (a >> (p - k))) & full


def substitute(a: int, t: int, p: int) -> int:
    """a(x) -> a(x^t); a ring automorphism when gcd(t, p) = 1."""
    if t % p == 0:
        raise ValueError("substitution exponent must be invertible mod p")
    out = 0
    while a:
        low = a & -a
        i = low.bit_length() - 1
        out |= 1 << (i * t % p)
        a ^= low
    return out


def conjugate(a: int, p: int) -> int:
    return substitute(a, p - 1, p)


def is_even(a: int) -> bool:
    return a.bit_count() % 2 == 0


def element_to_string(a: int, p: int) -> str:
    return gf2core.vector_to_string(a, p)


def element_from_string(s: str, p: int) -> int:
    if len(s) != p:
        raise ValueError(f"ring element {s!r} does not have {p} coefficients")
    return gf2core.vector_from_string(s)


# --------------------------------------------------------------------------
# ideal decomposition


@dataclass(frozen=True)
class IdealSystem:
    p: int
    factors: Tuple[int, ...]
    generators: Tuple[int, ...]
    identities: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.factors)

    def degree(self, j: int) -> int:
        return self.factors[j].bit_length() - 1

    @property
    def two_is_primitive(self) -> bool:
        return self.s == 1

    def component(self, a: int, j: int) -> int:
        return ring_mul(self.identities[j], a, self.p)

    def ideal_of(self, a: int) -> int:
        """Index j with a in I_j (a nonzero), or -1 when a is not in a single ideal."""
        for j, e in enumerate(self.identities):
            if a and ring_mul(e, a, self.p) == a:
                return j
        return -1

    def ideal_elements(self, j: int) -> List[int]:
        basis = [shift(self.identities[j], i, self.p) for i in range(self.degree(j))]
        out = [0]
        for b in basis:
            out += [x ^ b for x in out]
        return sorted(out)

    def field_pow(self, a: int, m: int, j: int | None = None) -> int:
        if j is None:
            j = self.ideal_of(a)
            if j < 0:
                raise ValueError("element is not in a single field component")
        order = (1 << self.degree(j)) - 1
        if a == 0:
            if m <= 0:
                raise ZeroDivisionError("zero has no inverse")
            return 0
        m %= order
        result = self.identities[j]
        base = a
        while m:
            if m & 1:
                result = ring_mul(result, base, self.p)
            base = ring_mul(base, base, self.p)
            m >>= 1
        return result

    def field_inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        j = self.ideal_of(a)
        if j < 0:
            raise ValueError("element is not in a single field component")
        return self.field_pow(a, -1, j)

    def frobenius_exponents(self) -> List[int]:
        """Powers of 2 mod p; substitution by these maps every I_j to itself."""
        out, t = [], 1
        while True:
            out.append(t)
            t = t * 2 % self.p
            if t == 1:
                return out


@lru_cache(maxsize=None)
def factor_cyclotomic(p: int) -> IdealSystem:
    """Factor (x^p - 1)/(x - 1) over GF(2) and build the field idempotents."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p > 31:
        raise ValueError("p is capped at 31")
    phi = (1 << p) - 1  # 1 + x + ... + x^(p-1)
    d = multiplicative_order(2, p)
    s = (p - 1) // d
    if s == 1:
        factors = [phi]
    else:
        factors = []
        rest = phi
        for cand in range(1 << d, 1 << (d + 1)):
            if not cand & 1:
                continue
            q, r = poly_divmod(rest, cand)
            if r == 0:
                factors.append(cand)
                rest = q
                if rest == 1:
                    break
        assert len(factors) == s and rest == 1
    factors.sort()
    xp1 = (1 << p) | 1
    generators, identities = [], []
    for h in factors:
        g, r = poly_divmod(xp1, h)
        assert r == 0
        gcd, a, _ = poly_gcdex(g, h)
        assert gcd == 1
        e = poly_divmod(poly_mul(a, g), xp1)[1]
        generators.append(g)
        identities.append(e)
    return IdealSystem(p, tuple(factors), tuple(generators), tuple(identities))


# --------------------------------------------------------------------------
# vectors over P and module codes


def form_value(u: Sequence[int], v: Sequence[int], p: int) -> int:
    """sum_i u_i(x) v_i(x^-1) in R_p."""
    if len(u) != len(v):
        raise ValueError("vectors of unequal length")
    out = 0
    for a, b in zip(u, v):
        if a and b:
            out ^= ring_mul(a, conjugate(b, p), p)
    return out


def hermitian_power_form(u: Sequence[int], v: Sequence[int], p: int) -> int:
    """sum_i u_i v_i^(2^((p-1)/2)) computed by repeated squaring in R_p.

    Agrees with :func:`form_value` whenever 2 is a primitive root mod p.
    """
    out = 0
    for a, b in zip(u, v):
        w = b
        for _ in range((p - 1) // 2):
            w = ring_mul(w, w, p)
        out ^= ring_mul(a, w, p)
    return out


def pack(vec: Sequence[int], p: int) -> int:
    """Concatenate ring coordinates into one binary word of length p*len(vec)."""
    out = 0
    for i, a in enumerate(vec):
        out |= a << (p * i)
    return out


def unpack(word: int, p: int, c: int) -> Tuple[int, ...]:
    full = (1 << p) - 1
    return tuple((word >> (p * i)) & full for i in range(c))


@dataclass(frozen=True)
class ModuleCode:
    """A submodule of P^c given by module generators (rows of ring elements)."""

    p: int
    c: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.c:
                raise ValueError("row length differs from c")
            for a in r:
                if a >> self.p:
                    raise ValueError("ring element exceeds modulus")

    @classmethod
    def from_binary(cls, code: gf2core.BinaryCode, p: int, c: int) -> "ModuleCode":
        if code.n != p * c:
            raise ValueError("binary length must equal p*c")
        return cls(p, c, tuple(unpack(r, p, c) for r in code.rows))

    def binary(self) -> gf2core.BinaryCode:
        """The GF(2) span of all x^i-multiples of the generators, length p*c."""
        words = []
        for r in self.rows:
            for i in range(self.p):
                words.append(pack([shift(a, i, self.p) for a in r], self.p))
        return gf2core.BinaryCode.from_rows(words, self.p * self.c)

    def basis(self) -> List[Tuple[int, ...]]:
        return [unpack(w, self.p, self.c) for w in self.binary().rows]

    @property
    def binary_dim(self) -> int:
        return self.binary().k

    def in_P(self) -> bool:
        return all(is_even(a) for r in self.rows for a in r)

    def multiply(self, scalar: int) -> "ModuleCode":
        return ModuleCode(self.p, self.c,
                          tuple(tuple(ring_mul(scalar, a, self.p) for a in r) for r in self.rows))

    def substitute(self, t: int) -> "ModuleCode":
        return ModuleCode(self.p, self.c,
                          tuple(tuple(substitute(a, t, self.p) for a in r) for r in self.rows))

    def __add__(self, other: "ModuleCode") -> "ModuleCode":
        return ModuleCode(self.p, self.c, self.rows + other.rows)


def module_decompose(code: ModuleCode) -> Tuple[List[ModuleCode], List[int]]:
    """Split into components M_j = e_j * C and their dimensions over I_j."""
    system = factor_cyclotomic(code.p)
    comps, dims = [], []
    for j, e in enumerate(system.identities):
        mj = code.multiply(e)
        basis = mj.binary()
        comps.append(ModuleCode.from_binary(basis, code.p, code.c))
        dims.append(basis.k // system.degree(j))
    return comps, dims


def is_form_orthogonal(a: ModuleCode, b: ModuleCode) -> bool:
    ba, bb = a.basis(), b.basis()
    return all(form_value(u, v, a.p) == 0 for u in ba for v in bb)


def form_complement(code: ModuleCode, j: int) -> ModuleCode:
    """{v in I_j^c : form_value(u, v) = 0 for all u in code}."""
    p, c = code.p, code.c
    system = factor_cyclotomic(p)
    elems_basis = [shift(system.identities[j], i, p) for i in range(system.degree(j))]
    # unknown v = sum over (coord, basis element) of bits; the constraint is linear over GF(2)
    cols = [(i, b) for i in range(c) for b in elems_basis]
    constraints = []
    for u in code.basis():
        for bit in range(p):
            row = 0
            for idx, (i, b) in enumerate(cols):
                val = ring_mul(u[i], conjugate(b, p), p) if u[i] else 0
                if (val >> bit) & 1:
                    row |= 1 << idx
            constraints.append(row)
    sol = gf2core.nullspace(constraints, len(cols))
    rows = []
    for s in sol:
        vec = [0] * c
        for idx, (i, b) in enumerate(cols):
            if (s >> idx) & 1:
                vec[i] ^= b
        rows.append(tuple(vec))
    return ModuleCode.from_binary(
        gf2core.BinaryCode.from_rows([pack(r, p) for r in rows], p * c), p, c)


def hermitian_selfdual_check(code: ModuleCode) -> bool:
    """Self-duality over the field P (only when 2 is a primitive root mod p)."""
    system = factor_cyclotomic(code.p)
    if not system.two_is_primitive:
        raise ValueError(f"2 is not a primitive root mod {code.p}; use form_value")
    if not code.in_P():
        return False
    basis = code.basis()
    if 2 * len(basis) != code.c * (code.p - 1):
        return False
    return all(form_value(u, v, code.p) == 0 for u in basis for v in basis)


# --------------------------------------------------------------------------
# text format


def format_module(code: ModuleCode) -> str:
    lines = [f"{code.p} {code.c} {len(code.rows)}"]
    for r in code.rows:
        lines.append(" ".join(element_to_string(a, code.p) for a in r))
    return "\n".join(lines) + "\n"


def parse_module(text: str, source: str = "<string>") -> ModuleCode:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise gf2core.MatrixFormatError("empty module file", None, source)
    try:
        p, c, m = (int(t) for t in lines[0][1].split())
    except ValueError:
        raise gf2core.MatrixFormatError("header must be 'p c rows'", lines[0][0], source)
    if len(lines) - 1 != m:
        raise gf2core.MatrixFormatError(f"header declares {m} rows, found {len(lines) - 1}", None, source)
    rows = []
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != c:
            raise gf2core.MatrixFormatError(f"expected {c} ring elements", lineno, source)
        try:
            rows.append(tuple(element_from_string(t, p) for t in parts))
        except ValueError as exc:
            raise gf2core.MatrixFormatError(str(exc), lineno, source)
    return ModuleCode(p, c, tuple(rows))


def parse_element(text: str, p: int) -> int:
    """Accept either a coefficient string or a polynomial like ``x^4+x^2+x+1``."""
    text = text.replace(" ", "")
    if text and set(text) <= {"0", "1"} and len(text) == p:
        return element_from_string(text, p)
    out = 0
    for term in text.split("+"):
        if term == "0":
            continue
        if term == "1":
            e = 0
        elif term == "x":
            e = 1
        elif term.startswith("x^"):
            e = int(term[2:])
        else:
            raise ValueError(f"cannot parse term {term!r}")
        out ^= 1 << (e % p)
    return out


def elements_of_P(p: int) -> Iterable[int]:
    return (a for a in range(1 << p) if is_even(a))
