"""Basis keys, sparse elements, the bracket, grading, and window sweeps.

The algebra has basis families L and M indexed by Gamma and Y indexed by the
shifted coset, each with an integer loop index.  The bracket of two basis
keys is always zero or a single scalar multiple of another basis key, so the
structure constants are cached per key pair and every verification sweep
works off that cache.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import GroupMismatchError, InvalidKeyError
from .groups import GroupData
from .scalars import Scalar, ZERO

__all__ = [
    "BasisKey",
    "Element",
    "Window",
    "LoopAlgebra",
    "antisymmetry_witnesses",
    "jacobi_witnesses",
]

KINDS = ("L", "M", "Y")


class BasisKey:
    """One basis vector: a kind in {L, M, Y}, a group index, and a loop index."""

    __slots__ = ("kind", "gamma", "loop", "_hash")

    def __init__(self, kind: str, gamma: Scalar, loop: int):
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "loop", loop)
        object.__setattr__(self, "_hash", hash((kind, gamma, loop)))

    def __setattr__(self, name, value):
        raise AttributeError("BasisKey is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, BasisKey):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.loop == other.loop
            and self.gamma == other.gamma
        )

    def sort_key(self):
        return (self.kind, self.gamma, self.loop)

    def __str__(self):
        return f"{self.kind}({self.gamma},{self.loop})"

    def __repr__(self):
        return f"BasisKey({str(self)})"


class Element:
    """Finite scalar combination of basis keys, tied to one group configuration."""

    __slots__ = ("group", "_terms")

    def __init__(self, group: GroupData, terms=None):
        cleaned = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Scalar.of(coeff)
                if coeff:
                    cleaned[key] = coeff
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "_terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    @property
    def terms(self) -> dict:
        return self._terms

    def items_sorted(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, key: BasisKey) -> Scalar:
        return self._terms.get(key, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def _check_group(self, other: "Element"):
        if self.group is not other.group:
            raise GroupMismatchError("elements belong to different group configurations")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check_group(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            prev = out.get(key)
            out[key] = coeff if prev is None else prev + coeff
        return Element(self.group, out)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check_group(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            prev = out.get(key)
            out[key] = -coeff if prev is None else prev - coeff
        return Element(self.group, out)

    def __neg__(self):
        return Element(self.group, {k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            c0 = Scalar.of(other)
            return Element(self.group, {k: c * c0 for k, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.group is other.group and self._terms == other._terms

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for key, coeff in self.items_sorted():
            mag = abs(coeff)
            body = str(key) if mag == 1 else f"{_coeff_str(mag)}*{key}"
            if not out:
                out.append(body if coeff.sign() > 0 else f"-{body}")
            else:
                out.append(("+ " if coeff.sign() > 0 else "- ") + body)
        return " ".join(out)

    def __repr__(self):
        return f"Element({str(self)!r})"


def _coeff_str(c: Scalar) -> str:
    s = str(c)
    if c.b != 0 and c.a != 0:
        return f"({s})"
    return s


@dataclass(frozen=True)
class Window:
    """Finite verification window.

    ``gamma_height`` bounds the coordinates of group indices over the T-basis;
    the actual coordinate bound is twice the height because T refines Gamma by
    a factor of two along the shift direction.  ``loop_bound`` bounds |i|.
    """

    gamma_height: int
    loop_bound: int

    def __post_init__(self):
        if self.gamma_height < 1 or self.loop_bound < 0:
            raise ValueError("window bounds must be positive")

    def loops(self) -> range:
        return range(-self.loop_bound, self.loop_bound + 1)

    def coordinate_bound(self) -> int:
        return 2 * self.gamma_height


class LoopAlgebra:
    """The algebra over one group configuration, with cached structure constants."""

    def __init__(self, group: GroupData):
        self.group = group
        self._key_cache: dict[tuple, BasisKey] = {}
        self._sc_cache: dict[tuple, tuple | None] = {}
        self._window_cache: dict[Window, list] = {}

    # -- element constructors ---------------------------------------------------

    def key(self, kind: str, gamma, loop: int) -> BasisKey:
        gamma = self._scalar(gamma)
        tag = (kind, gamma, loop)
        cached = self._key_cache.get(tag)
        if cached is not None:
            return cached
        if kind in ("L", "M"):
            if not self.group.in_gamma(gamma):
                raise InvalidKeyError(f"{gamma} is not in Gamma (required for kind {kind})")
        elif kind == "Y":
            if not self.group.in_gamma1(gamma):
                raise InvalidKeyError(f"{gamma} is not in s+Gamma (required for kind Y)")
        else:
            raise InvalidKeyError(f"unknown kind {kind!r}")
        made = BasisKey(kind, gamma, int(loop))
        self._key_cache[tag] = made
        return made

    def _scalar(self, value) -> Scalar:
        if isinstance(value, str):
            return self.group.parse_scalar(value)
        return Scalar.of(value)

    def monomial(self, key: BasisKey, coeff=1) -> Element:
        return Element(self.group, {key: Scalar.of(coeff)})

    def L(self, gamma, loop: int) -> Element:
        return self.monomial(self.key("L", gamma, loop))

    def M(self, gamma, loop: int) -> Element:
        return self.monomial(self.key("M", gamma, loop))

    def Y(self, gamma, loop: int) -> Element:
        return self.monomial(self.key("Y", gamma, loop))

    def zero(self) -> Element:
        return Element(self.group)

    def element(self, terms: dict) -> Element:
        return Element(self.group, terms)

    # -- the bracket --------------------------------------------------------------

    def structure(self, k1: BasisKey, k2: BasisKey):
        """Bracket of two basis keys as (key, coefficient), or None when zero."""
        tag = (k1, k2)
        try:
            return self._sc_cache[tag]
        except KeyError:
            pass
        out = self._structure(k1, k2)
        self._sc_cache[tag] = out
        return out

    def _structure(self, k1: BasisKey, k2: BasisKey):
        pair = k1.kind + k2.kind
        if pair in ("MM", "MY", "YM"):
            return None
        loop = k1.loop + k2.loop
        if pair == "LL":
            coeff = k2.gamma - k1.gamma
            kind = "L"
        elif pair == "LM":
            coeff = k2.gamma
            kind = "M"
        elif pair == "ML":
            coeff = -k1.gamma
            kind = "M"
        elif pair == "LY":
            coeff = k2.gamma - k1.gamma / 2
            kind = "Y"
        elif pair == "YL":
            coeff = -(k1.gamma - k2.gamma / 2)
            kind = "Y"
        else:  # YY
            coeff = k2.gamma - k1.gamma
            kind = "M"
        if not coeff:
            return None
        return (self.key(kind, k1.gamma + k2.gamma, loop), coeff)

    def bracket_keys(self, k1: BasisKey, k2: BasisKey) -> Element:
        t = self.structure(k1, k2)
        if t is None:
            return self.zero()
        return self.monomial(t[0], t[1])

    def bracket(self, x: Element, y: Element) -> Element:
        if x.group is not self.group or y.group is not self.group:
            raise GroupMismatchError("bracket operands use a different group configuration")
        acc: dict = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                t = self.structure(k1, k2)
                if t is None:
                    continue
                key, coeff = t
                add = c1 * c2 * coeff
                prev = acc.get(key)
                acc[key] = add if prev is None else prev + add
        return Element(self.group, acc)

    def jacobi_defect(self, x: Element, y: Element, z: Element) -> Element:
        return (
            self.bracket(x, self.bracket(y, z))
            + self.bracket(y, self.bracket(z, x))
            + self.bracket(z, self.bracket(x, y))
        )

    # -- structure maps -------------------------------------------------------------

    def weight(self, key: BasisKey) -> Scalar:
        """Eigenvalue of the grading bracket with L(0,0); equals the group index."""
        return key.gamma

    def grade(self, x: Element) -> dict:
        buckets: dict = {}
        for key, coeff in x.terms.items():
            buckets.setdefault(key.gamma, {})[key] = coeff
        return {
            gamma: Element(self.group, terms)
            for gamma, terms in sorted(buckets.items(), key=lambda kv: kv[0])
        }

    def is_central(self, x: Element) -> bool:
        return all(k.kind == "M" and not k.gamma for k in x.terms)

    def in_maximal_ideal(self, x: Element) -> bool:
        return all(k.kind in ("M", "Y") for k in x.terms)

    # -- windows -------------------------------------------------------------------

    def window_gammas(self, window: Window):
        """Group indices inside the window, split as (Gamma part, coset part)."""
        bound = window.coordinate_bound()
        basis = self.group.t_basis
        in_gamma, in_coset = [], []
        for coords in product(range(-bound, bound + 1), repeat=len(basis)):
            gamma = ZERO
            for c, b in zip(coords, basis):
                gamma = gamma + c * b
            if self.group.in_gamma(gamma):
                if gamma not in in_gamma:
                    in_gamma.append(gamma)
            elif self.group.in_gamma1(gamma):
                if gamma not in in_coset:
                    in_coset.append(gamma)
        in_gamma.sort()
        in_coset.sort()
        return in_gamma, in_coset

    def window_keys(self, window: Window) -> list:
        cached = self._window_cache.get(window)
        if cached is not None:
            return cached
        gammas, cosets = self.window_gammas(window)
        keys = []
        for kind in ("L", "M"):
            for gamma in gammas:
                for i in window.loops():
                    keys.append(self.key(kind, gamma, i))
        for gamma in cosets:
            for i in window.loops():
                keys.append(self.key("Y", gamma, i))
        keys.sort(key=BasisKey.sort_key)
        self._window_cache[window] = keys
        return keys


def antisymmetry_witnesses(alg: LoopAlgebra, window: Window, limit: int = 10) -> list:
    """Ordered key pairs where [x,y] + [y,x] != 0 (expected: none)."""
    keys = alg.window_keys(window)
    bad = []
    for i, k1 in enumerate(keys):
        for k2 in keys[i:]:
            fwd = alg.structure(k1, k2)
            rev = alg.structure(k2, k1)
            if fwd is None and rev is None:
                continue
            if fwd is None or rev is None or fwd[0] != rev[0] or fwd[1] + rev[1]:
                bad.append((k1, k2))
                if len(bad) >= limit:
                    return bad
    return bad


def jacobi_witnesses(alg: LoopAlgebra, window: Window, limit: int = 10) -> tuple:
    """Unordered basis triples with a nonzero Jacobi defect, plus the triple count.

    By antisymmetry (checked separately) sweeping i <= j <= k covers every
    ordered triple.
    """
    keys = alg.window_keys(window)
    structure = alg.structure
    n = len(keys)
    bad = []
    count = 0
    for i in range(n):
        ki = keys[i]
        for j in range(i, n):
            kj = keys[j]
            t_ij = structure(ki, kj)
            for k in range(j, n):
                kk = keys[k]
                count += 1
                acc: dict = {}
                for a, bc in ((ki, structure(kj, kk)), (kj, structure(kk, ki)), (kk, t_ij)):
                    if bc is None:
                        continue
                    inner_key, inner_coeff = bc
                    t = structure(a, inner_key)
                    if t is None:
                        continue
                    out_key, out_coeff = t
                    add = inner_coeff * out_coeff
                    prev = acc.get(out_key)
                    acc[out_key] = add if prev is None else prev + add
                if any(acc.values()):
                    bad.append((ki, kj, kk))
                    if len(bad) >= limit:
                        return bad, count
    return bad, count
