"""Derivations: the standard families, degree decomposition, and recognizers.

Every degree-zero derivation splits as a loop reparametrization part, a
homomorphism part acting diagonally through Laurent polynomials, a part
shearing L into M, and a central-direction rescaling.  The functions here
build those families, decompose a given operator back into them with exact
postcondition checks, and reduce nonzero-degree derivations to inner ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import BasisKey, Element, LoopAlgebra, Window
from .errors import ShapeError
from .groups import GroupData
from .laurent import LaurentPoly
from .scalars import Scalar, ZERO, ONE

__all__ = [
    "Operator",
    "HomToLaurent",
    "GAffine",
    "GTable",
    "CanonicalDerivation",
    "make_D_phi",
    "make_D_g",
    "make_D_b",
    "make_D_rho",
    "make_ad",
    "derivation_defect",
    "derivation_witnesses",
    "degree_decompose",
    "reduce_nonzero_degree",
    "canonical_decompose_degree0",
    "hom_quotient_witness",
    "operators_agree",
]

HALF = Scalar(Fraction(1, 2))


class Operator:
    """Linear map defined by its action on basis keys.

    ``degree`` is an optional declared weight shift: every output term of a
    degree-gamma operator sits at the input weight plus gamma.
    """

    __slots__ = ("alg", "_fn", "degree")

    def __init__(self, alg: LoopAlgebra, fn, degree: Scalar | None = None):
        self.alg = alg
        self._fn = fn
        self.degree = degree

    def apply_key(self, key: BasisKey) -> Element:
        return self._fn(key)

    def __call__(self, x: Element) -> Element:
        out = self.alg.zero()
        for key, coeff in x.terms.items():
            out = out + coeff * self._fn(key)
        return out

    def _combined_degree(self, other: "Operator") -> Scalar | None:
        if self.degree is not None and other.degree is not None and self.degree == other.degree:
            return self.degree
        return None

    def __add__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return Operator(
            self.alg,
            lambda key: self._fn(key) + other._fn(key),
            self._combined_degree(other),
        )

    def __sub__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return Operator(
            self.alg,
            lambda key: self._fn(key) - other._fn(key),
            self._combined_degree(other),
        )

    def __neg__(self):
        return Operator(self.alg, lambda key: -self._fn(key), self.degree)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            c = Scalar.of(other)
            return Operator(self.alg, lambda key: c * self._fn(key), self.degree)
        return NotImplemented

    __rmul__ = __mul__

    @staticmethod
    def zero(alg: LoopAlgebra) -> "Operator":
        return Operator(alg, lambda key: alg.zero(), ZERO)


def table_operator(alg: LoopAlgebra, table: dict, degree=None) -> Operator:
    """Operator given by an explicit key table; undefined keys are an error."""

    def fn(key):
        try:
            return table[key]
        except KeyError:
            raise ShapeError(f"operator table has no entry for {key}", witness=key) from None

    return Operator(alg, fn, degree)


@dataclass(frozen=True)
class HomToLaurent:
    """Additive map from the index lattice T into Laurent polynomials.

    Stored through its images on the canonical T-basis; the value anywhere
    else follows by integer linearity.
    """

    images: tuple

    def value(self, group: GroupData, gamma: Scalar) -> LaurentPoly:
        coords = group.t_coords(Scalar.of(gamma))
        if coords is None:
            raise ShapeError(f"{gamma} is not in T")
        out = LaurentPoly.zero()
        for c, img in zip(coords, self.images):
            if c:
                out = out + c * img
        return out

    @staticmethod
    def zero(group: GroupData) -> "HomToLaurent":
        return HomToLaurent(tuple(LaurentPoly.zero() for _ in group.t_basis))


@dataclass(frozen=True)
class GAffine:
    """Shear data alpha -> u*alpha + v, always a valid constraint solution."""

    u: LaurentPoly
    v: LaurentPoly

    def value(self, gamma: Scalar) -> LaurentPoly:
        return self.u * gamma + self.v


class GTable:
    """Explicit shear table on a finite set of group indices.

    Construction checks the compatibility relation
    (beta - alpha) g(alpha+beta) = beta g(beta) - alpha g(alpha)
    on every pair whose sum stays inside the table.
    """

    def __init__(self, values: dict):
        self.values = {Scalar.of(k): v for k, v in values.items()}
        gammas = list(self.values)
        for a in gammas:
            for b in gammas:
                tot = a + b
                if tot not in self.values:
                    continue
                lhs = (b - a) * self.values[tot]
                rhs = b * self.values[b] - a * self.values[a]
                if lhs != rhs:
                    raise ShapeError(
                        "shear table violates the compatibility relation",
                        witness=(a, b),
                    )

    def value(self, gamma: Scalar) -> LaurentPoly:
        try:
            return self.values[Scalar.of(gamma)]
        except KeyError:
            raise ShapeError(f"shear table has no value at {gamma}") from None

    def __eq__(self, other):
        if isinstance(other, GTable):
            return self.values == other.values
        return NotImplemented


def _poly_element(alg: LoopAlgebra, kind: str, gamma, base_loop: int, poly: LaurentPoly) -> Element:
    terms = {}
    for e, c in poly.items():
        terms[alg.key(kind, gamma, base_loop + e)] = c
    return Element(alg.group, terms)


def make_D_phi(alg: LoopAlgebra, phi: HomToLaurent) -> Operator:
    """Diagonal action: every key is multiplied by the Laurent image of its index."""

    def fn(key):
        return _poly_element(alg, key.kind, key.gamma, key.loop, phi.value(alg.group, key.gamma))

    return Operator(alg, fn, ZERO)


def make_D_g(alg: LoopAlgebra, g) -> Operator:
    """Shear L into M through g; kills M and Y."""

    def fn(key):
        if key.kind != "L":
            return alg.zero()
        return _poly_element(alg, "M", key.gamma, key.loop, g.value(key.gamma))

    return Operator(alg, fn, ZERO)


def make_D_b(alg: LoopAlgebra, b: LaurentPoly) -> Operator:
    """Scale M by b and Y by b/2; kills L."""

    def fn(key):
        if key.kind == "L":
            return alg.zero()
        poly = b if key.kind == "M" else HALF * b
        return _poly_element(alg, key.kind, key.gamma, key.loop, poly)

    return Operator(alg, fn, ZERO)


def make_D_rho(alg: LoopAlgebra, rho: LaurentPoly) -> Operator:
    """Loop reparametrization rho(t) d/dt acting on the loop variable only."""

    def fn(key):
        if key.loop == 0:
            return alg.zero()
        poly = (key.loop * rho).shift(-1)
        return _poly_element(alg, key.kind, key.gamma, key.loop, poly)

    return Operator(alg, fn, ZERO)


def make_ad(alg: LoopAlgebra, z: Element) -> Operator:
    """Inner derivation bracketing with z; degree declared when z is homogeneous."""
    gammas = {k.gamma for k in z.terms}
    degree = next(iter(gammas)) if len(gammas) == 1 else None

    def fn(key):
        return alg.bracket(z, alg.monomial(key))

    return Operator(alg, fn, degree)


def derivation_defect(alg: LoopAlgebra, D: Operator, x: Element, y: Element) -> Element:
    return D(alg.bracket(x, y)) - alg.bracket(D(x), y) - alg.bracket(x, D(y))


def derivation_witnesses(alg: LoopAlgebra, D: Operator, window: Window, limit: int = 10) -> list:
    """Window key pairs where the Leibniz rule fails (expected: none)."""
    keys = alg.window_keys(window)
    images = {key: D.apply_key(key) for key in keys}
    bad = []
    for i, k1 in enumerate(keys):
        e1 = alg.monomial(k1)
        for k2 in keys[i:]:
            t = alg.structure(k1, k2)
            if t is None:
                lhs = alg.zero()
            else:
                img = images.get(t[0])
                if img is None:
                    img = images[t[0]] = D.apply_key(t[0])
                lhs = t[1] * img
            rhs = alg.bracket(images[k1], alg.monomial(k2)) + alg.bracket(e1, images[k2])
            if lhs != rhs:
                bad.append((k1, k2))
                if len(bad) >= limit:
                    return bad
    return bad


def operators_agree(A: Operator, B: Operator, keys) -> BasisKey | None:
    """First key where the two operators differ, or None."""
    for key in keys:
        if A.apply_key(key) != B.apply_key(key):
            return key
    return None


def degree_decompose(alg: LoopAlgebra, D: Operator, window: Window) -> dict:
    """Split D into weight-homogeneous components over the window keys.

    Returns a map degree -> Operator; each component is window-restricted and
    raises outside its table.  Summing the components reproduces D on the
    window.
    """
    tables: dict = {}
    for key in alg.window_keys(window):
        out = D.apply_key(key)
        buckets: dict = {}
        for out_key, coeff in out.terms.items():
            buckets.setdefault(out_key.gamma - key.gamma, {})[out_key] = coeff
        for degree, terms in buckets.items():
            tables.setdefault(degree, {})[key] = Element(alg.group, terms)
    out = {}
    for degree in sorted(tables):
        table = tables[degree]
        full = {key: table.get(key, alg.zero()) for key in alg.window_keys(window)}
        out[degree] = table_operator(alg, full, degree)
    return out


def reduce_nonzero_degree(alg: LoopAlgebra, D: Operator, window: Window) -> Element:
    """Element z with D = ad(z), for a derivation of declared nonzero degree.

    The candidate is read off the image of L(0,0) and then checked against D
    on the whole window.
    """
    if D.degree is None:
        raise ValueError("operator must declare its degree")
    if not D.degree:
        raise ValueError("degree-zero derivations are not inner in general")
    grading_key = alg.key("L", ZERO, 0)
    z = (-ONE / D.degree) * D.apply_key(grading_key)
    witness = operators_agree(make_ad(alg, z), D, alg.window_keys(window))
    if witness is not None:
        raise ShapeError(
            "operator is not a derivation of pure degree "
            f"{D.degree}: ad-candidate disagrees at {witness}",
            witness=witness,
        )
    return z


@dataclass(frozen=True)
class CanonicalDerivation:
    """The canonical pieces of a degree-zero derivation, plus an inner remainder."""

    rho: LaurentPoly
    f: HomToLaurent
    g: object
    b: LaurentPoly
    inner: Element | None = None

    def to_operator(self, alg: LoopAlgebra) -> Operator:
        out = (
            make_D_rho(alg, self.rho)
            + make_D_phi(alg, self.f)
            + make_D_g(alg, self.g)
            + make_D_b(alg, self.b)
        )
        if self.inner is not None and self.inner:
            out = out + make_ad(alg, self.inner)
        return out


def _split_parts(elem: Element, gamma: Scalar, allowed: tuple, base_loop: int, context: str) -> dict:
    """Split an image into Laurent data per kind, at a fixed group index."""
    polys = {kind: {} for kind in allowed}
    for key, coeff in elem.terms.items():
        if key.kind not in allowed or key.gamma != gamma:
            raise ShapeError(
                f"not degree-zero-derivation-shaped: {context} produced {key}",
                witness=key,
            )
        polys[key.kind][key.loop - base_loop] = coeff
    return {kind: LaurentPoly(data) for kind, data in polys.items()}


def canonical_decompose_degree0(alg: LoopAlgebra, D: Operator, window: Window) -> CanonicalDerivation:
    """Recover (rho, f, g, b) from a degree-zero derivation, exactly.

    Reads rho off the loop-degree action at weight zero, then f and g off the
    L-images, extends f to the T-basis through the half rule on the coset,
    and reads b off the central line.  The decomposition is verified key by
    key on the window before it is returned.
    """
    group = alg.group
    gammas, _ = alg.window_gammas(window)

    img = D.apply_key(alg.key("L", ZERO, 1))
    parts = _split_parts(img, ZERO, ("L", "M"), 1, "D(L(0,1))")
    rho = parts["L"].shift(1)
    Dp = D - make_D_rho(alg, rho)

    f_at: dict = {}
    g_at: dict = {}

    def read_L(gamma: Scalar):
        image = Dp.apply_key(alg.key("L", gamma, 0))
        split = _split_parts(image, gamma, ("L", "M"), 0, f"D(L({gamma},0))")
        return split["L"], split["M"]

    for gamma in gammas:
        f_at[gamma], g_at[gamma] = read_L(gamma)

    for a in gammas:
        for b_ in gammas:
            tot = a + b_
            if tot in f_at and f_at[a] + f_at[b_] != f_at[tot]:
                raise ShapeError(
                    f"inconsistent f across window at ({a}, {b_})",
                    witness=(a, b_),
                )

    def f_value(gamma: Scalar) -> LaurentPoly:
        if gamma in f_at:
            return f_at[gamma]
        return read_L(gamma)[0]

    images = []
    for tau in group.t_basis:
        if group.in_gamma(tau):
            images.append(f_value(tau))
        else:
            images.append(HALF * f_value(tau + tau))
    f = HomToLaurent(tuple(images))

    g = _fit_g(gammas, g_at)

    img = Dp.apply_key(alg.key("M", ZERO, 0))
    b = _split_parts(img, ZERO, ("M",), 0, "D(M(0,0))")["M"]

    cand = CanonicalDerivation(rho, f, g, b)
    witness = operators_agree(cand.to_operator(alg), D, alg.window_keys(window))
    if witness is not None:
        raise ShapeError(
            f"not degree-zero-derivation-shaped: canonical pieces disagree at {witness}",
            witness=witness,
        )
    return cand


def _fit_g(gammas, g_at: dict):
    """Prefer the affine form; fall back to a validated table."""
    v = g_at.get(ZERO, LaurentPoly.zero())
    pivot = next((gamma for gamma in gammas if gamma), None)
    if pivot is None:
        return GAffine(LaurentPoly.zero(), v)
    u = (g_at[pivot] - v) * pivot.inverse()
    affine = GAffine(u, v)
    if all(affine.value(gamma) == g_at[gamma] for gamma in gammas):
        return affine
    return GTable(g_at)


def hom_quotient_witness(group: GroupData, phi: HomToLaurent) -> dict | None:
    """Coefficients a_j with phi(gamma) = gamma * sum a_j t^j, or None.

    When the witness exists, the diagonal operator of phi equals the bracket
    sum of a_j copies of ad L(0,j) on every key; the first basis image forces
    the candidate and the remaining images decide.  The empty map encodes
    phi = 0.
    """
    tau0 = group.t_basis[0]
    f = phi.images[0] * tau0.inverse()
    for tau, img in zip(group.t_basis, phi.images):
        if img != f * tau:
            return None
    return dict(f.items())
