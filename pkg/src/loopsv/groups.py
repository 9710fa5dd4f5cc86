"""Index-group data: the base group, its shifted coset, and the joint lattice.

The bracket indices live in a finitely generated additive subgroup Gamma of
the scalar field together with a shift s satisfying s not in Gamma and
2s in Gamma.  The union T = Gamma | (s + Gamma) is again a group; membership
in any of the three sets reduces to an integer solve against a canonical
lattice basis.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import GroupConfigError
from .lattice import lattice_basis, solve_integer
from .scalars import Scalar, is_squarefree, parse_scalar

__all__ = ["GroupData", "GAMMA", "GAMMA1", "T_SET"]

GAMMA = "Gamma"
GAMMA1 = "Gamma1"
T_SET = "T"


class GroupData:
    """Field choice plus generators of Gamma and the shift s, with derived bases."""

    def __init__(self, gamma_generators, s, field_d: int = 0):
        if field_d != 0 and (field_d < 2 or not is_squarefree(field_d)):
            raise GroupConfigError(f"field radicand {field_d} must be squarefree and >= 2")
        gens = tuple(Scalar.of(g) for g in gamma_generators)
        if not gens:
            raise GroupConfigError("Gamma needs at least one generator")
        s = Scalar.of(s)
        for x in gens + (s,):
            if x.d not in (0, field_d):
                raise GroupConfigError(f"scalar {x} does not live in the configured field")
        if any(not g for g in gens):
            raise GroupConfigError("Gamma generators must be nonzero")
        self.field_d = field_d
        self.gamma_generators = gens
        self.s = s
        self._dim = 1 if field_d == 0 else 2
        self.gamma_basis = self._derive_basis(gens)
        self.t_basis = self._derive_basis(gens + (s,))
        self.rank = len(self.t_basis)
        self._coord_cache: dict[tuple[str, Scalar], tuple[int, ...] | None] = {}
        if self.in_gamma(s):
            raise GroupConfigError(f"the shift s = {s} must lie outside Gamma")
        if not self.in_gamma(s + s):
            raise GroupConfigError(f"2s = {s + s} must lie in Gamma")

    # -- coordinates ----------------------------------------------------------

    def _vec(self, x: Scalar) -> list[Fraction]:
        if self._dim == 1:
            return [x.a]
        return [x.a, x.b]

    def _unvec(self, v) -> Scalar:
        if self._dim == 1:
            return Scalar(v[0])
        return Scalar(v[0], v[1], self.field_d if v[1] else 0)

    def _derive_basis(self, elements) -> tuple[Scalar, ...]:
        rows = [self._vec(x) for x in elements]
        return tuple(self._unvec(row) for row in lattice_basis(rows))

    def _coords(self, basis_name: str, basis, x: Scalar) -> tuple[int, ...] | None:
        key = (basis_name, x)
        try:
            return self._coord_cache[key]
        except KeyError:
            pass
        if x.d not in (0, self.field_d):
            raise GroupConfigError(f"scalar {x} does not live in the configured field")
        rows = [self._vec(g) for g in basis]
        sol = solve_integer(rows, self._vec(x))
        out = None if sol is None else tuple(sol)
        self._coord_cache[key] = out
        return out

    def gamma_coords(self, x: Scalar) -> tuple[int, ...] | None:
        return self._coords("g", self.gamma_basis, x)

    def t_coords(self, x: Scalar) -> tuple[int, ...] | None:
        return self._coords("t", self.t_basis, x)

    # -- membership -------------------------------------------------------------

    def in_gamma(self, x) -> bool:
        return self.gamma_coords(Scalar.of(x)) is not None

    def in_gamma1(self, x) -> bool:
        return self.gamma_coords(Scalar.of(x) - self.s) is not None

    def in_t(self, x) -> bool:
        return self.t_coords(Scalar.of(x)) is not None

    def member(self, x, which: str) -> bool:
        if which == GAMMA:
            return self.in_gamma(x)
        if which == GAMMA1:
            return self.in_gamma1(x)
        if which == T_SET:
            return self.in_t(x)
        raise ValueError(f"unknown index set {which!r}")

    def validate_scaling(self, a) -> bool:
        """True when multiplication by a maps Gamma onto Gamma and T onto T."""
        a = Scalar.of(a)
        if not a:
            return False
        for g in self.gamma_basis:
            if not self.in_gamma(a * g) or not self.in_gamma(g / a):
                return False
        for tau in self.t_basis:
            if not self.in_t(a * tau) or not self.in_t(tau / a):
                return False
        return True

    # -- construction from a config document ------------------------------------

    @classmethod
    def from_config(cls, doc: dict) -> "GroupData":
        if not isinstance(doc, dict):
            raise GroupConfigError("config must be a JSON object")
        field = doc.get("field", "Q")
        if field == "Q":
            field_d = 0
        elif isinstance(field, dict) and set(field) == {"Q_sqrt"}:
            raw = field["Q_sqrt"]
            if not isinstance(raw, int):
                raise GroupConfigError("Q_sqrt radicand must be an integer")
            field_d = raw
        else:
            raise GroupConfigError(f"unknown field description {field!r}")
        gens_raw = doc.get("gamma_generators")
        if not isinstance(gens_raw, list) or not gens_raw:
            raise GroupConfigError("gamma_generators must be a nonempty list of scalar strings")
        s_raw = doc.get("s")
        if not isinstance(s_raw, str):
            raise GroupConfigError("s must be a scalar string")
        try:
            gens = [parse_scalar(g, field_d) for g in gens_raw]
            s = parse_scalar(s_raw, field_d)
        except Exception as exc:
            raise GroupConfigError(f"bad scalar in config: {exc}") from exc
        return cls(gens, s, field_d)

    @classmethod
    def default(cls) -> "GroupData":
        """Gamma = Z with s = 1/2, the base example."""
        return cls([Scalar(1)], Scalar(Fraction(1, 2)))

    def parse_scalar(self, text: str) -> Scalar:
        return parse_scalar(text, self.field_d)

    def describe(self) -> dict:
        field = "Q" if self.field_d == 0 else {"Q_sqrt": self.field_d}
        return {
            "field": field,
            "gamma_generators": [str(g) for g in self.gamma_generators],
            "s": str(self.s),
        }

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.gamma_generators)
        return f"GroupData(<{gens}>, s={self.s}, d={self.field_d})"
