"""The BCOV differential ring in explicit index components.

Generators (indices are integers ``1..r``)::

    Sij(k, l)   S^{kl}          weight -2
    Si(k)       S^k             weight -2
    S()         S               weight -2
    hSi(k)      hatted S^k      weight -2
    hS()        hatted S        weight -2
    K(i)        K_i             weight  0
    C(i, j, k)  C_{ijk}         weight +2
    H(ijkl; d)  D_d... h_{ijkl} weight +2   (only outside the reduced ring)

The hatted top propagator equals ``S^{kl}`` so ``Sij`` is shared by both
bases.  A ring element is a polynomial in these symbols together with its
Kahler weight and the index labels it carries; the index signature is what
the coefficient derivative needs in the lifted (one-modulus) variant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering

from .exact import MPoly, RationalFunction
from .exact.mpoly import mono_degree, mono_mul
from .exact.poly import _ast_eval

__all__ = [
    "GeneratorId",
    "RingElement",
    "LiftData",
    "DerivationTable",
    "RingError",
    "reduced_table",
    "lifted_table",
    "covariant_derive",
    "covariant_derive_lifted",
    "hat_transform",
    "unhat_transform",
    "k_expand",
    "check_weight",
    "WeightReport",
]

_RANK = {"Sij": 0, "Si": 1, "S": 2, "hSi": 3, "hS": 4, "K": 5, "C": 6, "H": 7}
_WEIGHT = {"Sij": -2, "Si": -2, "S": -2, "hSi": -2, "hS": -2, "K": 0, "C": 2, "H": 2}
_UPPER = {"Sij": 2, "Si": 1, "S": 0, "hSi": 1, "hS": 0}


class RingError(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class GeneratorId:
    kind: str
    indices: tuple = ()
    dindices: tuple = ()

    def __post_init__(self):
        if self.kind not in _RANK:
            raise RingError(f"unknown generator kind {self.kind!r}")
        idx = tuple(self.indices)
        need = {"Sij": 2, "Si": 1, "S": 0, "hSi": 1, "hS": 0, "K": 1, "H": 4}.get(self.kind)
        if need is not None and len(idx) != need:
            raise RingError(f"{self.kind} takes {need} indices, got {idx}")
        if self.kind == "C" and len(idx) < 3:
            raise RingError("C needs at least three indices")
        if self.kind in ("Sij", "C", "H"):
            idx = tuple(sorted(idx))
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "dindices", tuple(sorted(self.dindices)))
        if self.dindices and self.kind != "H":
            raise RingError("only H carries derivative indices")

    def _key(self):
        return (_RANK[self.kind], len(self.indices), self.indices, self.dindices)

    def __lt__(self, other):
        return self._key() < other._key()

    @property
    def weight(self) -> int:
        return _WEIGHT[self.kind]

    @property
    def net_lower(self) -> int:
        if self.kind in _UPPER:
            return -_UPPER[self.kind]
        return len(self.indices) + len(self.dindices)

    def name(self, r: int = 1) -> str:
        lab = (lambda i: "x") if r == 1 else str
        ids = "".join(lab(i) for i in self.indices)
        if self.kind == "H":
            return f"h{ids}" + ("_" + "".join(lab(i) for i in self.dindices) if self.dindices else "")
        return {"Sij": "S", "Si": "S", "S": "S", "hSi": "hS", "hS": "hS", "K": "K", "C": "C"}[self.kind] + ids

    def __repr__(self):
        return self.name(0 if any(i != 1 for i in self.indices + self.dindices) else 1)


def Sij(k, l):
    return GeneratorId("Sij", (k, l))


def Si(k):
    return GeneratorId("Si", (k,))


def S():
    return GeneratorId("S")


def hSi(k):
    return GeneratorId("hSi", (k,))


def hS():
    return GeneratorId("hS")


def K(i):
    return GeneratorId("K", (i,))


def C(*idx):
    return GeneratorId("C", tuple(idx))


def H(idx, d=()):
    return GeneratorId("H", tuple(idx), tuple(d))


def sym(g: GeneratorId, c=Fraction(1)) -> MPoly:
    return MPoly.symbol(g, c)


def mono_weight(m: tuple) -> int:
    return sum(g.weight * e for g, e in m)


def mono_lower(m: tuple) -> int:
    return sum(g.net_lower * e for g, e in m)


class RingElement:
    """Polynomial in generators with weight and index bookkeeping.

    ``free`` lists the free lower index values and ``upper`` the free upper
    ones, so the element is a component of a tensor with
    ``len(free) - len(upper)`` net lower indices.
    """

    __slots__ = ("poly", "weight", "free", "upper", "r")

    def __init__(self, poly: MPoly, weight: int | None = None, free: tuple = (), upper: tuple = (), r: int = 1):
        self.poly = poly
        self.free = tuple(free)
        self.upper = tuple(upper)
        self.r = r
        if weight is None:
            ws = {mono_weight(m) for m in poly.terms}
            if len(ws) > 1:
                raise RingError("mixed generator weights; pass the weight explicitly")
            weight = ws.pop() if ws else 0
        self.weight = weight

    @property
    def net_lower(self) -> int:
        return len(self.free) - len(self.upper)

    @classmethod
    def parse(cls, text: str, r: int = 1, weight: int | None = None, free: tuple = (), names: dict | None = None):
        """Parse e.g. ``"Cxxx*Sxx^2 - 2*Kx*hSx"`` (r = 1) or ``"C112*S12"``."""
        scope = {}
        for g in all_generators(r):
            scope[g.name(r)] = sym(g)
        scope.update(names or {})
        value = _ast_eval(text, scope, lambda v: MPoly.constant(Fraction(v)))
        if not isinstance(value, MPoly):
            value = MPoly.constant(value)
        return cls(value, weight, free, (), r)

    def like(self, poly: MPoly) -> "RingElement":
        return RingElement(poly, self.weight, self.free, self.upper, self.r)

    def _check(self, other: "RingElement"):
        if other.poly.is_zero() or self.poly.is_zero():
            return
        if other.weight != self.weight or other.net_lower != self.net_lower:
            raise RingError(f"adding weight {self.weight}/{self.net_lower} to {other.weight}/{other.net_lower}")

    def __add__(self, other):
        if not isinstance(other, RingElement):
            return self.like(self.poly + other)
        self._check(other)
        base = other if self.poly.is_zero() else self
        return base.like(self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self):
        return self.like(-self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return RingElement(self.poly * other.poly, self.weight + other.weight, self.free + other.free, self.upper + other.upper, max(self.r, other.r))
        return self.like(self.poly * other)

    def __rmul__(self, other):
        return self.like(self.poly * other)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return (self.poly - other.poly).is_zero()
        return self.poly == other

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def generators(self) -> set:
        return self.poly.symbols()

    def partial(self, g: GeneratorId) -> "RingElement":
        return RingElement(self.poly.partial(g), self.weight - g.weight, self.free, self.upper, self.r)

    def canonical_terms(self) -> list:
        """Terms in deterministic order (degree, then generator order)."""
        return sorted(self.poly.terms.items(), key=lambda mc: (sum(e for _, e in mc[0]), [(g._key(), e) for g, e in mc[0]]))

    def monomial_name(self, m: tuple) -> str:
        if not m:
            return "1"
        return "*".join(g.name(self.r) + (f"^{e}" if e != 1 else "") for g, e in m)

    def to_dict(self) -> dict:
        return {self.monomial_name(m): c for m, c in self.canonical_terms()}

    def __repr__(self):
        if self.poly.is_zero():
            return "0"
        return " + ".join(f"({c})*{self.monomial_name(m)}" for m, c in self.canonical_terms())


def all_generators(r: int) -> list[GeneratorId]:
    idx = range(1, r + 1)
    out = [S(), hS()]
    out += [Si(k) for k in idx] + [hSi(k) for k in idx] + [K(k) for k in idx]
    out += [Sij(*p) for p in itertools.combinations_with_replacement(idx, 2)]
    out += [C(*p) for p in itertools.combinations_with_replacement(idx, 3)]
    return out


# ---------------------------------------------------------------- hat maps


def _unhat_values(r: int) -> dict:
    idx = range(1, r + 1)
    vals = {}
    for k in idx:
        vals[hSi(k)] = sym(Si(k)) - sum((sym(Sij(k, m)) * sym(K(m)) for m in idx), MPoly())
    v = sym(S()) - sum((sym(Si(m)) * sym(K(m)) for m in idx), MPoly())
    v = v + sum((sym(Sij(m, n)) * sym(K(m)) * sym(K(n)) for m in idx for n in idx), MPoly()) * Fraction(1, 2)
    vals[hS()] = v
    return vals


def _hat_values(r: int) -> dict:
    idx = range(1, r + 1)
    vals = {}
    for k in idx:
        vals[Si(k)] = sym(hSi(k)) + sum((sym(Sij(k, m)) * sym(K(m)) for m in idx), MPoly())
    v = sym(hS()) + sum((sym(hSi(m)) * sym(K(m)) for m in idx), MPoly())
    v = v + sum((sym(Sij(m, n)) * sym(K(m)) * sym(K(n)) for m in idx for n in idx), MPoly()) * Fraction(1, 2)
    vals[S()] = v
    return vals


def hat_transform(e: RingElement) -> RingElement:
    """Rewrite ``S^k, S`` in terms of the hatted generators."""
    return e.like(e.poly.substitute(_hat_values(e.r)))


def unhat_transform(e: RingElement) -> RingElement:
    """Rewrite hatted generators in terms of ``S^k, S, S^{kl}, K``.

    ``hS^k = S^k - S^{km} K_m`` and ``hS = S - S^m K_m + S^{mn} K_m K_n / 2``.
    """
    return e.like(e.poly.substitute(_unhat_values(e.r)))


def k_expand(e: RingElement, max_degree: int = 2) -> dict:
    """Split by monomials in the ``K_i``.

    Keys are tuples of ``(K(i), exponent)``; values are K-free elements.  For
    r = 1 the key is written with ``K(1)`` and the free indices of the value
    drop one ``x`` per power of K.
    """
    groups: dict = {}
    for m, c in e.poly.terms.items():
        kpart = tuple(p for p in m if p[0].kind == "K")
        rest = tuple(p for p in m if p[0].kind != "K")
        deg = sum(x for _, x in kpart)
        if deg > max_degree:
            raise RingError(f"K-degree {deg} exceeds {max_degree} in monomial {e.monomial_name(m)}")
        groups.setdefault(kpart, {})[rest] = c
    out = {}
    for kpart, terms in groups.items():
        deg = sum(x for _, x in kpart)
        drop = list(e.free)
        for g, x in kpart:
            for _ in range(x):
                if g.indices[0] in drop:
                    drop.remove(g.indices[0])
        out[kpart] = RingElement(MPoly(terms), e.weight, tuple(drop), e.upper, e.r)
    return out


@dataclass(frozen=True)
class WeightReport:
    ok: bool
    offending: str | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


def check_weight(e: RingElement, coefficient_weights: bool = False) -> WeightReport:
    """Every monomial must have the declared weight and index count.

    With rational-function coefficients (lifted variant) the coefficient
    carries part of the weight, so only index-free generator checks apply
    unless ``coefficient_weights`` is False and all coefficients are numbers.
    """
    for m, c in e.canonical_terms():
        if isinstance(c, RationalFunction) and not c.is_constant():
            continue
        w = mono_weight(m)
        if w != e.weight:
            return WeightReport(False, e.monomial_name(m), f"monomial {e.monomial_name(m)} has weight {w}, declared {e.weight}")
        if e.r == 1 and mono_lower(m) != e.net_lower:
            return WeightReport(False, e.monomial_name(m), f"monomial {e.monomial_name(m)} has {mono_lower(m)} net lower indices, element has {e.net_lower}")
    return WeightReport(True, None, "ok")


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class LiftData:
    """One-modulus lift data: C, f~, h~ and the E-tensors, kappa.

    ``kappa`` is the upper-index section with ``C kappa`` the term added to
    ``D K``.
    """

    C: RationalFunction
    f: RationalFunction
    h: RationalFunction
    Exx: RationalFunction
    Ex: RationalFunction
    E: RationalFunction
    kappa: RationalFunction

    @property
    def C_kappa(self) -> RationalFunction:
        return self.C * self.kappa


@dataclass
class DerivationTable:
    r: int = 1
    variant: str = "reduced"
    basis: str = "plain"
    allow_h: bool = False
    lift: LiftData | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.variant not in ("reduced", "lifted"):
            raise RingError(f"unknown variant {self.variant!r}")
        if self.basis not in ("plain", "hat"):
            raise RingError(f"unknown basis {self.basis!r}")
        if self.variant == "lifted":
            if self.lift is None:
                raise RingError("lifted rules need lift data")
            if self.r != 1:
                raise RingError("lifted rules are implemented for one modulus only")

    def plain(self) -> "DerivationTable":
        if self.basis == "plain":
            return self
        key = ("plain-table",)
        if key not in self._cache:
            self._cache[key] = DerivationTable(self.r, self.variant, "plain", self.allow_h, self.lift)
        return self._cache[key]

    def rule(self, g: GeneratorId, i: int) -> MPoly:
        key = (g, i)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._build(g, i)
            self._cache[key] = hit
        return hit

    # plain rules
    def _plain_rule(self, g: GeneratorId, i: int) -> MPoly:
        r = self.r
        idx = range(1, r + 1)
        lifted = self.variant == "lifted"
        Z = MPoly()

        def Cs(*ix):
            # Yukawa symbol, or the model function in the lifted variant
            if lifted:
                return MPoly.constant(self.lift.C)
            return sym(C(*ix))

        def d(a, b):
            return 1 if a == b else 0

        kind = g.kind
        if kind == "Sij":
            k, l = g.indices
            out = Z
            if d(k, i):
                out = out + sym(Si(l))
            if d(l, i):
                out = out + sym(Si(k))
            for m in idx:
                for n in idx:
                    out = out - Cs(i, m, n) * sym(Sij(m, k)) * sym(Sij(n, l))
            if lifted:
                out = out + self.lift.Exx
            return out
        if kind == "Si":
            (k,) = g.indices
            out = Z
            for m in idx:
                for n in idx:
                    out = out - Cs(i, m, n) * sym(Si(m)) * sym(Sij(n, k))
            if d(k, i):
                out = out + sym(S(), Fraction(2))
            if lifted:
                out = out + sym(K(1)) * self.lift.Exx + self.lift.Ex
            return out
        if kind == "S":
            out = Z
            for m in idx:
                for n in idx:
                    out = out - Cs(i, m, n) * sym(Si(m)) * sym(Si(n)) * Fraction(1, 2)
            if lifted:
                kk = sym(K(1))
                out = out + kk * kk * (self.lift.Exx * Fraction(1, 2)) + kk * self.lift.Ex + self.lift.E
            return out
        if kind == "K":
            (j,) = g.indices
            out = -sym(K(i)) * sym(K(j))
            for m in idx:
                for n in idx:
                    out = out + Cs(i, j, m) * sym(Sij(m, n)) * sym(K(n))
                out = out - Cs(i, j, m) * sym(Si(m))
            if lifted:
                out = out + self.lift.C_kappa
            return out
        if kind == "C":
            if len(g.indices) != 3:
                raise RingError(f"no derivation rule for {g!r}")
            I = list(g.indices) + [i]
            out = Z
            for (a, b), (c_, dd) in _pairings(I):
                for m in idx:
                    for n in idx:
                        out = out + Cs(a, b, m) * sym(Sij(m, n)) * Cs(n, c_, dd)
            for pos in range(4):
                rest = I[:pos] + I[pos + 1 :]
                out = out - sym(K(I[pos])) * Cs(*rest)
            if lifted:
                # holomorphic remainder fixed by D C = C' - 3 Gamma C + 2 K C
                c = self.lift.C
                out = out + (c.derivative() - 3 * self.lift.f * c)
            elif self.allow_h:
                out = out + sym(H(I))
            return out
        if kind == "H":
            if not self.allow_h:
                raise RingError("h-family generators are zero in the reduced ring")
            return sym(H(g.indices, g.dindices + (i,)))
        raise RingError(f"no {self.basis} rule for generator {g!r}")

    def _build(self, g: GeneratorId, i: int) -> MPoly:
        if self.basis == "plain":
            if g.kind in ("hSi", "hS"):
                raise RingError(f"hatted generator {g!r} in a plain-basis table")
            return self._plain_rule(g, i)
        if g.kind in ("Si", "S"):
            raise RingError(f"plain generator {g!r} in a hat-basis table")
        hv = _hat_values(self.r)
        if g.kind in ("hSi", "hS"):
            # D(hat g) computed through the plain rules
            plain = self.plain()
            upper = g.indices
            e = RingElement(_unhat_values(self.r)[g], -2, (), upper, self.r)
            de = covariant_derive(e, i, plain)
            return de.poly.substitute(hv)
        return self._plain_rule(g, i).substitute(hv)

    def gamma(self) -> MPoly:
        """``Gamma^x_xx = 2 K - C S^{xx} + f`` (lifted, one modulus)."""
        lf = self.lift
        return sym(K(1), Fraction(2)) - sym(Sij(1, 1)) * lf.C + MPoly.constant(lf.f)

    def coeff_derive(self, c, lower: int, weight: int) -> MPoly:
        """D of a coefficient with the given net lower indices and weight."""
        if self.variant == "reduced":
            if isinstance(c, RationalFunction) and not c.is_constant():
                if lower or weight:
                    raise RingError("non-constant coefficient of nonzero type in the reduced ring")
                return MPoly.constant(c.derivative())
            return MPoly()
        out = MPoly()
        if isinstance(c, RationalFunction):
            out = MPoly.constant(c.derivative())
        if lower:
            out = out - self.gamma() * (c * lower)
        if weight:
            out = out + sym(K(1)) * (c * weight)
        return out


def _pairings(I):
    a = I[0]
    out = []
    for p in range(1, 4):
        rest = [I[q] for q in range(1, 4) if q != p]
        out.append(((a, I[p]), tuple(rest)))
    return out


def reduced_table(r: int = 1, basis: str = "plain", allow_h: bool = False) -> DerivationTable:
    return DerivationTable(r=r, variant="reduced", basis=basis, allow_h=allow_h)


def lifted_table(lift: LiftData, basis: str = "plain") -> DerivationTable:
    return DerivationTable(r=1, variant="lifted", basis=basis, lift=lift)


def covariant_derive(e: RingElement, i: int, table: DerivationTable) -> RingElement:
    """``D_i e``: Leibniz over generators plus the coefficient derivative."""
    if e.r != table.r and e.poly.symbols():
        raise RingError(f"element has r={e.r}, table r={table.r}")
    out: dict = {}

    def acc(poly: MPoly, factor_mono: tuple, scale):
        for m2, c2 in poly.terms.items():
            key = mono_mul(m2, factor_mono)
            v = c2 * scale
            if key in out:
                out[key] = out[key] + v
            else:
                out[key] = v

    L_e, w_e = e.net_lower, e.weight
    for m, c in e.poly.terms.items():
        dc = table.coeff_derive(c, L_e - mono_lower(m), w_e - mono_weight(m))
        if dc:
            acc(dc, m, 1)
        for pos, (g, x) in enumerate(m):
            rest = m[:pos] + (((g, x - 1),) if x > 1 else ()) + m[pos + 1 :]
            acc(table.rule(g, i), rest, c * x)
    return RingElement(MPoly(out), e.weight, e.free + (i,), e.upper, e.r)


def covariant_derive_lifted(e: RingElement, i: int, lift: LiftData, basis: str = "plain") -> RingElement:
    return covariant_derive(e, i, lifted_table(lift, basis))


def degree_in(e: RingElement, kinds) -> int:
    return max((sum(x for g, x in m if g.kind in kinds) for m in e.poly.terms), default=0)


__all__ += ["Sij", "Si", "S", "hSi", "hS", "K", "C", "H", "sym", "all_generators", "mono_degree", "degree_in"]
