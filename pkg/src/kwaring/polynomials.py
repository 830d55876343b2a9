"""Sparse multivariate polynomials with extension-tower coefficients.

Terms are stored in a dict keyed by exponent tuples; coefficients are
normal-form ring elements and zero coefficients are never kept.  The
canonical term order used for printing and serialization is graded
lexicographic, descending (higher total degree first, ties broken by the
exponent tuple, x0-major).  Exponentiation uses binary powering.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import ExtensionTower, RingElement, TowerError
from .rationals import Q, as_rational, is_rational


@dataclass(frozen=True)
class Monomial:
    """A monomial given by its exponent vector (coefficient 1)."""

    exponents: tuple

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        object.__setattr__(self, "exponents", exps)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    def live_indices(self) -> tuple:
        return tuple(i for i, e in enumerate(self.exponents) if e > 0)

    def is_one(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def is_kth_power(self, k: int) -> bool:
        return all(e % k == 0 for e in self.exponents)

    def kth_root(self, k: int) -> "Monomial":
        if not self.is_kth_power(k):
            raise ValueError("not a k-th power")
        return Monomial(tuple(e // k for e in self.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(other.exponents) != len(self.exponents):
            raise ValueError("variable counts differ")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __pow__(self, n: int) -> "Monomial":
        if n < 0:
            raise ValueError("negative power")
        return Monomial(tuple(e * n for e in self.exponents))

    def text(self, names=None) -> str:
        if names is None:
            names = [f"x{i}" for i in range(len(self.exponents))]
        parts = [f"{names[i]}^{e}" for i, e in enumerate(self.exponents) if e > 0]
        return "*".join(parts) if parts else "1"

    def to_polynomial(self, tower: ExtensionTower) -> "Polynomial":
        return Polynomial.monomial(tower, self.exponents, 1)


def _order_key(e):
    return (sum(e), e)


class Polynomial:
    """Sparse polynomial over an extension tower.  Treated as immutable."""

    __slots__ = ("tower", "nvars", "terms")

    def __init__(self, tower: ExtensionTower, nvars: int, terms: dict):
        self.tower = tower
        self.nvars = nvars
        self.terms = terms

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, tower: ExtensionTower, nvars: int) -> "Polynomial":
        return cls(tower, nvars, {})

    @classmethod
    def constant(cls, tower: ExtensionTower, nvars: int, c) -> "Polynomial":
        el = tower._coerce(c)
        if el.is_zero():
            return cls.zero(tower, nvars)
        return cls(tower, nvars, {(0,) * nvars: el})

    @classmethod
    def monomial(cls, tower: ExtensionTower, exponents, c=1) -> "Polynomial":
        el = tower._coerce(c)
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        if el.is_zero():
            return cls.zero(tower, len(exps))
        return cls(tower, len(exps), {exps: el})

    @classmethod
    def variable(cls, tower: ExtensionTower, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(tower, nvars, {tuple(e): tower.one()})

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def sorted_terms(self):
        """Terms in canonical order (graded lex, descending)."""
        return [(e, self.terms[e]) for e in sorted(self.terms, key=_order_key, reverse=True)]

    def _check(self, other: "Polynomial"):
        if self.tower != other.tower:
            raise TowerError("mixed towers in polynomial arithmetic")
        if self.nvars != other.nvars:
            raise ValueError("variable counts differ")

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.tower, self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.tower, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (RingElement, int)) or is_rational(other):
            el = self.tower._coerce(other)
            if el.is_zero():
                return Polynomial.zero(self.tower, self.nvars)
            return Polynomial(
                self.tower, self.nvars, {e: c * el for e, c in self.terms.items()}
            )
        self._check(other)
        # Accumulate raw tower terms per output monomial and normalize once
        # per monomial: the inner loop stays in plain rational arithmetic.
        tower = self.tower
        acc: dict = {}
        for e1, c1 in self.terms.items():
            t1 = c1.terms
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                bucket = acc.get(e)
                if bucket is None:
                    bucket = acc[e] = {}
                for f1, a1 in t1.items():
                    for f2, a2 in c2.terms.items():
                        f = tuple(x + y for x, y in zip(f1, f2))
                        prev = bucket.get(f)
                        bucket[f] = a1 * a2 if prev is None else prev + a1 * a2
        out: dict = {}
        for e, bucket in acc.items():
            reduced = tower.normalize(bucket)
            if reduced:
                out[e] = RingElement(tower, reduced)
        return Polynomial(tower, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        """Multinomial expansion over the term list.

        Enumerates exponent assignments (b_1..b_T) with sum n once each, so
        a power of a T-term polynomial costs O(C(n+T-1, T-1)) leaf terms
        instead of the pair products of repeated squaring.
        """
        if n < 0:
            raise ValueError("negative power")
        if n == 0:
            return Polynomial.constant(self.tower, self.nvars, 1)
        if n == 1:
            return self
        items = list(self.terms.items())
        if not items:
            return Polynomial.zero(self.tower, self.nvars)
        tower = self.tower
        coeff_pows = []
        for _, c in items:
            row = [tower.one(), c]
            for _ in range(2, n + 1):
                row.append(row[-1] * c)
            coeff_pows.append(row)
        acc: dict = {}
        last = len(items) - 1

        def emit(exps, coeff_el, multi):
            bucket = acc.get(exps)
            if bucket is None:
                bucket = acc[exps] = {}
            for f, a in coeff_el.terms.items():
                prev = bucket.get(f)
                na = a * multi
                bucket[f] = na if prev is None else prev + na

        def rec(idx, remaining, exps, coeff_el, multi):
            exp_j = items[idx][0]
            if idx == last:
                b = remaining
                if b:
                    exps = tuple(x + b * y for x, y in zip(exps, exp_j))
                    coeff_el = coeff_el * coeff_pows[idx][b]
                emit(exps, coeff_el, multi)
                return
            for b in range(remaining + 1):
                ne = tuple(x + b * y for x, y in zip(exps, exp_j)) if b else exps
                nc = coeff_el * coeff_pows[idx][b] if b else coeff_el
                rec(idx + 1, remaining - b, ne, nc, comb(remaining, b) * multi)

        rec(0, n, (0,) * self.nvars, tower.one(), 1)
        out: dict = {}
        for e, bucket in acc.items():
            reduced = tower.normalize(bucket)
            if reduced:
                out[e] = RingElement(tower, reduced)
        return Polynomial(tower, self.nvars, out)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.tower == other.tower
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.tower, self.nvars, tuple(sorted((e, c.text()) for e, c in self.terms.items())))
        )

    # -- structural maps -----------------------------------------------------

    def substitute(self, images: dict) -> "Polynomial":
        """Replace each variable by a polynomial (a ring homomorphism).

        Every variable that actually occurs must have an image; all images
        share one tower (equal to this polynomial's) and one variable count.
        """
        live = set()
        for e in self.terms:
            live.update(i for i in range(self.nvars) if e[i] > 0)
        missing = live - set(images)
        if missing:
            raise ValueError(f"no image for variable(s) {sorted(missing)}")
        if live:
            sample = images[next(iter(live))]
            out_nvars = sample.nvars
        else:
            out_nvars = self.nvars
        for i in live:
            img = images[i]
            if img.tower != self.tower:
                raise TowerError("image tower differs")
            if img.nvars != out_nvars:
                raise ValueError("images disagree on variable count")
        acc = Polynomial.zero(self.tower, out_nvars)
        for e, c in self.terms.items():
            t = Polynomial.constant(self.tower, out_nvars, c)
            for i in range(self.nvars):
                if e[i]:
                    t = t * images[i] ** e[i]
            acc = acc + t
        return acc

    def specialize(self, identifications: dict) -> "Polynomial":
        """Identify variables (src -> dst), keeping the ambient variable set.

        Applied simultaneously; a destination may not itself be re-mapped.
        """
        for src, dst in identifications.items():
            if not (0 <= src < self.nvars and 0 <= dst < self.nvars):
                raise ValueError("identification index out of range")
            if dst in identifications and identifications[dst] != dst:
                raise ValueError("chained identifications are ambiguous")
        out: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            for src, dst in identifications.items():
                if src != dst and ne[src]:
                    ne[dst] += ne[src]
                    ne[src] = 0
            key = tuple(ne)
            prev = out.get(key)
            s = c if prev is None else prev + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return Polynomial(self.tower, self.nvars, out)

    # -- evaluation ------------------------------------------------------------

    def eval_exact(self, point) -> RingElement:
        """Exact evaluation at rational variable values (stays in the tower)."""
        vals = [as_rational(v) for v in point]
        if len(vals) != self.nvars:
            raise ValueError("point has wrong length")
        total = self.tower.zero()
        for e, c in self.terms.items():
            f = Q(1)
            for i in range(self.nvars):
                if e[i]:
                    f *= vals[i] ** e[i]
            total = total + c * f
        return total

    def eval_complex(self, point, roots=None) -> complex:
        """Numeric evaluation; generators mapped to the given complex roots."""
        if roots is None:
            roots = self.tower.complex_roots()
        total = 0j
        for e, c in self.terms.items():
            t = c.evaluate(roots)
            for i in range(self.nvars):
                if e[i]:
                    t *= point[i] ** e[i]
            total += t
        return total

    # -- output ------------------------------------------------------------

    def text(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            coef = c.text()
            if len(c.terms) > 1:
                coef = f"({coef})"
            mono = Monomial(e).text(names)
            parts.append(coef if mono == "1" else f"{coef}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.text()})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_pow(p: Polynomial, n: int) -> Polynomial:
    return p ** n


def substitute(p: Polynomial, images: dict) -> Polynomial:
    return p.substitute(images)


def specialize(p: Polynomial, identifications: dict) -> Polynomial:
    return p.specialize(identifications)
