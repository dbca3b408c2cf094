"""Exact sparse multivariate polynomials over the rationals.

A polynomial in n variables x1..xn is a map from exponent tuples (length n,
non-negative ints) to nonzero Fraction coefficients.  All arithmetic is
exact; there is no floating point anywhere in this module.  Canonical form:
no zero coefficients are stored, and iteration/printing follows descending
graded-lexicographic order, so equal polynomials have equal representations.

Polynomial maps R^n -> R^n are tuples of n such polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from keller_lab import _kernels

Rational = Fraction
Monomial = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value: int | Fraction | str) -> Fraction:
    """Coerce ints and 'p/q' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot treat {value!r} as an exact rational")


def grlex_key(mono: Monomial) -> tuple[int, Monomial]:
    """Sort key for graded-lexicographic order (degree first, then lex)."""
    return (sum(mono), mono)


class Poly:
    """Immutable sparse polynomial in n variables with Fraction coefficients."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Monomial, Fraction] | None = None):
        if n < 0:
            raise ValueError("dimension must be non-negative")
        self.n = n
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(mono)
                if len(mono) != n:
                    raise ValueError(
                        f"monomial {mono} has {len(mono)} exponents, expected {n}")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in monomial {mono}")
                c = as_rational(coeff)
                if c:
                    c = clean.get(mono, _ZERO) + c
                    if c:
                        clean[mono] = c
                    else:
                        del clean[mono]
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        return cls(n)

    @classmethod
    def const(cls, n: int, value: int | Fraction | str) -> "Poly":
        c = as_rational(value)
        return cls._wrap(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, n: int, i: int) -> "Poly":
        """The polynomial x_i (1-based index)."""
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} out of range 1..{n}")
        exps = [0] * n
        exps[i - 1] = 1
        return cls._wrap(n, {tuple(exps): _ONE})

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int],
                 coeff: int | Fraction = 1) -> "Poly":
        return cls(n, {tuple(exps): as_rational(coeff)})

    @classmethod
    def _wrap(cls, n: int, terms: dict) -> "Poly":
        """Wrap an already-canonical term dict without re-validating."""
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        return p

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        """A copy of the term dict."""
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(),
                      key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(mono) for mono in self._terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (error otherwise)."""
        if not self._terms:
            return _ZERO
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), _ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(mono) for mono in self._terms)

    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading term under graded-lexicographic order."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=grlex_key)
        return mono, self._terms[mono]

    def homogeneous_part(self, d: int) -> "Poly":
        """The sum of terms of total degree exactly d."""
        return Poly._wrap(self.n, {m: c for m, c in self._terms.items()
                                   if sum(m) == d})

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(m) == d for m in self._terms)

    # -- arithmetic --------------------------------------------------------

    def _check_dim(self, other: "Poly") -> None:
        if self.n != other.n:
            raise ValueError(
                f"dimension mismatch: {self.n} vs {other.n} variables")

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.n, other)
        return None

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._check_dim(o)
        return Poly._wrap(self.n, _kernels.add_terms(self._terms, o._terms))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        self._check_dim(o)
        return Poly._wrap(self.n, _kernels.sub_terms(self._terms, o._terms))

    def __rsub__(self, other) -> "Poly":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "Poly":
        return Poly._wrap(self.n, _kernels.scale_terms(Fraction(-1), self._terms))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly._wrap(self.n,
                              _kernels.scale_terms(as_rational(other), self._terms))
        if isinstance(other, Poly):
            self._check_dim(other)
            return Poly._wrap(self.n, _kernels.mul_terms(self._terms, other._terms))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        return Poly._wrap(self.n, _kernels.pow_terms(self._terms, k, self.n))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.n, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def divexact(self, divisor: "Poly") -> "Poly":
        """Exact polynomial division; raises if the division is not exact.

        Repeated leading-term reduction in graded-lex order.  Used by the
        fraction-free determinant, where divisibility is guaranteed.
        """
        self._check_dim(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_mono, lead_coeff = divisor.leading()
        rem = dict(self._terms)
        quot: dict[Monomial, Fraction] = {}
        while rem:
            mono = max(rem, key=grlex_key)
            qm = tuple(a - b for a, b in zip(mono, lead_mono))
            if any(e < 0 for e in qm):
                raise ValueError("polynomial division is not exact")
            qc = rem[mono] / lead_coeff
            quot[qm] = qc
            step = _kernels.mul_terms({qm: qc}, divisor._terms)
            rem = _kernels.sub_terms(rem, step)
        return Poly._wrap(self.n, quot)

    # -- calculus / substitution -------------------------------------------

    def partial(self, i: int) -> "Poly":
        """Formal partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range 1..{self.n}")
        j = i - 1
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            e = mono[j]
            if e:
                new = mono[:j] + (e - 1,) + mono[j + 1:]
                out[new] = out.get(new, _ZERO) + coeff * e
        return Poly._wrap(self.n, {m: c for m, c in out.items() if c})

    def compose(self, pmap: "PolyMap") -> "Poly":
        """Substitute x_i -> pmap.components[i-1], fully expanded."""
        if self.n != pmap.n:
            raise ValueError(
                f"dimension mismatch: {self.n} variables vs map on {pmap.n}")
        n = pmap.n
        one = {(0,) * n: _ONE}
        # cache[i] holds powers of component i, filled on demand
        cache: list[dict[int, dict]] = [dict() for _ in range(n)]
        total: dict = {}
        for mono, coeff in self._terms.items():
            acc = dict(one)
            for i, e in enumerate(mono):
                if not e:
                    continue
                pows = cache[i]
                p = pows.get(e)
                if p is None:
                    base = pmap.components[i]._terms
                    prev = pows.get(e - 1)
                    if prev is not None:
                        p = _kernels.mul_terms(prev, base)
                    else:
                        p = _kernels.pow_terms(base, e, n)
                    pows[e] = p
                acc = _kernels.mul_terms(acc, p)
            total = _kernels.add_terms(total, _kernels.scale_terms(coeff, acc))
        return Poly._wrap(n, total)

    def eval(self, point: Sequence[int | Fraction]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.n:
            raise ValueError(
                f"dimension mismatch: point has {len(point)} coordinates, "
                f"expected {self.n}")
        pt = tuple(as_rational(c) for c in point)
        return _kernels.eval_terms(self._terms, pt)

    def restrict_segment(self, start: Sequence, end: Sequence) -> tuple[Fraction, ...]:
        """Coefficients (in t) of p(start + t*(end - start)), exact.

        Returns the univariate coefficient tuple c0..cd with
        p(gamma(t)) = sum c_k t^k.
        """
        if len(start) != self.n or len(end) != self.n:
            raise ValueError("dimension mismatch in segment endpoints")
        a = [as_rational(c) for c in start]
        b = [as_rational(e) - as_rational(s) for s, e in zip(start, end)]
        cache: dict[tuple[int, int], list[Fraction]] = {}

        def linear_power(i: int, e: int) -> list[Fraction]:
            got = cache.get((i, e))
            if got is not None:
                return got
            if e == 0:
                out = [_ONE]
            else:
                out = _umul(linear_power(i, e - 1), [a[i], b[i]])
            cache[(i, e)] = out
            return out

        total: list[Fraction] = [_ZERO]
        for mono, coeff in self._terms.items():
            term = [coeff]
            for i, e in enumerate(mono):
                if e:
                    term = _umul(term, linear_power(i, e))
            total = _uadd(total, term)
        while len(total) > 1 and not total[-1]:
            total.pop()
        return tuple(total)

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for mono, coeff in self.sorted_terms():
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if not pieces:
                pieces.append(body if coeff > 0 else "-" + body)
            else:
                pieces.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self.n}, {self})"


def _uadd(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    if len(u) < len(v):
        u, v = v, u
    out = list(u)
    for i, c in enumerate(v):
        out[i] += c
    return out


def _umul(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
    out = [_ZERO] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if not a:
            continue
        for j, b in enumerate(v):
            if b:
                out[i + j] += a * b
    return out


class PolyMap:
    """A polynomial self-map of R^n: one Poly per coordinate."""

    __slots__ = ("n", "components")

    def __init__(self, components: Iterable[Poly]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a polynomial map needs at least one component")
        n = comps[0].n
        if len(comps) != n or any(c.n != n for c in comps):
            raise ValueError(
                "map must have n components of n variables each; got "
                f"{len(comps)} components with dimensions {[c.n for c in comps]}")
        self.n = n
        self.components = comps

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(Poly.variable(n, i) for i in range(1, n + 1))

    def is_identity(self) -> bool:
        return all(c == Poly.variable(self.n, i + 1)
                   for i, c in enumerate(self.components))

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def eval(self, point: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        return tuple(c.eval(point) for c in self.components)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """self after inner: (self o inner)(X) = self(inner(X))."""
        if self.n != inner.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {inner.n}")
        return PolyMap(c.compose(inner) for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"PolyMap{self}"


def coordinate_sum(n: int) -> Poly:
    """The linear form x1 + ... + xn."""
    terms = {}
    for i in range(n):
        exps = [0] * n
        exps[i] = 1
        terms[tuple(exps)] = _ONE
    return Poly._wrap(n, terms)


class ExpansionLimitError(ValueError):
    """A dense power of the coordinate sum would exceed the configured cap."""


# (x1+...+xn)^k has C(k+n-1, n-1) monomials, so dense expansion is capped.
_expansion_limit = {"n": 8, "degree": 10}


def set_expansion_limit(n: int, degree: int) -> None:
    """Raise or lower the dense-expansion guard (defaults n=8, degree=10)."""
    if n < 1 or degree < 1:
        raise ValueError("expansion limits must be positive")
    _expansion_limit["n"] = n
    _expansion_limit["degree"] = degree


def get_expansion_limit() -> tuple[int, int]:
    return _expansion_limit["n"], _expansion_limit["degree"]


def z_power(n: int, k: int) -> Poly:
    """(x1+...+xn)^k expanded into the dense monomial basis, guarded."""
    if k >= 2:
        lim_n, lim_deg = get_expansion_limit()
        if n > lim_n or k > lim_deg:
            raise ExpansionLimitError(
                f"refusing to expand a degree-{k} coordinate-sum power in "
                f"{n} variables (limit n<={lim_n}, degree<={lim_deg}; "
                "see set_expansion_limit)")
    return coordinate_sum(n) ** k
