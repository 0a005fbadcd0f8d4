"""Exact coefficient arithmetic: complex rationals, symbolic constants, and
multivariate Laurent series with explicit truncation accounting.

Everything in this module is exact.  Floating point appears only in the
``numeric_value``/``evaluate`` casts used by reports and by the numeric
oracle.  The series type stores finitely many negative-exponent terms plus a
regular part that is trusted only up to a per-variable truncation order, and
every operation propagates that trust honestly: no result ever claims
accuracy beyond what its inputs support.

Truncation bookkeeping for products uses the shifted rule
``T_prod = min(min_exp(a) + T_b, min_exp(b) + T_a)`` per variable, which is
what makes coefficient extraction downstream exact rather than approximately
truncated: a caller who needs the coefficient at exponent -m of N(y)/y^p
expands N to degree p - m, and multiplication by the monomial y^{-p} then
records that the result is trusted exactly through y^{-m}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    ConstantTermError,
    InsufficientTruncationError,
    NegativeExponentError,
    NonInvertibleError,
    OddExponentError,
    VariableMismatchError,
)

RationalLike = Union[int, Fraction]


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an integer or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class ComplexRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def zero(cls) -> "ComplexRational":
        return cls(Fraction(0), Fraction(0))

    @classmethod
    def one(cls) -> "ComplexRational":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def i(cls) -> "ComplexRational":
        return cls(Fraction(0), Fraction(1))

    @classmethod
    def of(cls, re: RationalLike, im: RationalLike = 0) -> "ComplexRational":
        return cls(_frac(re), _frac(im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: "ComplexRational") -> "ComplexRational":
        other = _coerce_cr(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "ComplexRational") -> "ComplexRational":
        other = _coerce_cr(other)
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other) -> "ComplexRational":
        other = _coerce_cr(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ComplexRational":
        other = _coerce_cr(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return ComplexRational(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"({self.re},{self.im})"


def _coerce_cr(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(_frac(x), Fraction(0))
    raise TypeError(f"cannot interpret {type(x).__name__} as ComplexRational")


@dataclass(frozen=True)
class SymbolicConstant:
    """An exact constant of the form q * i^a * pi^b * sqrt(2)^c.

    q is rational, a is kept in {0,1,2,3} (i^4 = 1, so wrapping the exponent
    changes nothing, and in particular never the sign of q), and even powers
    of sqrt(2) are folded into q so that c is 0 or 1.  That normalization
    makes structural equality canonical.
    """

    q: Fraction
    i_pow: int = 0
    pi_pow: int = 0
    sqrt2_pow: int = 0

    def __post_init__(self):
        q = _frac(self.q)
        i_pow, pi_pow, sqrt2_pow = self.i_pow, self.pi_pow, self.sqrt2_pow
        if q == 0:
            i_pow = pi_pow = sqrt2_pow = 0
        else:
            i_pow %= 4
            # sqrt(2)^(2m + r) = 2^m * sqrt(2)^r with r in {0, 1}
            r = sqrt2_pow % 2
            m = (sqrt2_pow - r) // 2
            if m:
                q *= Fraction(2) ** m
            sqrt2_pow = r
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "i_pow", i_pow)
        object.__setattr__(self, "pi_pow", pi_pow)
        object.__setattr__(self, "sqrt2_pow", sqrt2_pow)

    @classmethod
    def one(cls) -> "SymbolicConstant":
        return cls(Fraction(1))

    @classmethod
    def rational(cls, q: RationalLike) -> "SymbolicConstant":
        return cls(_frac(q))

    def is_zero(self) -> bool:
        return self.q == 0

    def __mul__(self, other: "SymbolicConstant") -> "SymbolicConstant":
        if not isinstance(other, SymbolicConstant):
            return NotImplemented
        return SymbolicConstant(
            self.q * other.q,
            self.i_pow + other.i_pow,
            self.pi_pow + other.pi_pow,
            self.sqrt2_pow + other.sqrt2_pow,
        )

    def inverse(self) -> "SymbolicConstant":
        if self.q == 0:
            raise ZeroDivisionError("inverse of zero SymbolicConstant")
        # 1/i = i^3, 1/sqrt2 = sqrt2 / 2
        return SymbolicConstant(
            Fraction(1, 1) / (self.q * (2 if self.sqrt2_pow else 1)),
            (-self.i_pow) % 4,
            -self.pi_pow,
            self.sqrt2_pow,
        )

    def __pow__(self, n: int) -> "SymbolicConstant":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = SymbolicConstant.one()
        for _ in range(n):
            out = out * self
        return out

    def __neg__(self) -> "SymbolicConstant":
        return SymbolicConstant(-self.q, self.i_pow, self.pi_pow, self.sqrt2_pow)

    def numeric_value(self) -> complex:
        return (
            float(self.q)
            * (1j ** self.i_pow)
            * (math.pi ** self.pi_pow)
            * (math.sqrt(2.0) ** self.sqrt2_pow)
        )

    def text(self) -> str:
        return f"{self.q} * i^{self.i_pow} * pi^{self.pi_pow} * sqrt2^{self.sqrt2_pow}"

    def to_json_dict(self) -> dict:
        return {
            "q": [self.q.numerator, self.q.denominator],
            "i_pow": self.i_pow,
            "pi_pow": self.pi_pow,
            "sqrt2_pow": self.sqrt2_pow,
        }

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "SymbolicConstant":
        num, den = doc["q"]
        return cls(
            Fraction(num, den),
            int(doc.get("i_pow", 0)),
            int(doc.get("pi_pow", 0)),
            int(doc.get("sqrt2_pow", 0)),
        )


Exponents = tuple  # tuple[int, ...], keyed per variable
Trunc = tuple  # tuple[Optional[int], ...]


def _min_none(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_none(a: Optional[int], b: int) -> Optional[int]:
    return None if a is None else a + b


class LaurentSeries:
    """Multivariate Laurent series: finitely many terms, each a ComplexRational
    coefficient attached to an integer exponent vector, with a per-variable
    truncation order.

    ``trunc[v] = T`` means the series is trusted through exponent T in
    variable v and says nothing about higher exponents; ``trunc[v] = None``
    means the series is exact in that variable (a Laurent polynomial).  Zero
    coefficients are never stored and terms beyond a truncation order are
    dropped on construction, so structural equality is canonical.
    """

    __slots__ = ("vars", "terms", "trunc")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Optional[Mapping[Exponents, ComplexRational]] = None,
        trunc: Optional[Sequence[Optional[int]]] = None,
    ):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise VariableMismatchError(f"duplicate variable names in {vs}")
        tr = tuple(trunc) if trunc is not None else (None,) * len(vs)
        if len(tr) != len(vs):
            raise VariableMismatchError(
                f"truncation vector length {len(tr)} does not match {len(vs)} variables"
            )
        clean: dict = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != len(vs):
                    raise VariableMismatchError(
                        f"exponent vector {exps} does not match variables {vs}"
                    )
                if not isinstance(coeff, ComplexRational):
                    coeff = _coerce_cr(coeff)
                if coeff.is_zero():
                    continue
                if any(t is not None and e > t for e, t in zip(exps, tr)):
                    continue  # beyond declared accuracy: not representable
                clean[exps] = clean.get(exps, ComplexRational.zero()) + coeff
        self.vars = vs
        self.terms = {e: c for e, c in clean.items() if not c.is_zero()}
        self.trunc = tr

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], trunc=None) -> "LaurentSeries":
        return cls(variables, {}, trunc)

    @classmethod
    def const(cls, variables: Sequence[str], value, trunc=None) -> "LaurentSeries":
        value = _coerce_cr(value)
        k = len(tuple(variables))
        return cls(variables, {(0,) * k: value}, trunc)

    @classmethod
    def monomial(
        cls, variables: Sequence[str], exps: Sequence[int], coeff=1, trunc=None
    ) -> "LaurentSeries":
        return cls(variables, {tuple(exps): _coerce_cr(coeff)}, trunc)

    @classmethod
    def linear_form(
        cls, variables: Sequence[str], covector: Sequence[RationalLike], scale=1
    ) -> "LaurentSeries":
        """sum_a covector[a] * variables[a], optionally scaled."""
        vs = tuple(variables)
        if len(covector) != len(vs):
            raise VariableMismatchError(
                f"covector length {len(covector)} does not match variables {vs}"
            )
        scale = _coerce_cr(scale)
        terms = {}
        for a, w in enumerate(covector):
            c = scale * _coerce_cr(w)
            if c.is_zero():
                continue
            e = [0] * len(vs)
            e[a] = 1
            terms[tuple(e)] = c
        return cls(vs, terms)

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> Exponents:
        """Per-variable minimum exponent present (0 for the empty series)."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(
            min(e[v] for e in self.terms) for v in range(len(self.vars))
        )

    def has_negative_exponents(self) -> bool:
        return any(any(x < 0 for x in e) for e in self.terms)

    def principal_terms(self) -> dict:
        """Terms with at least one negative exponent."""
        return {e: c for e, c in self.terms.items() if any(x < 0 for x in e)}

    def total_degree_min(self) -> int:
        if not self.terms:
            return 0
        return min(sum(e) for e in self.terms)

    def constant_term(self) -> ComplexRational:
        return self.terms.get((0,) * len(self.vars), ComplexRational.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.terms == other.terms
            and self.trunc == other.trunc
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items()), self.trunc))

    def _check_same_vars(self, other: "LaurentSeries"):
        if self.vars != other.vars:
            raise VariableMismatchError(
                f"variable lists differ: {self.vars} vs {other.vars}"
            )

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check_same_vars(other)
        tr = tuple(_min_none(a, b) for a, b in zip(self.trunc, other.trunc))
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ComplexRational.zero()) + c
        return LaurentSeries(self.vars, terms, tr)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(
            self.vars, {e: -c for e, c in self.terms.items()}, self.trunc
        )

    def scale(self, c) -> "LaurentSeries":
        c = _coerce_cr(c)
        if c.is_zero():
            return LaurentSeries.zero(self.vars, self.trunc)
        return LaurentSeries(
            self.vars, {e: c * v for e, v in self.terms.items()}, self.trunc
        )

    def __mul__(self, other) -> "LaurentSeries":
        if isinstance(other, (int, Fraction, ComplexRational)):
            return self.scale(other)
        self._check_same_vars(other)
        # Trusted order of the product, per variable: an unknown term of one
        # factor (first unknown exponent T+1) multiplies the known minimal
        # exponent of the other.
        ma, mb = self.min_exponent(), other.min_exponent()
        tr = tuple(
            _min_none(_add_none(tb, a_min), _add_none(ta, b_min))
            for ta, tb, a_min, b_min in zip(self.trunc, other.trunc, ma, mb)
        )
        terms: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if any(t is not None and x > t for x, t in zip(e, tr)):
                    continue
                prev = terms.get(e)
                prod = ca * cb
                terms[e] = prod if prev is None else prev + prod
        return LaurentSeries(self.vars, terms, tr)

    __rmul__ = __mul__

    # -- coefficient access ---------------------------------------------

    def coefficient(self, exps: Sequence[int]) -> ComplexRational:
        """Exact coefficient at the given exponent vector.

        Reading beyond a variable's truncation order raises
        InsufficientTruncationError naming the order that would be needed.
        Reading below the minimal exponent returns an exact zero (the
        principal part is always complete).
        """
        exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.vars):
            raise VariableMismatchError(
                f"exponent vector {exps} does not match variables {self.vars}"
            )
        for v, (e, t) in enumerate(zip(exps, self.trunc)):
            if t is not None and e > t:
                raise InsufficientTruncationError(
                    f"coefficient at {self.vars[v]}^{e} requested but series is "
                    f"only trusted through order {t}; recompute with truncation "
                    f"order at least {e}",
                    variable=self.vars[v],
                    requested=e,
                    required=e,
                )
        return self.terms.get(exps, ComplexRational.zero())

    # -- structure maps --------------------------------------------------

    def _var_index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise VariableMismatchError(
                f"variable {var!r} not among {self.vars}"
            ) from None

    def even_part(self, var: str) -> "LaurentSeries":
        """Average of the series with its image under var -> -var: keeps the
        terms of even exponent in var, kills the odd ones."""
        v = self._var_index(var)
        terms = {e: c for e, c in self.terms.items() if e[v] % 2 == 0}
        return LaurentSeries(self.vars, terms, self.trunc)

    def substitute_sqrt(self, var: str, new_name: Optional[str] = None) -> "LaurentSeries":
        """Replace var^2 by a fresh variable: exponents of var are halved.

        Requires every exponent of var to be even (apply even_part first).
        Exact on its domain; the truncation order in the substituted variable
        becomes floor(T/2) because the first untrusted even exponent T' > T
        maps to exponent T'/2.
        """
        v = self._var_index(var)
        for e in self.terms:
            if e[v] % 2 != 0:
                raise OddExponentError(
                    f"substitute_sqrt needs even exponents in {var!r}, found {e[v]}"
                )
        new_vars = list(self.vars)
        new_vars[v] = new_name if new_name is not None else var
        t = self.trunc[v]
        new_tr = list(self.trunc)
        new_tr[v] = None if t is None else t // 2
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[v] = e[v] // 2
            terms[tuple(ne)] = c
        return LaurentSeries(new_vars, terms, new_tr)

    def rename(self, mapping: Mapping[str, str]) -> "LaurentSeries":
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        return LaurentSeries(new_vars, dict(self.terms), self.trunc)

    # -- rendering and numeric evaluation -------------------------------

    def canonical_text(self) -> str:
        """Canonical rendering: "(re,im) y^e z^f" terms joined by " + ",
        sorted lexicographically by exponent vector.  Zero renders as "0"."""
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms):
            coeff = self.terms[exps]
            factors = [str(coeff)]
            for v, e in zip(self.vars, exps):
                if e != 0:
                    factors.append(f"{v}^{e}")
            parts.append(" ".join(factors))
        return " + ".join(parts)

    def evaluate(self, point: Mapping[str, complex]) -> complex:
        """Floating evaluation at a point with every variable assigned."""
        missing = [v for v in self.vars if v not in point]
        if missing:
            raise VariableMismatchError(f"no value supplied for {missing}")
        total = 0j
        for exps in sorted(self.terms):
            term = complex(self.terms[exps])
            for v, e in zip(self.vars, exps):
                if e != 0:
                    term *= point[v] ** e
            total += term
        return total

    def to_json_terms(self) -> list:
        out = []
        for exps in sorted(self.terms):
            c = self.terms[exps]
            out.append(
                {
                    "exp": list(exps),
                    "re": [c.re.numerator, c.re.denominator],
                    "im": [c.im.numerator, c.im.denominator],
                }
            )
        return out

    @classmethod
    def from_json_terms(
        cls, variables: Sequence[str], terms_doc: Iterable[Mapping], trunc=None
    ) -> "LaurentSeries":
        terms = {}
        for entry in terms_doc:
            exps = tuple(int(e) for e in entry["exp"])
            re_n, re_d = entry["re"]
            im_n, im_d = entry["im"]
            c = ComplexRational(Fraction(re_n, re_d), Fraction(im_n, im_d))
            if exps in terms:
                raise VariableMismatchError(f"duplicate exponent vector {exps}")
            terms[exps] = c
        return cls(variables, terms, trunc)

    def __repr__(self) -> str:
        return f"LaurentSeries({self.vars}, {self.canonical_text()!r}, trunc={self.trunc})"


# -- module-level operations ---------------------------------------------


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Exact product, truncated to the trust supported by both factors."""
    return a * b


def coeff_extract(f: LaurentSeries, exps: Sequence[int]) -> ComplexRational:
    """Exact coefficient at an exponent vector; see LaurentSeries.coefficient."""
    return f.coefficient(exps)


def even_projector(f: LaurentSeries, var: str) -> LaurentSeries:
    """(1/2)(f(var) + f(-var)): the even part in one variable.

    Idempotent, linear, and the output contains no odd powers of var."""
    return f.even_part(var)


def substitute_sqrt(
    f: LaurentSeries, var: str, new_name: Optional[str] = None
) -> LaurentSeries:
    return f.substitute_sqrt(var, new_name)


def _order_tuple(order, k: int) -> Trunc:
    if isinstance(order, int):
        return (order,) * k
    order = tuple(order)
    if len(order) != k:
        raise VariableMismatchError(
            f"order vector length {len(order)} does not match {k} variables"
        )
    return order


def exp_series(p: LaurentSeries, order) -> LaurentSeries:
    """exp of a polynomial with zero constant term, expanded so that every
    retained monomial coefficient is exact.

    ``order`` is the target truncation order, an integer applied to every
    variable or a per-variable sequence.  Negative exponents are refused, and
    a nonzero constant term is refused because exp of a nonzero rational is
    not a rational (callers split constants off first).  The partial sums
    sum_n p^n / n! are accumulated until p^n can no longer contribute below
    the truncation order, so for a single variable this is exactly the sum
    through n = order.
    """
    k = len(p.vars)
    orders = _order_tuple(order, k)
    for o in orders:
        if o is not None and o < 0:
            raise NegativeExponentError(f"exp target order must be >= 0, got {o}")
    if p.has_negative_exponents():
        raise NegativeExponentError(
            "exp is only defined for series with nonnegative exponents"
        )
    if not p.constant_term().is_zero():
        raise ConstantTermError(
            "exp of a series with nonzero constant term is not rational; "
            "split the constant factor off before exponentiating"
        )
    tr = tuple(_min_none(o, t) for o, t in zip(orders, p.trunc))
    if any(t is None for t in tr):
        # exp of a nonzero polynomial has infinitely many terms in any
        # variable it involves; exactness (None) survives only where p has
        # no dependence at all.
        involved = [False] * k
        for e in p.terms:
            for v, x in enumerate(e):
                if x != 0:
                    involved[v] = True
        tr = tuple(
            t if (t is not None or not involved[v]) else orders[v]
            for v, t in enumerate(tr)
        )
        if any(t is None and involved[v] for v, t in enumerate(tr)):
            raise NegativeExponentError(
                "exp needs a finite truncation order in every involved variable"
            )
    acc = LaurentSeries.const(p.vars, 1, tr)
    term = acc
    n = 0
    while True:
        n += 1
        term = (term * p).scale(Fraction(1, n))
        # Clip to the target orders: the product rule can report more trust
        # than we asked for, which would keep dead high-degree terms alive.
        term = LaurentSeries(term.vars, term.terms, tr)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def invert_series(f: LaurentSeries, order) -> LaurentSeries:
    """Laurent inverse of a series of the form monomial * unit.

    The minimal monomial (per-variable minimum exponent) is factored out; the
    remaining part must have a nonzero constant term, otherwise no inverse
    with finitely many negative exponents exists and NonInvertibleError is
    raised.  The unit is inverted by the geometric series to exactly the
    order needed so that the result is trusted through ``order`` in each
    variable.
    """
    if f.is_zero():
        raise NonInvertibleError("cannot invert the zero series")
    k = len(f.vars)
    orders = _order_tuple(order, k)
    m = f.min_exponent()
    shifted = {
        tuple(x - y for x, y in zip(e, m)): c for e, c in f.terms.items()
    }
    u = LaurentSeries(f.vars, shifted, tuple(_add_none(t, -mm) for t, mm in zip(f.trunc, m)))
    c0 = u.constant_term()
    if c0.is_zero():
        raise NonInvertibleError(
            "series is not a monomial times a unit; its inverse has "
            "unbounded negative exponents and cannot be represented",
            leading_exponents=m,
        )
    # Orders needed for 1/u so that (1/u) * monomial^{-1} is trusted through
    # the requested orders.
    u_orders = tuple(
        None if o is None else o + mm for o, mm in zip(orders, m)
    )
    for v, (t, o) in enumerate(zip(u.trunc, u_orders)):
        if t is not None and (o is None or o > t):
            need = "unbounded" if o is None else str(o)
            raise InsufficientTruncationError(
                f"inverse requested through order {need} in {f.vars[v]} but the "
                f"input only supports {t}",
                variable=f.vars[v],
                requested=-1 if o is None else o,
                required=-1 if o is None else o,
            )
    if len(u.terms) == 1:
        inv_u = LaurentSeries.const(f.vars, ComplexRational.one() / c0, u_orders if any(
            t is not None for t in u.trunc) else None)
    else:
        rest = (u - LaurentSeries.const(f.vars, c0, u.trunc)).scale(
            ComplexRational.one() / c0
        )
        for e in rest.terms:
            for v, x in enumerate(e):
                if x != 0 and u_orders[v] is None:
                    raise InsufficientTruncationError(
                        f"inverting a non-monomial series needs a finite order in "
                        f"{f.vars[v]}",
                        variable=f.vars[v],
                        requested=-1,
                        required=-1,
                    )
        # rest has strictly positive minimal total degree, so the geometric
        # series terminates under truncation.
        rest = LaurentSeries(rest.vars, rest.terms, u_orders)
        acc = LaurentSeries.const(f.vars, 1, u_orders)
        term = acc
        while True:
            term = term * (-rest)
            term = LaurentSeries(term.vars, term.terms, u_orders)
            if term.is_zero():
                break
            acc = acc + term
        inv_u = acc.scale(ComplexRational.one() / c0)
    inv_mono = LaurentSeries.monomial(
        f.vars, tuple(-x for x in m), 1
    )
    out = inv_u * inv_mono
    # The construction above already yields trust through `orders`; record it.
    return LaurentSeries(out.vars, out.terms, tuple(
        _min_none(o, t) for o, t in zip(orders, out.trunc)
    ))
