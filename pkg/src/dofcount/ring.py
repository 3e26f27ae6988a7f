"""Exact scalars, polynomials in the derivative symbols, and Laurent polynomials in z.

Coefficients are Gaussian rationals.  Purely real values are stored as
``gmpy2.mpq`` (fast path); values with a nonzero imaginary part are stored as
:class:`Gaussian`.  Everything here is immutable by convention.
"""

from fractions import Fraction
from math import comb

from gmpy2 import mpq

NEG_INF = float("-inf")  # degree of the zero polynomial


class Gaussian:
    """a + b*i with rational a, b.  Only used when b != 0."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = mpq(re)
        self.im = mpq(im)

    def _norm(self):
        return gaussian(self.re, self.im)

    def __add__(self, o):
        if isinstance(o, Gaussian):
            return gaussian(self.re + o.re, self.im + o.im)
        return gaussian(self.re + o, self.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, o):
        if isinstance(o, Gaussian):
            return gaussian(self.re - o.re, self.im - o.im)
        return gaussian(self.re - o, self.im)

    def __rsub__(self, o):
        return gaussian(o - self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, Gaussian):
            return gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return gaussian(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Gaussian):
            n = o.re * o.re + o.im * o.im
            return gaussian((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)
        return gaussian(self.re / o, self.im / o)

    def __rtruediv__(self, o):
        n = self.re * self.re + self.im * self.im
        return gaussian(o * self.re / n, -o * self.im / n)

    def __eq__(self, o):
        if isinstance(o, Gaussian):
            return self.re == o.re and self.im == o.im
        try:
            return self.im == 0 and self.re == o
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return gaussian(self.re, -self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        return coeff_str(self)


I = Gaussian(0, 1)


def gaussian(re, im=0):
    """Canonical scalar: mpq if the imaginary part vanishes."""
    if im == 0:
        return mpq(re)
    return Gaussian(re, im)


def coerce(c):
    """Convert int, Fraction, mpq, rational strings or Gaussian to a canonical scalar."""
    if isinstance(c, Gaussian):
        return c._norm()
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, (int, Fraction)) or type(c).__name__ == "mpq" or type(c).__name__ == "mpz":
        return mpq(c)
    if isinstance(c, str):
        return mpq(Fraction(c.strip()))
    if isinstance(c, complex):
        raise TypeError("floating-point complex coefficients are not allowed")
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed")
    raise TypeError(f"unsupported coefficient {c!r}")


def conj(c):
    return c.conjugate() if isinstance(c, Gaussian) else c


def real_part(c):
    return c.re if isinstance(c, Gaussian) else c


def to_fraction(c):
    """Rational scalar as a Fraction (raises on a nonzero imaginary part)."""
    if isinstance(c, Gaussian):
        raise ValueError("expected a rational value")
    return Fraction(int(c.numerator), int(c.denominator))


def _rat_str(q):
    q = mpq(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def coeff_str(c):
    if not isinstance(c, Gaussian):
        return _rat_str(c)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_rat_str(c.im)}*i" if c.im.denominator == 1 else f"({_rat_str(c.im)})*i"
    sign = "+" if c.im > 0 else "-"
    im = abs(c.im)
    return f"({_rat_str(c.re)}{sign}{'' if im == 1 else _rat_str(im) + '*'}i)"


def default_names(d):
    return [f"d{k}" for k in range(d)]


def monomial_str(exps, names):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


class Polynomial:
    """Sparse polynomial in nvars commuting symbols d0..d{nvars-1}.

    terms maps exponent tuples to nonzero scalars.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None, _trusted=False):
        self.nvars = nvars
        self._hash = None
        if _trusted:
            self.terms = terms
            return
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} has wrong length for d={nvars}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = coerce(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {}, _trusted=True)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars):
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars, k):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): mpq(1)}, _trusted=True)

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def min_degree(self):
        if not self.terms:
            return NEG_INF
        return min(sum(e) for e in self.terms)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_part(self, k):
        return Polynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k}, _trusted=True)

    def top_form(self):
        if not self.terms:
            raise ValueError("top_form of the zero polynomial")
        return self.homogeneous_part(self.degree)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, mpq(0))

    def _check(self, o):
        if not isinstance(o, Polynomial):
            return Polynomial.constant(self.nvars, o)
        if o.nvars != self.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {o.nvars}")
        return o

    def __add__(self, o):
        o = self._check(o)
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Polynomial(self.nvars, t, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, o):
        return self + (-self._check(o))

    def __rsub__(self, o):
        return self._check(o) - self

    def scale(self, c):
        c = coerce(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, o):
        if not isinstance(o, Polynomial):
            return self.scale(o)
        o = self._check(o)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Polynomial(self.nvars, t, _trusted=True)

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, k):
        r = Polynomial.one(self.nvars)
        for _ in range(k):
            r = r * self
        return r

    def mul_monomial(self, exps, c=1):
        return Polynomial(
            self.nvars,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self.terms.items()},
            _trusted=True,
        )

    def hermitian_conjugate(self):
        """Conjugate the coefficients and send every d_k to -d_k."""
        return Polynomial(
            self.nvars,
            {e: (conj(c) if sum(e) % 2 == 0 else -conj(c)) for e, c in self.terms.items()},
            _trusted=True,
        )

    def __eq__(self, o):
        if isinstance(o, Polynomial):
            return self.nvars == o.nvars and self.terms == o.terms
        try:
            c = coerce(o)
        except TypeError:
            return NotImplemented
        return self == Polynomial.constant(self.nvars, c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        """Terms in decreasing degrevlex order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in reversed(t[0]))), reverse=True)

    def to_str(self, names=None):
        names = names or default_names(self.nvars)
        if not self.terms:
            return "0"
        out = []
        for exps, c in self.sorted_terms():
            mono = monomial_str(exps, names)
            neg = (not isinstance(c, Gaussian)) and c < 0
            a = -c if neg else c
            if not mono:
                body = coeff_str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{coeff_str(a)}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def poly_arith(p, q, op):
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def top_form(p):
    return p.top_form()


def hermitian_conjugate_poly(p):
    return p.hermitian_conjugate()


class LaurentPolynomial:
    """Finite sum of c_k z^k, k in Z, rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for k, c in (terms or {}).items():
            c = coerce(c)
            if isinstance(c, Gaussian):
                raise ValueError("Laurent polynomials carry rational coefficients only")
            if c:
                t[int(k)] = t.get(int(k), 0) + c
                if not t[int(k)]:
                    del t[int(k)]
        self.terms = t

    @classmethod
    def from_exponents(cls, exps, sign=1):
        t = {}
        for e in exps:
            t[e] = t.get(e, 0) + sign
        return cls(t)

    @classmethod
    def one_minus_z_power(cls, n):
        """(1 - z)^n for n >= 0."""
        return cls({k: (-1) ** k * comb(n, k) for k in range(n + 1)})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, o):
        t = dict(self.terms)
        for k, c in o.terms.items():
            t[k] = t.get(k, 0) + c
        return LaurentPolynomial(t)

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, LaurentPolynomial):
            return LaurentPolynomial({k: c * coerce(o) for k, c in self.terms.items()})
        t = {}
        for a, x in self.terms.items():
            for b, y in o.terms.items():
                t[a + b] = t.get(a + b, 0) + x * y
        return LaurentPolynomial(t)

    __rmul__ = __mul__

    def __eq__(self, o):
        if isinstance(o, LaurentPolynomial):
            return self.terms == o.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def shift(self, n):
        return LaurentPolynomial({k + n: c for k, c in self.terms.items()})

    def min_exponent(self):
        return min(self.terms) if self.terms else 0

    def max_exponent(self):
        return max(self.terms) if self.terms else 0

    def coefficient(self, k):
        return self.terms.get(k, mpq(0))

    def __call__(self, z):
        z = coerce(z)
        return sum((c * z**k for k, c in self.terms.items()), mpq(0))

    def derivative(self):
        return LaurentPolynomial({k - 1: k * c for k, c in self.terms.items() if k})

    def value_and_derivative_at_one(self):
        val = sum(self.terms.values(), mpq(0))
        der = sum((k * c for k, c in self.terms.items()), mpq(0))
        return val, der

    def divide_one_minus_z(self):
        """Exact quotient by (1 - z); requires self(1) == 0."""
        if not self.terms:
            return self
        if self.value_and_derivative_at_one()[0] != 0:
            raise ValueError("not divisible by (1 - z)")
        lo, hi = self.min_exponent(), self.max_exponent()
        q, acc = {}, mpq(0)
        for k in range(lo, hi):
            acc += self.terms.get(k, 0)
            q[k] = acc
        return LaurentPolynomial(q)

    def to_str(self, var="z"):
        if not self.terms:
            return "0"
        out = []
        for k in sorted(self.terms):
            c = self.terms[k]
            neg = c < 0
            a = -c if neg else c
            if k == 0:
                body = _rat_str(a)
            else:
                zp = var if k == 1 else f"{var}^{k}"
                body = zp if a == 1 else f"{_rat_str(a)}*{zp}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPolynomial({self.to_str()!r})"


def laurent_eval_and_derivative(Q, at="one"):
    if at not in ("one", 1):
        raise ValueError("only evaluation at z = 1 is supported")
    return Q.value_and_derivative_at_one()


class RationalSeries:
    """numerator / (1 - z)^pole_order."""

    __slots__ = ("numerator", "pole_order")

    def __init__(self, numerator, pole_order):
        if pole_order < 0:
            raise ValueError("pole order must be nonnegative")
        self.numerator = numerator
        self.pole_order = pole_order

    def __eq__(self, o):
        if not isinstance(o, RationalSeries):
            return NotImplemented
        a, b = self.reduced(), o.reduced()
        return a.numerator == b.numerator and a.pole_order == b.pole_order

    def __hash__(self):
        r = self.reduced()
        return hash((r.numerator, r.pole_order))

    def reduced(self):
        return series_reduce(self.numerator, self.pole_order)

    def with_pole_order(self, d):
        """Same series written over (1 - z)^d, d >= pole_order."""
        return self.numerator * LaurentPolynomial.one_minus_z_power(d - self.pole_order)

    def __add__(self, o):
        d = max(self.pole_order, o.pole_order)
        return series_reduce(self.with_pole_order(d) + o.with_pole_order(d), d)

    def __sub__(self, o):
        d = max(self.pole_order, o.pole_order)
        return series_reduce(self.with_pole_order(d) - o.with_pole_order(d), d)

    def coefficient(self, N):
        """Coefficient of z^N (the Hilbert function at N)."""
        D = self.pole_order
        if D == 0:
            return self.numerator.coefficient(N)
        total = mpq(0)
        for k, c in self.numerator.terms.items():
            if N - k >= 0:
                total += c * comb(N - k + D - 1, D - 1)
        return total

    def polynomial_coefficient(self, N):
        """Value at N of the Hilbert polynomial (valid for every N)."""
        D = self.pole_order
        if D == 0:
            return mpq(0)
        total = mpq(0)
        for k, c in self.numerator.terms.items():
            total += c * _binom_poly(N - k + D - 1, D - 1)
        return total

    def stabilization_threshold(self):
        """Smallest N0 with coefficient(N) == polynomial value for all N >= N0."""
        if not self.numerator.terms:
            return 0
        return max(0, self.numerator.max_exponent() - self.pole_order + 1)

    def __str__(self):
        return f"({self.numerator}) / (1 - z)^{self.pole_order}"

    def __repr__(self):
        return f"RationalSeries({self})"


def _binom_poly(x, k):
    """C(x, k) as a polynomial in x (valid for negative x too)."""
    num = mpq(1)
    for j in range(k):
        num *= x - j
    den = 1
    for j in range(1, k + 1):
        den *= j
    return num / den


def series_reduce(numerator, d):
    """Cancel (1 - z) factors in numerator / (1 - z)^d."""
    D = d
    p = numerator
    while D > 0 and p.terms and p.value_and_derivative_at_one()[0] == 0:
        p = p.divide_one_minus_z()
        D -= 1
    if not p.terms:
        D = 0
    return RationalSeries(p, D)
