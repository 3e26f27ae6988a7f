"""Hilbert series, dimension, multiplicity and Q-polynomials of subquotients of free modules."""

from dataclasses import dataclass

from gmpy2 import mpq

from .freemod import GradedFreeModule, groebner
from .ring import NEG_INF, LaurentPolynomial, RationalSeries, series_reduce


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


def _poly_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _numerator(gens, memo):
    """K-polynomial N(I) with H_{P/I} = N(I) / (1 - z)^d, as a dict exponent -> int."""
    r = memo.get(gens)
    if r is not None:
        return r
    if not gens:
        r = {0: 1}
    elif any(sum(g) == 0 for g in gens):
        r = {}
    else:
        d = len(gens[0])
        counts = [sum(1 for g in gens if g[v]) for v in range(d)]
        v = max(range(d), key=lambda k: (counts[k], -k))
        if counts[v] <= 1:
            # pairwise coprime generators
            r = {0: 1}
            for g in gens:
                r = _poly_mul(r, {0: 1, sum(g): -1})
        else:
            e = min(g[v] for g in gens if g[v])
            p = tuple(e if k == v else 0 for k in range(d))
            plus = _minimalize(gens + (p,))
            colon = _minimalize(tuple(tuple(max(0, a - b) for a, b in zip(g, p)) for g in gens))
            r = dict(_numerator(plus, memo))
            for k, c in _numerator(colon, memo).items():
                r[k + e] = r.get(k + e, 0) + c
            r = {k: c for k, c in r.items() if c}
    memo[gens] = r
    return r


def monomial_quotient_numerator(leading_module, ambient):
    """Numerator over (1 - z)^d of the Hilbert series of ambient / <leading_module>."""
    d = ambient.nvars
    per_comp = {i: [] for i in range(ambient.rank)}
    for comp, exps in leading_module:
        per_comp[comp].append(tuple(exps))
    memo = {}
    total = LaurentPolynomial()
    for i, mons in per_comp.items():
        num = _numerator(_minimalize(tuple(mons)), memo) if mons else {0: 1}
        total = total + LaurentPolynomial(num).shift(ambient.generator_degrees[i])
    return total, d


def monomial_quotient_series(leading_module, ambient):
    num, d = monomial_quotient_numerator(leading_module, ambient)
    return series_reduce(num, d)


@dataclass(frozen=True)
class HilbertData:
    series: RationalSeries
    dimension: object  # int, or NEG_INF for the zero module
    multiplicity: int
    q_poly: LaurentPolynomial
    nvars: int

    @classmethod
    def from_series(cls, series, nvars):
        s = series.reduced()
        if s.numerator.is_zero():
            return cls(s, NEG_INF, 0, LaurentPolynomial(), nvars)
        D = s.pole_order
        e = s.numerator.value_and_derivative_at_one()[0]
        q = s.numerator * LaurentPolynomial.one_minus_z_power(nvars - D)
        return cls(s, D, int(e), q, nvars)

    @property
    def is_zero(self):
        return self.dimension == NEG_INF

    def hilbert_function(self, N):
        return int(self.series.coefficient(N))

    def hilbert_polynomial(self, N):
        return self.series.polynomial_coefficient(N)

    @property
    def stabilization_threshold(self):
        return self.series.stabilization_threshold()


def leading_series(gens, ambient):
    """Hilbert series of ambient / lt(span(gens)); gens=None means the whole ambient."""
    if gens is None:
        return RationalSeries(LaurentPolynomial(), 0), None
    G = groebner(list(gens), module=ambient)
    return monomial_quotient_series(G.leading_monomials(), ambient), G


def hilbert_data(numerator_gens, denominator_gens, ambient):
    """Hilbert data of span(numerator_gens) / span(denominator_gens).

    numerator_gens=None stands for the whole ambient module.  The series of the
    subquotient is H(ambient/denominator) - H(ambient/numerator).
    """
    den_series, den_gb = leading_series(denominator_gens, ambient)
    if numerator_gens is None:
        num_series = RationalSeries(LaurentPolynomial(), 0)
    else:
        num_series, num_gb = leading_series(numerator_gens, ambient)
        for v in denominator_gens:
            if not num_gb.contains(v):
                raise ValueError("denominator is not contained in the numerator")
    return HilbertData.from_series(den_series - num_series, ambient.nvars)


def module_data(gens, ambient):
    """Hilbert data of the quotient ambient / span(gens)."""
    return hilbert_data(None, gens, ambient)


def e_at(data, q):
    if data.is_zero:
        return 0
    if q < data.dimension:
        raise ValueError(f"module dimension {data.dimension} exceeds {q}")
    return data.multiplicity if data.dimension == q else 0


def q_derivative_multiplicity(data):
    if not data.is_zero and data.dimension >= data.nvars:
        raise ValueError("module has full dimension")
    return int(-data.q_poly.value_and_derivative_at_one()[1])


def free_module_series(ambient):
    return series_reduce(ambient.q_poly(), ambient.nvars)

