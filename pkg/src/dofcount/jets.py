"""Einstein's jet count: exact ranks of truncated Taylor-coefficient systems.

Coordinates are the derivative values u_{i,alpha} = d^alpha phi_i(0).  Applying
d^beta to an equation shifts every alpha by beta, so prolongations are plain
index shifts.  Nothing here uses Groebner bases.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from gmpy2 import mpq

_B = 128  # digit base for column keys


class _ColumnCode:
    """Integer column keys ordered by (shifted degree, lex exponents with d0 first, -field)."""

    def __init__(self, d, theta):
        self.d = d
        self.theta = list(theta)
        self.off = -min(self.theta + [0])
        self.W = [_B**k for k in range(d + 2)]

    def encode(self, i, exps):
        d, W = self.d, self.W
        key = (sum(exps) + self.theta[i] + self.off) * W[d + 1]
        for k in range(d):
            key += exps[k] * W[d - k]
        return key + (_B - 1 - i)

    def delta(self, beta):
        d, W = self.d, self.W
        return sum(beta) * W[d + 1] + sum(beta[k] * W[d - k] for k in range(d))

    def degree(self, key):
        return key // self.W[self.d + 1] - self.off


def _monomials(d, deg):
    """All exponent tuples of total degree deg."""
    if d == 1:
        yield (deg,)
        return
    for a in range(deg, -1, -1):
        for rest in _monomials(d - 1, deg - a):
            yield (a,) + rest


def _monomials_upto(d, deg):
    for k in range(deg + 1):
        yield from _monomials(d, k)


class Echelon:
    """Incremental row echelon form over Q(i) with sparse dict rows (top reduction)."""

    def __init__(self):
        self.pivots = {}

    @property
    def rank(self):
        return len(self.pivots)

    def add(self, row):
        piv = self.pivots
        while row:
            c = max(row)
            p = piv.get(c)
            if p is None:
                inv = 1 / row[c]
                piv[c] = {k: v * inv for k, v in row.items()}
                return True
            f = row[c]
            for k, v in p.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return False


def exact_rank(rows):
    """Rank of a list of sparse rows (dicts column -> scalar)."""
    E = Echelon()
    for r in rows:
        E.add(dict(r))
    return E.rank


def coordinate_count(d, theta, N):
    return sum(comb(N - t + d, d) for t in theta if N - t >= 0)


def _encoded_rows(sys, code):
    out = []
    k = sys.equation_orders()
    for a, row in enumerate(sys.matrix):
        enc = {}
        for i, p in enumerate(row):
            for e, c in p.terms.items():
                enc[code.encode(i, e)] = c
        if enc:
            out.append((k[a], enc))
    return out


def solution_dims(sys, Nmax):
    """Cumulative jet-solution dimensions for N = 0..Nmax (prolongations up to level N)."""
    d = sys.dimension
    code = _ColumnCode(d, sys.theta)
    rows = _encoded_rows(sys, code)
    E = Echelon()
    out = []
    lo = min([ka for ka, _ in rows] + [0])
    for N in range(lo, Nmax + 1):
        for ka, enc in rows:
            s = N - ka
            if s < 0:
                continue
            for beta in _monomials(d, s):
                dl = code.delta(beta)
                E.add({key + dl: c for key, c in enc.items()})
        if N >= 0:
            out.append(coordinate_count(d, sys.theta, N) - E.rank)
    return out


def jet_solution_dim(sys, N, extra=0):
    """dim of N-jets of formal solutions.

    extra > 0 also uses prolongations up to level N + extra and keeps only their
    consequences of degree <= N (needed for systems that are not weakly involutive).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if extra == 0:
        return solution_dims(sys, N)[-1]
    d = sys.dimension
    code = _ColumnCode(d, sys.theta)
    rows = _encoded_rows(sys, code)
    M = N + extra
    full, proj = Echelon(), Echelon()
    for ka, enc in rows:
        for s in range(0, M - ka + 1):
            for beta in _monomials(d, s):
                dl = code.delta(beta)
                r = {key + dl: c for key, c in enc.items()}
                hi = {key: c for key, c in r.items() if code.degree(key) > N}
                full.add(r)
                if hi:
                    proj.add(hi)
    in_FN = full.rank - proj.rank
    return coordinate_count(d, sys.theta, N) - in_FN


def gauge_dims(sys, Nmax, R=None):
    """Cumulative dimensions of N-jets of pure-gauge solutions phi = R(d) eps, N = 0..Nmax."""
    from .dof import gauge_generators

    if R is None:
        R = gauge_generators(sys)
    d = sys.dimension
    code = _ColumnCode(d, [0] * sys.m)
    if not R:
        return [0] * (Nmax + 1)
    # column j of R acts on eps_j; entries R[j][i] are polynomials
    gens = []
    for v in R:
        enc = {}
        for i, p in v.components.items():
            for e, c in p.terms.items():
                enc[(i, e)] = c
        gens.append(enc)
    rmax = max(sum(e) for enc in gens for (_, e) in enc)
    out = []
    for N in range(Nmax + 1):
        E = Echelon()
        for enc in gens:
            for delta in _monomials_upto(d, N + rmax):
                row = {}
                for (i, g), c in enc.items():
                    alpha = tuple(x - y for x, y in zip(delta, g))
                    if min(alpha) < 0 or sum(alpha) > N:
                        continue
                    row[code.encode(i, alpha)] = c
                if row:
                    E.add(row)
        out.append(E.rank)
    return out


def jet_gauge_dim(sys, N, R=None):
    return gauge_dims(sys, N, R)[-1]


def per_degree(cum):
    return [cum[0]] + [cum[k] - cum[k - 1] for k in range(1, len(cum))]


@dataclass
class JetCount:
    N: int
    h_sigma_cum: int
    h_trivial_cum: int
    h_sigma: list = field(default_factory=list)
    h_trivial: list = field(default_factory=list)
    h_u: list = field(default_factory=list)


def jet_count(sys, N, R=None):
    sol = solution_dims(sys, N)
    gau = gauge_dims(sys, N, R)
    hs, hg = per_degree(sol), per_degree(gau)
    return JetCount(N, sol[-1], gau[-1], hs, hg, [a - b for a, b in zip(hs, hg)])


def einstein_estimate(sys, N, counts=None):
    """N h_U(N) / ((d - 1) C(N + d - 1, N)) at finite N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    jc = counts or jet_count(sys, N)
    d = sys.dimension
    if d < 2:
        raise ValueError("the estimate needs d >= 2")
    return Fraction(N * jc.h_u[N], (d - 1) * comb(N + d - 1, N))

