"""BRST generator table, Poincare series and Euler characteristics built from the two-sided complex.

A term of the two-sided complex at homological index i carries ghost number -i:
fields (F_0^V) have ghost number 0, antifields (F_1^V) -1, identity antifields
of stage k (F_{k+2}^V) -(k+2), and ghosts of stage k ((F_{k+2}^W)*) k+1.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError


@dataclass(frozen=True)
class BrstGenerator:
    name: str
    ghost_number: int
    order: int

    @property
    def parity(self):
        return self.ghost_number % 2

    @property
    def index(self):
        return -self.ghost_number


def min_shift(cx):
    """Smallest uniform shift c that makes every order positive."""
    degs = [j for (_, j) in cx.betti.entries]
    return 1 - min(degs) if degs else 1


def _names(cx, i, count):
    sys = cx.system
    if i == 0 and sys is not None and count == sys.m:
        return list(sys.field_names)
    if i == 1 and sys is not None and count == sys.n:
        return [f"{e}*" for e in sys.equation_names]
    if i >= 2:
        return [f"L{i - 2}_{n}*" for n in range(count)]
    if i <= -1:
        return [f"C{-i - 1}_{n}" for n in range(count)]
    return [f"x{i}_{n}" for n in range(count)]


def brst_generators(cx, shift):
    """One generator per Betti-table unit; orders are Betti degrees plus the shift."""
    by_index = {}
    for (i, j), b in sorted(cx.betti.entries.items()):
        by_index.setdefault(i, []).extend([j] * b)
    gens = []
    for i in sorted(by_index):
        degs = by_index[i]
        for name, j in zip(_names(cx, i, len(degs)), degs):
            if j + shift <= 0:
                raise ValueError(f"shift {shift} too small: order {j + shift} for {name}")
            gens.append(BrstGenerator(name, -i, j + shift))
    return gens


class EulerCharacteristic:
    """prod_j (1 - z^j)^factors[j], all j > 0."""

    def __init__(self, factors):
        f = {}
        for j, e in factors.items():
            if j <= 0:
                raise ValueError("Euler characteristic factors need positive orders")
            if e:
                f[int(j)] = int(e)
        self.factors = f

    def __eq__(self, o):
        return isinstance(o, EulerCharacteristic) and self.factors == o.factors

    def __hash__(self):
        return hash(frozenset(self.factors.items()))

    def __call__(self, z):
        z = Fraction(z)
        v = Fraction(1)
        for j, e in self.factors.items():
            v *= (1 - z**j) ** e
        return v

    def log_derivative_times_z(self, z):
        """z * (ln chi)'(z), evaluated exactly."""
        z = Fraction(z)
        return sum((e * (-j * z**j) / (1 - z**j) for j, e in self.factors.items()), Fraction(0))

    def to_string(self):
        return factored_string(self.factors)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"EulerCharacteristic({self.to_string()!r})"


def _factor(j):
    return "(1-z)" if j == 1 else f"(1-z^{j})"


def factored_string(factors):
    if not factors:
        return "1"
    items = sorted(factors.items(), key=lambda t: (t[1] < 0, t[0]))
    return " ".join(_factor(j) + ("" if e == 1 else f"^{e}") for j, e in items)


_FACTOR = re.compile(r"\(1-z(?:\^(\d+))?\)(?:\^(-?\d+))?")


def parse_factored(s):
    """Inverse of factored_string (ordering-insensitive)."""
    s = s.strip()
    if s == "1":
        return {}
    out = {}
    pos = 0
    for m in _FACTOR.finditer(s):
        if s[pos:m.start()].strip():
            raise ValueError(f"cannot parse factored form {s!r}")
        pos = m.end()
        j = int(m.group(1) or 1)
        e = int(m.group(2) or 1)
        out[j] = out.get(j, 0) + e
    if s[pos:].strip():
        raise ValueError(f"cannot parse factored form {s!r}")
    return {j: e for j, e in out.items() if e}


def euler_characteristic(gens, positive_labels=False):
    """e_j = sum_i (-1)^(i+1) b_ij with i the homological index.

    positive_labels uses |ghost number| as the index instead; the result is the
    same because only the parity enters.
    """
    f = {}
    for g in gens:
        if g.order <= 0:
            raise ValueError(f"nonpositive order for {g.name}")
        i = abs(g.ghost_number) if positive_labels else g.index
        f[g.order] = f.get(g.order, 0) + (-1) ** (i + 1)
    return EulerCharacteristic(f)


class PoincareSeries:
    """prod over (i, j) of (1 - (-1)^i t^i z^j)^((-1)^(i+1) b_ij)."""

    def __init__(self, counts):
        self.counts = {k: v for k, v in counts.items() if v}

    def exponents(self):
        return {(i, j): (-1) ** (i + 1) * b for (i, j), b in self.counts.items()}

    def at_t_minus_one(self):
        f = {}
        for (i, j), e in self.exponents().items():
            f[j] = f.get(j, 0) + e
        return EulerCharacteristic(f)

    def __call__(self, t, z):
        t, z = Fraction(t), Fraction(z)
        v = Fraction(1)
        for (i, j), e in self.exponents().items():
            v *= (1 - (-1) ** i * t**i * z**j) ** e
        return v

    def to_string(self):
        if not self.counts:
            return "1"
        parts = []
        items = sorted(self.exponents().items(), key=lambda t: (t[1] < 0, t[0][1], t[0][0]))
        for (i, j), e in items:
            zp = "z" if j == 1 else f"z^{j}"
            if i == 0:
                base = f"(1-{zp})"
            else:
                sign = "+" if i % 2 else "-"
                tp = "t" if i == 1 else f"t^{i}"
                base = f"(1{sign}{tp}*{zp})"
            parts.append(base + ("" if e == 1 else f"^{e}"))
        return " ".join(parts)

    def __str__(self):
        return self.to_string()


def poincare_series(gens):
    counts = {}
    for g in gens:
        if g.order <= 0:
            raise ValueError(f"nonpositive order for {g.name}")
        counts[(g.index, g.order)] = counts.get((g.index, g.order), 0) + 1
    return PoincareSeries(counts)


@dataclass(frozen=True)
class FactoredRational:
    """sign * z^zpow * prod_j (1 - z^j)^factors[j] with j > 0."""

    sign: int
    zpow: int
    factors: tuple

    def factor_dict(self):
        return dict(self.factors)

    def residue_log_derivative_at_zero(self):
        return self.zpow

    def limit_z_log_derivative_at_infinity(self):
        return self.zpow + sum(j * e for j, e in self.factors)

    def __call__(self, z):
        z = Fraction(z)
        v = Fraction(self.sign) * z**self.zpow
        for j, e in self.factors:
            v *= (1 - z**j) ** e
        return v

    def to_string(self):
        head = "-" if self.sign < 0 else ""
        zp = "" if self.zpow == 0 else ("z" if self.zpow == 1 else f"z^{self.zpow}")
        body = factored_string(self.factor_dict())
        parts = [p for p in (zp, "" if body == "1" else body) if p]
        return head + (" ".join(parts) if parts else "1")


def dof_from_euler(chi):
    """lim_{z -> oo} z (ln chi)'(z) = sum_j j e_j."""
    return sum(j * e for j, e in chi.factors.items())


def dual_euler(chi, d):
    """chi_B(z) = (1 - z)^(-d) chi_C(1/z), in factored form."""
    f = dict(chi.factors)
    f[1] = f.get(1, 0) - d
    sign = (-1) ** (sum(chi.factors.values()) % 2)
    zpow = -sum(j * e for j, e in chi.factors.items())
    return FactoredRational(sign, zpow, tuple(sorted((j, e) for j, e in f.items() if e)))


def dof_from_dual(chiB):
    """Minus the residue at 0 of the logarithmic derivative of chi_B."""
    return -chiB.residue_log_derivative_at_zero()


def dof_via_brst(cx, shift=None):
    c = min_shift(cx) if shift is None else shift
    gens = brst_generators(cx, c)
    chi = euler_characteristic(gens)
    if chi != euler_characteristic(gens, positive_labels=True):
        raise InternalError("Euler characteristic depends on the ghost sign convention")
    n = dof_from_euler(chi)
    d = cx.v_part.terms[0].nvars
    if dof_from_dual(dual_euler(chi, d)) != n:
        raise InternalError("residue at 0 and residue at infinity disagree")
    return n
