"""The .dofsys system-description language and its JSON twin.

    # Maxwell in potential form
    dimension 4
    variables t, x, y, z          # optional, default d0..d3
    parameter m = 1
    field A0, A1, A2, A3 order 0  # order is optional
    equation T0: (x^2 + y^2 + z^2)*A0 + t*x*A1 + t*y*A2 + t*z*A3

Expressions are sums of products of numbers (3, 3/2, 2i, 3/2i), the unit i, parameters,
derivative symbols and at most one field per product.  '^' takes a
nonnegative integer exponent and applies to anything without a field.
A trailing backslash continues a statement on the next line.
"""

import json
import re
from fractions import Fraction

from ..errors import InvalidSystem, ParseError
from ..ring import I, Gaussian, Polynomial, coerce, default_names
from ..system import DiffSystem, FieldDecl

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<cont>\\[ \t\r]*\n)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<imag>\d+i(?![A-Za-z_0-9]))|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),:=\[\]])"
)

KEYWORDS = {"dimension", "variables", "parameter", "field", "equation", "order"}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.line}:{self.col}"


def _tokenize(text):
    toks = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        col = pos - start + 1
        if kind in ("nl", "cont"):
            if kind == "nl":
                toks.append(_Tok("nl", "\n", line, col))
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(_Tok("nl", "\n", line, pos - start + 1))
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


def _statements(toks):
    cur = []
    for t in toks:
        if t.kind in ("nl", "eof"):
            if cur:
                yield cur + [_Tok("end", "", t.line, t.col)]
            cur = []
        else:
            cur.append(t)


class _Lin:
    """Value of a subexpression: an operator (field=None) or an operator applied to one field per entry."""

    __slots__ = ("op", "forms")

    def __init__(self, op=None, forms=None):
        self.op = op  # Polynomial or None
        self.forms = forms or {}  # field index -> Polynomial

    @property
    def has_field(self):
        return bool(self.forms)


class _ExprParser:
    def __init__(self, toks, d, varmap, params, fieldmap):
        self.toks = toks
        self.i = 0
        self.d = d
        self.varmap = varmap
        self.params = params
        self.fieldmap = fieldmap

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, t=None):
        t = t or self.peek()
        raise ParseError(msg, t.line, t.col)

    def zero(self):
        return Polynomial.zero(self.d)

    def add(self, a, b, sign):
        if a.has_field != b.has_field and (a.op or b.op):
            self.error("cannot add a term without a field to a term with a field")
        if a.has_field or b.has_field:
            forms = dict(a.forms)
            for k, p in b.forms.items():
                q = forms.get(k, self.zero()) + (p if sign > 0 else -p)
                forms[k] = q
            return _Lin(None, forms)
        return _Lin(a.op + (b.op if sign > 0 else -b.op))

    def mul(self, a, b, tok):
        if a.has_field and b.has_field:
            raise InvalidSystem(f"nonlinear term: product of two fields (line {tok.line}, column {tok.col})")
        if a.has_field:
            a, b = b, a
        if b.has_field:
            return _Lin(None, {k: a.op * p for k, p in b.forms.items()})
        return _Lin(a.op * b.op)

    def expr(self):
        t = self.peek()
        sign = 1
        if t.text in "+-" and t.kind == "op":
            self.next()
            sign = -1 if t.text == "-" else 1
        first = self.term()
        val = first if sign > 0 else self.neg(first)
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next()
            if self.peek().kind in ("end",) or (self.peek().kind == "op" and self.peek().text in ")+-*^/"):
                self.error(f"dangling operator {op.text!r}", op)
            val = self.add(val, self.term(), 1 if op.text == "+" else -1)
        return val

    def neg(self, v):
        if v.has_field:
            return _Lin(None, {k: -p for k, p in v.forms.items()})
        return _Lin(-v.op)

    def term(self):
        val = self.power()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next()
            if self.peek().kind == "end" or (self.peek().kind == "op" and self.peek().text in ")*/^"):
                self.error(f"dangling operator {op.text!r}", op)
            if op.text == "*":
                val = self.mul(val, self.power(), op)
            elif self.peek().kind == "imag":
                # 3/2i reads as (3/2)*i
                t = self.next()
                c = Fraction(1, int(t.text[:-1])) * I
                val = self.mul(val, _Lin(Polynomial.constant(self.d, c)), op)
            else:
                den = self.power()
                if den.has_field or not den.op or den.op.degree != 0:
                    self.error("division only by a nonzero number", op)
                c = 1 / den.op.constant_term()
                val = self.mul(val, _Lin(Polynomial.constant(self.d, c)), op)
        return val

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.next()
            t = self.next()
            neg = False
            if t.kind == "op" and t.text == "-":
                neg = True
                t = self.next()
            if t.kind != "num":
                self.error("exponent must be an integer", t)
            if base.has_field:
                self.error("cannot raise a field to a power", op)
            if neg:
                self.error("negative exponents are not allowed", t)
            base = _Lin(base.op ** int(t.text))
        return base

    def atom(self):
        t = self.next()
        d = self.d
        if t.kind == "num":
            return _Lin(Polynomial.constant(d, int(t.text)))
        if t.kind == "imag":
            return _Lin(Polynomial.constant(d, int(t.text[:-1]) * I))
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            c = self.next()
            if c.text != ")":
                self.error("expected ')'", c)
            return v
        if t.kind == "name":
            if t.text in self.fieldmap:
                return _Lin(None, {self.fieldmap[t.text]: Polynomial.one(d)})
            if t.text in self.varmap:
                return _Lin(Polynomial.var(d, self.varmap[t.text]))
            if t.text in self.params:
                return _Lin(Polynomial.constant(d, self.params[t.text]))
            if t.text == "i":
                return _Lin(Polynomial.constant(d, I))
            self.error(f"unknown identifier {t.text!r}", t)
        if t.kind == "end":
            self.error("unexpected end of expression", t)
        self.error(f"unexpected {t.text!r}", t)


def _expect(toks, i, text=None, kind=None):
    t = toks[i]
    if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
        want = repr(text) if text else kind
        raise ParseError(f"expected {want}, found {t.text or 'end of line'!r}", t.line, t.col)
    return t


def _int_at(toks, i):
    sign = 1
    if toks[i].kind == "op" and toks[i].text in "+-":
        sign = -1 if toks[i].text == "-" else 1
        i += 1
    t = _expect(toks, i, kind="num")
    return sign * int(t.text), i + 1


def _rational_at(toks, i):
    sign = 1
    if toks[i].kind == "op" and toks[i].text in "+-":
        sign = -1 if toks[i].text == "-" else 1
        i += 1
    t = _expect(toks, i, kind="num")
    val = Fraction(int(t.text))
    i += 1
    if toks[i].kind == "op" and toks[i].text == "/":
        den = _expect(toks, i + 1, kind="num")
        if int(den.text) == 0:
            raise ParseError("division by zero", den.line, den.col)
        val /= int(den.text)
        i += 2
    return sign * val, i


def _names_at(toks, i):
    names = []
    while True:
        t = _expect(toks, i, kind="name")
        names.append(t)
        i += 1
        if toks[i].kind == "op" and toks[i].text == ",":
            i += 1
            continue
        return names, i


def parse_dsl(text, allow_zero_rows=False):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    d = None
    varnames = None
    params = {}
    fields = []
    equations = []  # (name, order, tokens)
    for st in _statements(_tokenize(text)):
        head = st[0]
        if head.kind != "name" or head.text not in KEYWORDS - {"order"}:
            raise ParseError(f"unknown statement {head.text!r}", head.line, head.col)
        kw = head.text
        if kw == "dimension":
            val, j = _int_at(st, 1)
            _expect(st, j, kind="end")
            if val < 1:
                raise ParseError("dimension must be positive", st[1].line, st[1].col)
            d = val
        elif kw == "variables":
            names, j = _names_at(st, 1)
            _expect(st, j, kind="end")
            varnames = names
        elif kw == "parameter":
            name = _expect(st, 1, kind="name")
            if st[2].kind == "end":
                raise InvalidSystem(f"parameter {name.text!r} needs a nonzero rational value (symbolic parameters are not supported)")
            _expect(st, 2, text="=")
            val, j = _rational_at(st, 3)
            _expect(st, j, kind="end")
            if val == 0:
                raise InvalidSystem(f"parameter {name.text!r} must be nonzero")
            params[name.text] = val
        elif kw == "field":
            names, j = _names_at(st, 1)
            order = 0
            if st[j].kind == "name" and st[j].text == "order":
                order, j = _int_at(st, j + 1)
            _expect(st, j, kind="end")
            for t in names:
                fields.append((t, order))
        elif kw == "equation":
            name = _expect(st, 1, kind="name")
            j = 2
            order = None
            if st[j].kind == "name" and st[j].text == "order":
                order, j = _int_at(st, j + 1)
            _expect(st, j, text=":")
            equations.append((name, order, st[j + 1:]))
    if d is None:
        raise ParseError("missing 'dimension' statement", 1, 1)
    vnames = [t.text for t in varnames] if varnames else default_names(d)
    if len(vnames) != d:
        t = varnames[0]
        raise ParseError(f"{len(vnames)} variable names for dimension {d}", t.line, t.col)
    varmap = {n: k for k, n in enumerate(default_names(d))}
    varmap.update({n: k for k, n in enumerate(vnames)})
    seen = set()
    for t, _ in fields:
        if t.text in seen:
            raise ParseError(f"duplicate field {t.text!r}", t.line, t.col)
        if t.text in varmap or t.text in params or t.text == "i" or t.text in KEYWORDS:
            raise ParseError(f"field name {t.text!r} clashes with another identifier", t.line, t.col)
        seen.add(t.text)
    if not fields:
        raise InvalidSystem("no fields declared")
    if not equations:
        raise InvalidSystem("no equations declared")
    fieldmap = {t.text: k for k, (t, _) in enumerate(fields)}
    matrix, enames, orders = [], [], []
    for name, order, toks in equations:
        p = _ExprParser(toks, d, varmap, params, fieldmap)
        if toks[0].kind == "end":
            raise ParseError("empty equation", toks[0].line, toks[0].col)
        val = p.expr()
        if p.peek().kind != "end":
            p.error(f"unexpected {p.peek().text!r}")
        if not val.has_field:
            if val.op:
                raise ParseError(f"equation {name.text!r} has a term without a field", name.line, name.col)
        row = [val.forms.get(k, Polynomial.zero(d)) for k in range(len(fields))]
        matrix.append(row)
        enames.append(name.text)
        orders.append(order)
    explicit = None
    if any(o is not None for o in orders):
        if not all(o is not None for o in orders):
            raise InvalidSystem("give an order for every equation or for none")
        explicit = orders
    return DiffSystem(
        d,
        [FieldDecl(t.text, o) for t, o in fields],
        matrix,
        equation_names=enames,
        parameters=params,
        equation_orders=explicit,
        allow_zero_rows=allow_zero_rows,
        variable_names=vnames,
    )


def _term_list(p, d):
    return [{"coeff": _coeff_json(c), "exponents": list(e)} for e, c in sorted(p.terms.items())]


def parse_json_system(text, allow_zero_rows=False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        d = int(doc["dimension"])
        params = {k: Fraction(str(v)) for k, v in (doc.get("parameters") or {}).items()}
        flds = []
        for f in doc["fields"]:
            if isinstance(f, str):
                flds.append(FieldDecl(f, 0))
            else:
                flds.append(FieldDecl(f["name"], int(f.get("order", 0))))
        names = doc.get("variables") or default_names(d)
        lines = [f"dimension {d}", "variables " + ", ".join(names)]
        for k, v in params.items():
            lines.append(f"parameter {k} = {v}")
        orders = [e.get("order") for e in doc["equations"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed system document: {exc}") from None
    if any(v == 0 for v in params.values()):
        raise InvalidSystem("parameters must be nonzero")
    fieldmap = {f.name: k for k, f in enumerate(flds)}
    matrix, enames = [], []
    for a, e in enumerate(doc["equations"]):
        enames.append(e.get("name", f"E{a}"))
        if "expr" in e:
            src = "\n".join(lines + [f"field {', '.join(f.name for f in flds)}", f"equation {enames[a]}: {e['expr']}"])
            sub = parse_dsl(src, allow_zero_rows=True)
            matrix.append(list(sub.matrix[0]))
        else:
            row = [Polynomial.zero(d) for _ in flds]
            for t in e.get("terms", []):
                if t["field"] not in fieldmap:
                    raise ParseError(f"unknown field {t['field']!r}")
                c = _parse_coeff(t.get("coeff", "1"))
                row[fieldmap[t["field"]]] = row[fieldmap[t["field"]]] + Polynomial(d, {tuple(t["exponents"]): c})
            matrix.append(row)
    explicit = orders if all(o is not None for o in orders) else None
    return DiffSystem(d, flds, matrix, equation_names=enames, parameters=params, equation_orders=explicit,
                      allow_zero_rows=allow_zero_rows, variable_names=names)


def _parse_coeff(c):
    """A JSON coefficient: a rational string/int or {"re": ..., "im": ...}."""
    try:
        if isinstance(c, dict):
            return coerce(Gaussian(Fraction(str(c.get("re", 0))), Fraction(str(c.get("im", 0)))))
        return coerce(Fraction(str(c)))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coefficient {c!r}") from None


def _coeff_json(c):
    if isinstance(c, Gaussian):
        return {"re": str(Fraction(int(c.re.numerator), int(c.re.denominator))),
                "im": str(Fraction(int(c.im.numerator), int(c.im.denominator)))}
    return str(Fraction(int(c.numerator), int(c.denominator)))


def parse_system(text, format="dsl", allow_zero_rows=False):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 (byte {exc.start})") from None
    if format == "json":
        return parse_json_system(text, allow_zero_rows=allow_zero_rows)
    if format == "dsl":
        return parse_dsl(text, allow_zero_rows=allow_zero_rows)
    raise ValueError(f"unknown format {format!r}")


def _poly_expr(p, names):
    s = p.to_str(names)
    return s if len(p.terms) == 1 and not s.startswith("-") and "+" not in s and " " not in s else f"({s})"


def emit_system(sys):
    """Canonical .dofsys text for a system (parameters already substituted)."""
    names = list(sys.variable_names)
    out = [f"dimension {sys.dimension}"]
    if names != default_names(sys.dimension):
        out.append("variables " + ", ".join(names))
    for k, v in sys.parameters.items():
        out.append(f"parameter {k} = {Fraction(v)}")
    if all(f.order == 0 for f in sys.fields):
        out.append("field " + ", ".join(f.name for f in sys.fields))
    else:
        for f in sys.fields:
            out.append(f"field {f.name} order {f.order}")
    orders = sys.equation_orders()
    for a, row in enumerate(sys.matrix):
        parts = []
        for p, f in zip(row, sys.fields):
            if not p:
                continue
            if p == 1:
                parts.append(f.name)
            elif p == -1:
                parts.append(f"-{f.name}")
            elif len(p.terms) == 1 and p.to_str(names).startswith("-"):
                parts.append(f"-{_poly_expr(-p, names)}*{f.name}")
            else:
                parts.append(f"{_poly_expr(p, names)}*{f.name}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0*" + sys.fields[0].name
        head = f"equation {sys.equation_names[a]}"
        if sys.explicit_orders:
            head += f" order {orders[a]}"
        out.append(f"{head}: {body}")
    return "\n".join(out) + "\n"


def emit_json_system(sys):
    doc = {
        "dimension": sys.dimension,
        "variables": list(sys.variable_names),
        "parameters": {k: str(Fraction(v)) for k, v in sys.parameters.items()},
        "fields": [{"name": f.name, "order": f.order} for f in sys.fields],
        "equations": [],
    }
    orders = sys.equation_orders()
    for a, row in enumerate(sys.matrix):
        terms = []
        for p, f in zip(row, sys.fields):
            for t in _term_list(p, sys.dimension):
                terms.append({"field": f.name, **t})
        e = {"name": sys.equation_names[a], "terms": terms}
        if sys.explicit_orders:
            e["order"] = orders[a]
        doc["equations"].append(e)
    return json.dumps(doc, indent=2) + "\n"
