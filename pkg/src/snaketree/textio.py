"""Problem files, JSON reports and DOT trees.

A problem file is line oriented; ``#`` starts a comment::

    field t: minpoly = t^2+t+1; conj = -1-t
    unit = 3
    real_root = -1*x^(1/2)
    real_root = x^(1/2)
    complex_root = t*x^(2/3); mult = 1

Fractional exponents must be parenthesised.  Both members of a conjugate
pair have to be listed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import FieldRequired, InputSyntaxError, NonPositiveValuation, NotRational, UnitVanishes, ValidationError
from .exact import QQ, NumberField, Rational
from .puiseux import INFINITY, BivarPoly, PuiseuxPoly
from .trees import ContactTree, RootSystem

__all__ = ["ProblemSpec", "parse_input", "format_problem", "root_names", "report_to_dict", "emit_report", "emit_dot"]

REPORT_FORMAT = "snaketree-report/1"


@dataclass
class ProblemSpec:
    field: NumberField | None
    unit: BivarPoly
    real_roots: list
    complex_roots: list
    options: dict = field(default_factory=dict)
    _rs: RootSystem | None = None

    @property
    def root_system(self) -> RootSystem:
        if self._rs is None:
            self._rs = RootSystem(self.real_roots, self.complex_roots)
        return self._rs


# --- expressions -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text, line, offset):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or not text[pos:].strip():
            break
        col = offset + m.start(m.lastindex) + 1
        if m.group(1):
            tokens.append(("int", m.group(1), col))
        elif m.group(2):
            tokens.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise InputSyntaxError(line, col, "an operator, number or name", ch)
            tokens.append((ch, ch, col))
        pos = m.end()
    tokens.append(("end", "", offset + len(text.rstrip()) + 1))
    return tokens


class _Expr:
    """Sparse polynomial: ``(x exponent, y exponent, generator exponent) -> Rational``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c):
        return cls({(Rational(0), 0, 0): Rational(c)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return _Expr(out)

    def __neg__(self):
        return _Expr({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for (a1, b1, c1), v1 in self.terms.items():
            for (a2, b2, c2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2, c1 + c2)
                out[k] = out.get(k, 0) + v1 * v2
        return _Expr(out)

    def constant_value(self):
        if not self.terms:
            return Rational(0)
        if list(self.terms) == [(Rational(0), 0, 0)]:
            return self.terms[Rational(0), 0, 0]
        return None


class _Parser:
    def __init__(self, text, line, offset, generator=None):
        self.tokens = _tokenize(text, line, offset)
        self.i = 0
        self.line = line
        self.generator = generator

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, expected):
        kind, text, col = self.tok
        raise InputSyntaxError(self.line, col, expected, text or "end of line")

    def take(self, kind):
        if self.tok[0] != kind:
            self.fail(repr(kind))
        t = self.tok
        self.i += 1
        return t

    def parse(self):
        e = self.expr()
        if self.tok[0] != "end":
            self.fail("'+', '-', '*' or end of expression")
        return e

    def expr(self):
        neg = False
        if self.tok[0] in "+-":
            neg = self.take(self.tok[0])[0] == "-"
        e = self.term()
        if neg:
            e = -e
        while self.tok[0] in ("+", "-"):
            op = self.take(self.tok[0])[0]
            t = self.term()
            e = e + (-t if op == "-" else t)
        return e

    def term(self):
        e = self.factor()
        while self.tok[0] in ("*", "/"):
            op = self.take(self.tok[0])[0]
            col = self.tok[2]
            f = self.factor()
            if op == "*":
                e = e * f
            else:
                c = f.constant_value()
                if not c:
                    raise InputSyntaxError(self.line, col, "a non-zero rational divisor")
                e = e * _Expr.const(1 / c)
        return e

    def factor(self):
        kind, text, col = self.tok
        if kind == "int":
            self.i += 1
            base = _Expr.const(int(text))
            var = None
        elif kind == "name":
            self.i += 1
            if text == "x":
                base, var = _Expr({(Rational(1), 0, 0): Rational(1)}), "x"
            elif text == "y":
                base, var = _Expr({(Rational(0), 1, 0): Rational(1)}), "y"
            elif self.generator is not None and text == self.generator:
                base, var = _Expr({(Rational(0), 0, 1): Rational(1)}), "gen"
            elif self.generator is None and text not in ("x", "y"):
                raise FieldRequired(f"line {self.line}, column {col}: {text!r} used without a field declaration")
            else:
                raise InputSyntaxError(self.line, col, f"x, y or {self.generator}", text)
        elif kind == "(":
            self.i += 1
            base = self.expr()
            self.take(")")
            var = None
        else:
            self.fail("a number, a variable or '('")
        if self.tok[0] != "^":
            return base
        self.i += 1
        exp_col = self.tok[2]
        k = self.exponent()
        if var == "x":
            return _Expr({(k, 0, 0): Rational(1)})
        if k.denominator != 1:
            raise InputSyntaxError(self.line, exp_col, "an integer exponent", str(k))
        out = _Expr.const(1)
        for _ in range(int(k)):
            out = out * base
        return out

    def exponent(self):
        if self.tok[0] == "int":
            return Rational(int(self.take("int")[1]))
        if self.tok[0] != "(":
            self.fail("an exponent such as 2 or (3/2)")
        self.take("(")
        col = self.tok[2]
        if self.tok[0] == "-":
            raise InputSyntaxError(self.line, col, "a non-negative exponent", "-")
        num = int(self.take("int")[1])
        den = 1
        if self.tok[0] == "/":
            self.take("/")
            den = int(self.take("int")[1])
            if den == 0:
                raise InputSyntaxError(self.line, col, "a non-zero denominator", "0")
        self.take(")")
        return Rational(num, den)


def _as_field_poly(e: _Expr, line, col):
    """Univariate polynomial in the generator, lowest degree first."""
    coeffs = {}
    for (a, b, c), v in e.terms.items():
        if a or b:
            raise InputSyntaxError(line, col, "a polynomial in the field generator only")
        coeffs[c] = v
    top = max(coeffs, default=0)
    return [coeffs.get(k, Rational(0)) for k in range(top + 1)]


def _as_puiseux(e: _Expr, fld, line, col, what):
    terms = []
    for (a, b, c), v in e.terms.items():
        if b:
            raise InputSyntaxError(line, col, f"{what} without y")
        if c and fld is None:
            raise FieldRequired(f"line {line}: field generator used without a field declaration")
        terms.append((a, (fld or QQ)([0] * c + [v])))
    return PuiseuxPoly(terms, fld or QQ)


# --- problem files -------------------------------------------------------------

_STATEMENT = re.compile(r"\s*(field|unit|real_root|complex_root)\b")
_FIELD = re.compile(r"\s*field\s+([A-Za-z_][A-Za-z_0-9]*)\s*:\s*minpoly\s*=\s*([^;]*);\s*conj\s*=\s*(.*)$")


def parse_input(text: str) -> ProblemSpec:
    """Parse and validate a problem file; see the module docstring."""
    fld = None
    generator = None
    unit = None
    reals, complexes = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _STATEMENT.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise InputSyntaxError(lineno, col, "field, unit, real_root or complex_root", line.strip())
        kind = m.group(1)
        if kind == "field":
            if fld is not None:
                raise InputSyntaxError(lineno, m.start(1) + 1, "a single field declaration")
            fm = _FIELD.match(line)
            if not fm:
                raise InputSyntaxError(lineno, m.end(1) + 1, "'<name>: minpoly = <poly>; conj = <poly>'")
            generator = fm.group(1)
            if generator in ("x", "y"):
                raise InputSyntaxError(lineno, fm.start(1) + 1, "a generator name other than x and y", generator)
            mp = _Parser(fm.group(2), lineno, fm.start(2), generator).parse()
            cj = _Parser(fm.group(3), lineno, fm.start(3), generator).parse()
            fld = NumberField(_as_field_poly(mp, lineno, fm.start(2) + 1),
                              _as_field_poly(cj, lineno, fm.start(3) + 1), name=generator)
            continue
        rest = line[m.end():]
        eq = re.match(r"\s*=", rest)
        if not eq:
            col = m.end() + len(rest) - len(rest.lstrip()) + 1
            raise InputSyntaxError(lineno, col, "'='", rest.strip()[:1])
        body_start = m.end() + eq.end()
        body = line[body_start:]
        mult = 1
        if kind == "complex_root" and ";" in body:
            body, tail = body.split(";", 1)
            mm = re.fullmatch(r"\s*mult\s*=\s*(\d+)\s*", tail)
            if not mm:
                raise InputSyntaxError(lineno, body_start + len(body) + 2, "'mult = <positive integer>'", tail.strip())
            mult = int(mm.group(1))
            if mult < 1:
                raise InputSyntaxError(lineno, body_start + len(body) + 2, "a positive multiplicity", mm.group(1))
        expr = _Parser(body, lineno, body_start, generator).parse()
        col = body_start + len(body) - len(body.lstrip()) + 1
        if kind == "unit":
            if unit is not None:
                raise InputSyntaxError(lineno, m.start(1) + 1, "a single unit declaration")
            unit = _as_unit(expr, lineno, col)
            continue
        poly = _as_puiseux(expr, fld, lineno, col, "a root")
        if not poly.val() > 0:
            raise NonPositiveValuation(f"line {lineno}: root {poly} has a constant term")
        if kind == "real_root":
            if not poly.is_real():
                raise NotRational(f"line {lineno}: real root {poly} has a non-rational coefficient")
            reals.append(poly.to_rational_field())
        else:
            complexes.append((poly, mult))
    if not reals:
        raise ValidationError("at least one real_root is required")
    spec = ProblemSpec(fld, unit if unit is not None else BivarPoly.constant(1), reals, complexes)
    spec.root_system  # validates closure, distinctness, valuations
    return spec


def _as_unit(e: _Expr, line, col) -> BivarPoly:
    terms = []
    for (a, b, c), v in e.terms.items():
        if c:
            raise NotRational(f"line {line}: the unit must have rational coefficients")
        terms.append((a, b, v))
    unit = BivarPoly.from_terms(terms)
    if unit.coeff(0).coefficient(0).is_zero():
        raise UnitVanishes(f"line {line}: the unit vanishes at the origin")
    return unit


def _fmt_rational(q: Rational) -> str:
    return str(q)


def _fmt_exponent(e: Rational) -> str:
    return f"x^{e}" if e.denominator == 1 else f"x^({e})"


def _fmt_field_elem(c) -> str:
    name = c.field.name
    parts = []
    for k, q in enumerate(c.coeffs):
        if q == 0:
            continue
        mono = "" if k == 0 else (f"{name}" if k == 1 else f"{name}^{k}")
        parts.append(f"({_fmt_rational(q)})*{mono}" if mono else f"({_fmt_rational(q)})")
    return "+".join(parts) if parts else "0"


def _fmt_root(p: PuiseuxPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.items():
        if c.is_rational():
            out.append(f"({_fmt_rational(c.coeffs[0])})*{_fmt_exponent(e)}")
        else:
            out.append(f"({_fmt_field_elem(c)})*{_fmt_exponent(e)}")
    return " + ".join(out)


def _fmt_unit(u: BivarPoly) -> str:
    out = []
    for e, q, c in u.terms():
        mono = [f"({_fmt_rational(c.rational_value())})"]
        if e:
            mono.append(_fmt_exponent(e))
        if q:
            mono.append(f"y^{q}")
        out.append("*".join(mono))
    return " + ".join(out) if out else "0"


def _fmt_poly_in(coeffs, name) -> str:
    parts = []
    for k, q in enumerate(coeffs):
        if q == 0:
            continue
        parts.append(f"({q})" if k == 0 else f"({q})*{name}^{k}")
    return " + ".join(parts) if parts else "0"


def format_problem(spec: ProblemSpec) -> str:
    """Canonical problem text; ``parse_input`` reads it back unchanged."""
    lines = []
    if spec.field is not None:
        f = spec.field
        lines.append(f"field {f.name}: minpoly = {_fmt_poly_in(f.minimal_polynomial, f.name)}; "
                     f"conj = {_fmt_poly_in(f.conjugation_image, f.name)}")
    if spec.unit != BivarPoly.constant(1):
        lines.append(f"unit = {_fmt_unit(spec.unit)}")
    for xi in spec.real_roots:
        lines.append(f"real_root = {_fmt_root(xi)}")
    for eta, m in spec.complex_roots:
        lines.append(f"complex_root = {_fmt_root(eta)}; mult = {m}")
    return "\n".join(lines) + "\n"


# --- reports -----------------------------------------------------------------

def root_names(rs: RootSystem) -> dict:
    """Leaf label to display name: ``xi_i`` for real, ``eta_l``/``eta_l_bar`` otherwise."""
    names = {i: f"xi_{i + 1}" for i in range(rs.n)}
    pair = 0
    for l in range(len(rs.complex_roots)):
        k = rs.conjugate_index(l)
        if k < l:
            names[rs.n + l] = names[rs.n + k] + "_bar"
        else:
            pair += 1
            names[rs.n + l] = f"eta_{pair}"
    return names


def _q(v) -> str:
    return "inf" if v == INFINITY else str(v)


def _series(p: PuiseuxPoly) -> list:
    out = []
    for e, c in p.items():
        coeff = str(c.coeffs[0]) if c.is_rational() else [str(q) for q in c.coeffs]
        out.append([str(e), coeff])
    return out


def _tree(tree: ContactTree, names=None, exponent=None) -> dict:
    names = names or {}
    d = {
        "parent": [p if p is not None else -1 for p in tree.parent],
        "E": [_q(e) for e in tree.exponent],
        "children": [list(c) for c in tree.children],
        "leaves": {str(v): names.get(lab, str(lab)) for v, lab in sorted(tree.leaf_label.items())},
        "multiplicity": {str(v): m for v, m in sorted(tree.multiplicity.items())},
    }
    if not all(tree.real_marker):
        d["real"] = list(tree.real_marker)
    if exponent is not None:
        d["sigma"] = [_q(exponent[v]) for v in range(len(tree))]
    return d


def report_to_dict(report) -> dict:
    rs = report.roots
    names = root_names(rs)
    out = {
        "format": REPORT_FORMAT,
        "field": None if rs.field.is_rational else {
            "minpoly": [str(q) for q in rs.field.minimal_polynomial],
            "conj": [str(q) for q in rs.field.conjugation_image],
        },
        "unit": [[str(e), q, str(c.coeffs[0])] for e, q, c in report.unit.terms()],
        "real_roots": [_series(xi) for xi in rs.real_roots],
        "complex_roots": [{"name": names[rs.n + l], "terms": _series(eta), "multiplicity": m}
                          for l, (eta, m) in enumerate(rs.complex_roots)],
        "primitive": [[str(e), q, str(c.coeffs[0])] for e, q, c in report.F.terms()],
        "trees": {
            "real": _tree(report.real_tree, names, report.sigma),
            "complex": _tree(report.complex_tree, names),
            "integrated": None if report.integrated is None else _tree(report.integrated, names, report.sigma),
            "discriminant": None if report.discriminant is None else _tree(report.discriminant, names),
        },
        "area_series": [{"r": a.index, "sigma": str(a.sigma), "s": str(a.initial_coeff),
                         "wedge_vertex": a.wedge_vertex, "series": _series(a.series)}
                        for a in report.areas],
        "sigma": [str(a.sigma) for a in report.areas],
        "s": [str(a.initial_coeff) for a in report.areas],
        "integration_tables": [{"vertex": t.vertex, "E": _q(report.real_tree.exponent[t.vertex]),
                                "edges": list(t.edges), "iota": list(t.iota),
                                "partial_sums": [str(v) for v in t.partial_sums]}
                               for t in report.tables.values()],
        "injectivity": _verdict(report.injectivity),
        "signs": {
            "determinate": [[i, j, s] for (i, j), s in sorted(report.determinate_signs.items())],
            "indeterminate": [list(p) for p in report.indeterminate_pairs],
        },
        "snake": None if report.snake is None else report.snake.as_list(),
        "integrated_order": None if report.integrated is None else [i + 1 for i in report.integrated.leaf_order()],
        "discriminant_roots": None if report.discriminant_roots is None
        else [_series(d) for d in report.discriminant_roots],
        "discriminant_match": report.discriminant_match,
    }
    if report.oracle is not None or report.oracle_error is not None:
        o = report.oracle
        out["oracle"] = {"error": report.oracle_error} if o is None else {
            "snake": o.snake.as_list(),
            "x0": str(o.x0_used),
            "stabilization_count": o.stabilization_count,
            "samples": len(o.samples),
            "critical_values": [[str(p), str(v)] for p, v in o.critical_values],
            "agrees": report.oracle_agrees,
        }
    return out


def _verdict(v) -> dict:
    if v.passed:
        return {"pass": True}
    w = v.witness
    return {
        "pass": False,
        "vertex": w.vertex,
        "vertex_E": _q(w.exponent),
        "colliding": list(w.colliding),
        "zero_sum_range": list(w.zero_sum_range),
        "zero_sum_terms": list(w.zero_sum_terms),
        "witnesses": [{"vertex": x.vertex, "vertex_E": _q(x.exponent), "colliding": list(x.colliding),
                       "zero_sum_range": list(x.zero_sum_range), "zero_sum_terms": list(x.zero_sum_terms)}
                      for x in v.witnesses],
    }


def emit_report(report) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=True) + "\n"


def emit_dot(tree: ContactTree, names=None, exponent=None, graph_name="T") -> str:
    """DOT digraph; children in stored order, non-real parts dotted.

    ``exponent`` optionally replaces ``E`` in the labels of internal vertices
    (used to show ``sigma`` on the integrated tree).
    """
    names = names or {}
    exponent = exponent or {}
    ids = {}
    order = []
    stack = [0]
    while stack:
        v = stack.pop()
        ids[v] = f"v{len(order)}"
        order.append(v)
        stack.extend(reversed(tree.children[v]))
    lines = [f"digraph {graph_name} {{", "  node [shape=circle, fontsize=10];"]
    for v in order:
        if v == 0:
            label, extra = "O", ", shape=point"
        elif tree.is_leaf(v):
            lab = tree.leaf_label[v]
            label, extra = names.get(lab, str(lab)), ", shape=plaintext"
            if tree.multiplicity[v] > 1:
                label += f" (x{tree.multiplicity[v]})"
        else:
            e = exponent.get(v, tree.exponent[v])
            label, extra = _dot_power(e), ""
        style = "" if tree.real_marker[v] else ", style=dotted"
        lines.append(f'  {ids[v]} [label="{label}"{extra}{style}];')
    for v in order:
        for c in tree.children[v]:
            style = "" if tree.real_marker[c] else " [style=dotted]"
            lines.append(f"  {ids[v]} -> {ids[c]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_power(e) -> str:
    e = Rational(e)
    return f"x^{e}" if e.denominator == 1 else f"x^({e})"
