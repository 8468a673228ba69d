"""TPTP THF0 input, the ``$modal`` logic header, SZS lines and TSTP output.

Connectives are desugared while parsing: only ``$not``, ``$or``, ``$pi``,
``$eq`` and ``$choice`` heads survive.  Terms are rendered back in plain
THF so that every emitted line can be read by :func:`parse_problem`.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Any, Mapping

from .problem import AnnotatedFormula, LogicSpec, Problem, SZSStatus
from .terms import (FALSE, NOT, OR, TRUE, App, Bound, Const, Lam, Term, TermError,
                    Var, beta_eta_normalize, choice, eq, head_args, mk_and, mk_app,
                    mk_eq, mk_imp, mk_not, mk_or, pi, shift)
from .types import I, O, BaseType, FunType, TypeExpr


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"{msg} (line {line}, column {col})" if line else msg)


BOX = Const("$box", FunType(O, O))
DIA = Const("$dia", FunType(O, O))

# ---------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*|/\*.*?\*/)
  | (?P<punct><~>|<=>|=>|<=|~\||~&|!=|!!|\?\?|@\+|@-|:=|[()\[\],.:!?^@~|&=>*+])
  | (?P<dollar>\$\$?[a-zA-Z_][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>[-+]?[0-9]+(?:\.[0-9]+)?)
""", re.VERBOSE | re.DOTALL)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Token(kind, s, line, pos - lstart + 1, pos, m.end()))
        nl = s.count("\n")
        if nl:
            line += nl
            lstart = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1, pos, pos))
    return out


# ---------------------------------------------------------------------------
# parser

_POLY = ("!!", "??", "=")
_BINOPS = ("|", "&", "=>", "<=", "<=>", "<~>", "~|", "~&")


class _Poly:
    """A logical constant whose type is fixed by its first argument."""

    def __init__(self, op: str):
        self.op = op


class Parser:
    def __init__(self, text: str, signature: dict | None = None, base_types: list | None = None,
                 free: Mapping[str, Var] | None = None, modal: bool = False):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.signature: dict[str, TypeExpr] = signature if signature is not None else {}
        self.base_types: list[str] = base_types if base_types is not None else []
        self.free = dict(free or {})
        self.modal = modal
        self.env: list[tuple[str, TypeExpr]] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("punct", "dollar", "lower"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r} but found {self.tok.text or 'end of input'!r}")
        return self.next()

    # types
    def parse_type(self) -> TypeExpr:
        left = self.parse_type_atom()
        if self.accept(">"):
            return FunType(left, self.parse_type())
        return left

    def parse_type_atom(self) -> TypeExpr:
        t = self.tok
        if self.accept("("):
            ty = self.parse_type()
            self.expect(")")
            return ty
        if t.text == "$i":
            self.next()
            return I
        if t.text == "$o":
            self.next()
            return O
        if t.kind in ("lower", "quoted") and _unquote(t.text) in self.base_types:
            self.next()
            return BaseType(_unquote(t.text))
        if t.kind == "dollar":
            self.error(f"unsupported type {t.text}")
        self.error(f"unknown type {t.text!r}")

    # formulas
    def parse_formula(self) -> Term:
        left = self.parse_eqlevel()
        op = self.tok.text if self.tok.kind == "punct" else None
        if op not in _BINOPS:
            return left
        if op in ("|", "&"):
            parts = [left]
            while self.tok.text == op:
                self.next()
                parts.append(self.parse_eqlevel())
            if self.tok.text in _BINOPS:
                self.error("mixed binary connectives need parentheses")
            for p in parts:
                self._want_o(p)
            out = parts[0]
            for p in parts[1:]:
                out = mk_or(out, p) if op == "|" else mk_and(out, p)
            return out
        optok = self.next()
        right = self.parse_eqlevel()
        if self.tok.text in _BINOPS:
            self.error("non-associative connective needs parentheses")
        self._want_o(left, optok)
        self._want_o(right, optok)
        return _binop(op, left, right)

    def _want_o(self, t, tok=None):
        if isinstance(t, _Poly):
            self.error(f"cannot infer the type of {t.op}", tok)
        if t.ty != O:
            self.error(f"expected a formula but found a term of type {t.ty}", tok)

    def parse_eqlevel(self):
        left = self.parse_unary()
        if self.tok.text in ("=", "!=") and self.tok.kind == "punct":
            optok = self.next()
            right = self.parse_unary()
            if isinstance(left, _Poly) or isinstance(right, _Poly):
                self.error("cannot infer the type of an equation side", optok)
            if left.ty != right.ty:
                self.error(f"equation between types {left.ty} and {right.ty}", optok)
            e = mk_eq(left, right)
            return e if optok.text == "=" else mk_not(e)
        return left

    def parse_unary(self):
        t = self.tok
        if t.kind == "punct" and t.text == "~" and self.peek().text != ")":
            self.next()
            body = self.parse_unary()
            self._want_o(body, t)
            return mk_not(body)
        if t.kind == "punct" and t.text in ("!", "?", "^", "@+") and self.peek().text == "[":
            return self.parse_binder()
        return self.parse_apply()

    def parse_binder(self) -> Term:
        q = self.next().text
        self.expect("[")
        vs = []
        while True:
            vt = self.tok
            if vt.kind != "upper":
                self.error("expected a variable name")
            self.next()
            ty = I
            if self.accept(":"):
                ty = self.parse_type()
            vs.append((vt.text, ty))
            if not self.accept(","):
                break
        self.expect("]")
        self.expect(":")
        self.env.extend(vs)
        try:
            body = self.parse_unary()
        finally:
            del self.env[len(self.env) - len(vs):]
        if isinstance(body, _Poly):
            self.error(f"cannot infer the type of {body.op}")
        if q in ("!", "?") and body.ty != O:
            self.error("quantified body must be a formula")
        for _, ty in reversed(vs):
            if q == "^":
                body = Lam(ty, body)
            elif q == "!":
                body = App(pi(ty), (Lam(ty, body),))
            elif q == "?":
                body = mk_not(App(pi(ty), (Lam(ty, mk_not(body)),)))
            else:
                if body.ty != O:
                    self.error("choice body must be a formula")
                body = App(choice(ty), (Lam(ty, body),))
        return body

    def parse_apply(self):
        head = self.parse_atom()
        args = []
        while self.tok.text == "@" and self.tok.kind == "punct":
            optok = self.next()
            arg = self.parse_atom()
            if isinstance(arg, _Poly):
                self.error(f"cannot infer the type of {arg.op}", optok)
            if isinstance(head, _Poly):
                head = self._resolve_poly(head, arg, optok)
            args.append(arg)
            try:
                App(head, tuple(args))
            except TermError as e:
                self.error(str(e), optok)
        if isinstance(head, _Poly):
            return head
        return App(head, tuple(args)) if args else head

    def _resolve_poly(self, p: _Poly, arg: Term, tok) -> Term:
        if p.op == "=":
            return eq(arg.ty)
        ty = arg.ty
        if not (isinstance(ty, FunType) and ty.res == O):
            self.error(f"{p.op} needs a predicate argument", tok)
        if p.op == "!!":
            return pi(ty.arg)
        # ?? as a lambda over its predicate argument
        inner = Lam(ty.arg, mk_not(App(Bound(1, ty), (Bound(0, ty.arg),))))
        return Lam(ty, mk_not(App(pi(ty.arg), (inner,))))

    def parse_atom(self):
        t = self.tok
        if t.kind == "punct" and t.text == "(":
            nxt, after = self.peek(), self.peek(2)
            if nxt.kind == "punct" and after.text == ")" and nxt.text in ("~", "|", "&", "=", "=>"):
                self.i += 3
                return _connective_term(nxt.text)
            self.next()
            f = self.parse_formula()
            self.expect(")")
            return f
        if t.kind == "punct" and t.text in ("!!", "??"):
            self.next()
            return _Poly(t.text)
        if t.kind == "dollar":
            self.next()
            if t.text == "$true":
                return TRUE
            if t.text == "$false":
                return FALSE
            if t.text in ("$box", "$dia"):
                if not self.modal:
                    self.error(f"{t.text} used without a $modal logic header", t)
                return BOX if t.text == "$box" else DIA
            self.error(f"unsupported defined symbol {t.text}", t)
        if t.kind == "upper":
            self.next()
            for k in range(len(self.env) - 1, -1, -1):
                if self.env[k][0] == t.text:
                    return Bound(len(self.env) - 1 - k, self.env[k][1])
            if t.text in self.free:
                return self.free[t.text]
            self.error(f"unbound variable {t.text}", t)
        if t.kind in ("lower", "quoted"):
            self.next()
            name = _unquote(t.text)
            if name not in self.signature:
                self.error(f"unknown symbol {name!r}", t)
            return Const(name, self.signature[name])
        self.error(f"unexpected token {t.text or 'end of input'!r}", t)

    # annotations: general terms, $thf(...) kept as source text
    def parse_general(self):
        t = self.tok
        if self.accept("["):
            items = []
            if not self.accept("]"):
                items.append(self.parse_general())
                while self.accept(","):
                    items.append(self.parse_general())
                self.expect("]")
            return ("list", items)
        if t.kind == "dollar" and t.text in ("$thf", "$fof", "$cnf", "$tff") and self.peek().text == "(":
            self.next()
            open_tok = self.next()
            depth = 1
            while depth:
                tk = self.next()
                if tk.kind == "eof":
                    self.error("unterminated $thf(...)")
                if tk.text == "(":
                    depth += 1
                elif tk.text == ")":
                    depth -= 1
            return ("thf", self.text[open_tok.end:self.toks[self.i - 1].start])
        if t.kind in ("lower", "quoted", "dollar", "upper", "number", "string"):
            self.next()
            name = _unquote(t.text) if t.kind == "quoted" else t.text
            args = []
            if self.tok.text == "(":
                self.next()
                args.append(self.parse_general())
                while self.accept(","):
                    args.append(self.parse_general())
                self.expect(")")
            out = ("fn", name, args)
            if self.accept(":"):
                return ("colon", out, self.parse_general())
            return out
        self.error(f"unexpected token in annotation {t.text!r}")


def _unquote(s: str) -> str:
    if len(s) >= 2 and s[0] == "'" and s[-1] == "'":
        return s[1:-1].replace("\\'", "'").replace("\\\\", "\\")
    return s


def _binop(op: str, a: Term, b: Term) -> Term:
    if op == "=>":
        return mk_imp(a, b)
    if op == "<=":
        return mk_imp(b, a)
    if op == "<=>":
        return mk_eq(a, b)
    if op == "<~>":
        return mk_not(mk_eq(a, b))
    if op == "~|":
        return mk_not(mk_or(a, b))
    if op == "~&":
        return mk_not(mk_and(a, b))
    raise AssertionError(op)


def _connective_term(op: str):
    if op == "~":
        return NOT
    if op == "|":
        return OR
    if op == "=":
        return _Poly("=")
    x, y = Bound(1, O), Bound(0, O)
    body = mk_and(x, y) if op == "&" else mk_imp(x, y)
    return Lam(O, Lam(O, body))


# ---------------------------------------------------------------------------
# problems

_ROLES = ("axiom", "hypothesis", "definition", "assumption", "lemma", "theorem",
          "conjecture", "negated_conjecture", "plain", "type", "logic")


def parse_problem(text: str, name: str = "problem", base_dir: str | None = None,
                  _problem: Problem | None = None, _seen: set | None = None) -> Problem:
    """Parse THF0 text into a :class:`Problem`.  Raises ParseError."""
    prob = _problem or Problem(name=name)
    seen = _seen if _seen is not None else set()
    p = Parser(text, prob.signature, prob.base_types)
    p.modal = _has_logic_header(p.toks) or prob.logic is not None
    names = {f.name for f in prob.formulas}
    while p.tok.kind != "eof":
        t = p.tok
        if t.kind == "lower" and t.text == "include":
            p.next()
            p.expect("(")
            ft = p.next()
            p.expect(")")
            p.expect(".")
            path = _unquote(ft.text)
            full = os.path.join(base_dir or ".", path)
            if full in seen:
                continue
            seen.add(full)
            try:
                with open(full, encoding="utf-8") as fh:
                    sub = fh.read()
            except OSError as e:
                raise ParseError(f"cannot include {path}: {e.strerror}", t.line, t.col)
            parse_problem(sub, name, os.path.dirname(full), prob, seen)
            p.modal = p.modal or prob.logic is not None
            continue
        if t.kind == "lower" and t.text in ("fof", "cnf", "tff", "tcf"):
            p.error(f"only THF input is supported, found {t.text}")
        if t.text != "thf":
            p.error(f"expected thf(...) but found {t.text!r}")
        p.next()
        p.expect("(")
        nt = p.next()
        if nt.kind not in ("lower", "quoted", "number", "upper"):
            p.error("expected a formula name", nt)
        fname = _unquote(nt.text)
        if fname in names:
            p.error(f"duplicate formula name {fname!r}", nt)
        names.add(fname)
        p.expect(",")
        rt = p.next()
        role = rt.text
        if role not in _ROLES:
            p.error(f"unsupported role {role!r}", rt)
        p.expect(",")
        start = p.tok.start
        if role == "type":
            payload = _parse_type_decl(p, prob)
        elif role == "logic":
            payload = _parse_logic(p)
            if prob.logic is not None:
                p.error("more than one logic header", rt)
            prob.logic = payload
        else:
            f = p.parse_formula()
            if isinstance(f, _Poly):
                p.error(f"cannot infer the type of {f.op}")
            if f.ty != O:
                p.error(f"formula {fname} is not of type $o", nt)
            if f.has_vars:
                p.error(f"formula {fname} has free variables", nt)
            payload = beta_eta_normalize(f)
            if role == "conjecture" and prob.conjecture is not None:
                p.error("more than one conjecture", rt)
        end = p.toks[p.i - 1].end
        annotations = None
        if p.accept(","):
            annotations = [p.parse_general()]
            while p.accept(","):
                annotations.append(p.parse_general())
        p.expect(")")
        p.expect(".")
        prob.formulas.append(AnnotatedFormula(fname, role, payload, annotations, text[start:end]))
    if _problem is None:
        for f in prob.formulas:
            if f.role not in ("type", "logic") and _mentions_modal(f.formula):
                prob.modal_ops = True
    return prob


def _has_logic_header(toks: list[Token]) -> bool:
    for k in range(len(toks) - 4):
        if toks[k].text == "thf" and toks[k + 1].text == "(" and toks[k + 3].text == "," \
                and toks[k + 4].text == "logic":
            return True
    return False


def _mentions_modal(t: Term) -> bool:
    if isinstance(t, Const):
        return t.name in ("$box", "$dia")
    if isinstance(t, Lam):
        return _mentions_modal(t.body)
    if isinstance(t, App):
        return _mentions_modal(t.head) or any(_mentions_modal(a) for a in t.args)
    return False


def _parse_type_decl(p: Parser, prob: Problem):
    depth = 0
    while p.accept("("):
        depth += 1
    nt = p.next()
    if nt.kind not in ("lower", "quoted"):
        p.error("expected a symbol in type declaration", nt)
    sym = _unquote(nt.text)
    p.expect(":")
    if p.tok.text == "$tType":
        p.next()
        if sym in prob.base_types:
            p.error(f"type {sym!r} declared twice", nt)
        prob.base_types.append(sym)
        payload = (sym, "$tType")
    else:
        ty = p.parse_type()
        if sym in prob.signature and prob.signature[sym] != ty:
            p.error(f"symbol {sym!r} redeclared with a different type", nt)
        prob.signature[sym] = ty
        payload = (sym, ty)
    for _ in range(depth):
        p.expect(")")
    return payload


_LOGIC_KEYS = ("$constants", "$quantification", "$consequence", "$modalities")


def _parse_logic(p: Parser) -> LogicSpec:
    depth = 0
    while p.accept("("):
        depth += 1
    kt = p.next()
    if kt.text != "$modal":
        p.error(f"unsupported logic {kt.text!r}; only $modal is available", kt)
    p.expect(":=")
    p.expect("[")
    entries = {}
    while True:
        key = p.next()
        if key.text not in _LOGIC_KEYS:
            p.error(f"unknown logic parameter {key.text!r}", key)
        if key.text in entries:
            p.error(f"logic parameter {key.text} given twice", key)
        p.expect(":=")
        val = p.next()
        if val.kind != "dollar":
            p.error(f"unsupported value {val.text!r} for {key.text}", val)
        entries[key.text] = (val.text, val)
        if not p.accept(","):
            break
    p.expect("]")
    for _ in range(depth):
        p.expect(")")
    return _logic_from_entries(entries, p)


def _logic_from_entries(entries: dict, p: Parser | None = None) -> LogicSpec:
    def fail(msg, tok=None):
        if p is not None:
            p.error(msg, tok)
        raise ParseError(msg)

    if "$modalities" not in entries:
        fail("logic header lacks $modalities")
    sysv, tok = entries["$modalities"]
    m = re.fullmatch(r"\$modal_system_(K|D|T|S4|S5)", sysv)
    if not m:
        fail(f"unsupported modal system {sysv}", tok)
    kw = {"system": m.group(1)}
    if "$constants" in entries:
        v, tok = entries["$constants"]
        if v != "$rigid":
            fail(f"unsupported constants semantics {v}; only $rigid is available", tok)
    if "$quantification" in entries:
        v, tok = entries["$quantification"]
        if v not in ("$constant", "$cumulative", "$varying"):
            fail(f"unsupported quantification {v}", tok)
        kw["quantification"] = v[1:]
    if "$consequence" in entries:
        v, tok = entries["$consequence"]
        if v not in ("$global", "$local"):
            fail(f"unsupported consequence {v}", tok)
        kw["consequence"] = v[1:]
    return LogicSpec(**kw)


def parse_logic_spec(payload: str) -> LogicSpec:
    """Parse a logic payload such as ``$modal := [...]`` (the part after
    the role in a ``logic`` formula)."""
    p = Parser(payload)
    spec = _parse_logic(p)
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.text!r}")
    return spec


def parse_file(path: str) -> Problem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, os.path.basename(path), os.path.dirname(os.path.abspath(path)))


# ---------------------------------------------------------------------------
# rendering

def render_type(ty: TypeExpr, nested: bool = False) -> str:
    if isinstance(ty, BaseType):
        return ty.name
    s = f"{render_type(ty.arg, True)} > {render_type(ty.res)}"
    return f"({s})" if nested else s


_LOWER = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def render_name(name: str) -> str:
    if _LOWER.match(name) or name.startswith("$"):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def var_name(v: Var) -> str:
    return f"V{v.id}"


def render_term(t: Term, depth: int = 0) -> str:
    """THF text of ``t``.  Bound variables are named by binder depth."""
    if isinstance(t, Const):
        if t == TRUE:
            return "$true"
        if t.name in ("$not", "$or", "$pi", "$eq", "$choice"):
            return render_term(_eta_long_logical(t), depth)
        return render_name(t.name)
    if isinstance(t, Var):
        return var_name(t)
    if isinstance(t, Bound):
        return f"X{depth - 1 - t.index}"
    if isinstance(t, Lam):
        return f"(^ [X{depth}:{render_type(t.binder)}]: {render_term(t.body, depth + 1)})"
    h, args = t.head, t.args
    if isinstance(h, Const) and h.name in ("$not", "$or", "$pi", "$eq", "$choice"):
        need = 2 if h.name in ("$or", "$eq") else 1
        if len(args) < need:
            return render_term(_eta_long_logical(h, args), depth)
        if len(args) > need:
            inner = App(h, args[:need])
            return "(" + " @ ".join([render_term(inner, depth)] + [render_term(a, depth) for a in args[need:]]) + ")"
        if h == NOT:
            if args[0] == TRUE:
                return "$false"
            return f"(~ {render_term(args[0], depth)})"
        if h == OR:
            return f"({render_term(args[0], depth)} | {render_term(args[1], depth)})"
        if h.name == "$eq":
            return f"({render_term(args[0], depth)} = {render_term(args[1], depth)})"
        body = args[0]
        q = "!" if h.name == "$pi" else "@+"
        ty = h.ty.arg.arg if h.name == "$pi" else h.ty.res
        if isinstance(body, Lam):
            return f"({q} [X{depth}:{render_type(ty)}]: {render_term(body.body, depth + 1)})"
        app = App(shift(body, 1), (Bound(0, ty),))
        return f"({q} [X{depth}:{render_type(ty)}]: {render_term(app, depth + 1)})"
    return "(" + " @ ".join([render_term(h, depth)] + [render_term(a, depth) for a in args]) + ")"


def _eta_long_logical(h: Const, args=()) -> Term:
    from .types import split_type
    tys, _ = split_type(h.ty)
    need = 2 if h.name in ("$or", "$eq") else 1
    missing = tys[len(args):need]
    k = len(missing)
    shifted = [shift(a, k) for a in args]
    bvs = [Bound(k - 1 - i, ty) for i, ty in enumerate(missing)]
    body: Term = App(h, tuple(shifted) + tuple(bvs))
    for ty in reversed(missing):
        body = Lam(ty, body)
    return body


def render_formula_line(name: str, role: str, formula: str, annotation: str | None = None) -> str:
    if annotation:
        return f"thf({render_name(name)}, {role}, {formula}, {annotation})."
    return f"thf({render_name(name)}, {role}, {formula})."


def render_szs(status: SZSStatus | str, problem_name: str) -> str:
    return f"% SZS status {status} for {problem_name}"


def render_literal(l) -> str:
    def side(t: Term) -> str:
        return render_term(t)

    if l.is_boolean and l.left != TRUE:
        h = head_args(l.left)[0]
        if not (isinstance(h, Const) and h.name.startswith("$") and h.name not in ("$box", "$dia")):
            return side(l.left) if l.pol else f"(~ {side(l.left)})"
    op = "=" if l.pol else "!="
    return f"({side(l.left)} {op} {side(l.right)})"


def render_clause(c) -> str:
    if not c.lits:
        return "$false"
    body = " | ".join(render_literal(l) for l in c.lits)
    vs = list(c.free_vars().values())
    vs.sort(key=lambda v: v.id)
    if vs:
        decl = ",".join(f"{var_name(v)}:{render_type(v.ty)}" for v in vs)
        return f"(! [{decl}]: ({body}))"
    return f"({body})"


def render_tstp(d) -> str:
    """TSTP refutation text of a derivation (see ``derivation.Derivation``)."""
    if not d.steps:
        raise ValueError("cannot render an empty derivation")
    lines = [f"% SZS output start Refutation for {d.problem_name}"]
    if d.logic is not None:
        lines.append(f"% modal logic: {d.logic.header()}")
    for tname in d.base_types:
        lines.append(render_formula_line(f"ty_{tname}", "type", f"{render_name(tname)}: $tType"))
    for sym, ty in d.signature.items():
        lines.append(render_formula_line(f"ty_{sym}", "type", f"{render_name(sym)}: {render_type(ty)}"))
    for s in d.steps:
        lines.append(render_step(s))
    lines.append(f"% SZS output end Refutation for {d.problem_name}")
    return "\n".join(lines) + "\n"


def render_step(s) -> str:
    formula = render_clause(s.clause) if s.clause is not None else render_term(s.formula)
    if s.rule is None:
        return render_formula_line(s.name, s.role, formula)
    info = ["status(thm)"]
    if s.clause is not None:
        info.append("kind(clause)")
    sigma = s.info.get("subst")
    if sigma is not None and len(sigma):
        vs: dict[int, Var] = {}
        for v, t in sigma.items():
            vs.setdefault(v.id, v)
            from .terms import free_vars
            for k, w in free_vars(t).items():
                vs.setdefault(k, w)
        decl = ",".join(f"{var_name(v)}:{render_type(v.ty)}" for v in sorted(vs.values(), key=lambda v: v.id))
        info.append(f"vars($thf(! [{decl}]: $true))")
        for v, t in sorted(sigma.items(), key=lambda p: p[0].id):
            info.append(f"bind({var_name(v)}, $thf({render_term(t)}))")
    if "mode" in s.info:
        info.append(f"mode({s.info['mode']})")
    parents = ",".join(render_name(p) for p in s.parents)
    ann = f"inference({s.rule}, [{', '.join(info)}], [{parents}])"
    return render_formula_line(s.name, s.role, formula, ann)
