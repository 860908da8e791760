"""Reader and writer for ``.gspec`` requirement documents.

A document is a sequence of ``req ... end`` blocks. Header directives are
comment lines of the form ``#@ key = value``; the ``name`` key sets the
document name and every other key becomes metadata. Plain ``#`` comments run
to end of line. See docs/gspec-grammar.md for the full grammar.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .model import (
    Applicability,
    Category,
    Kind,
    Method,
    Params,
    Requirement,
    SignalBound,
    SpecificationDoc,
    VerificationMethod,
    validate_doc,
)
from .units import SYMBOLS, Quantity, UnitError, format_number

KEYWORDS = frozenset({
    "req", "end", "category", "kind", "signal", "in", "max", "min", "within",
    "for", "fraction", "window", "phase", "item", "method", "text",
})

CLAUSE_KEYWORDS = KEYWORDS - {"req", "end", "in", "max", "min", "within"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("spans are 1-based")


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    expected: tuple[str, ...] = ()

    def __str__(self) -> str:
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.span.line}:{self.span.column}: {self.message}{exp}"


class SpecSyntaxError(ValueError):
    """Raised by :func:`parse_spec`; carries every error found."""

    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class Token:
    kind: str  # WORD NUMBER STRING LBRACK RBRACK COMMA META EOF
    text: str
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, max(1, len(self.text)))

    def is_kw(self, kw: str) -> bool:
        return self.kind == "WORD" and self.text == kw


_TOKEN_RE = re.compile(r"""
    (?P<META>\#@[^\n]*)
  | (?P<COMMENT>\#[^\n]*)
  | (?P<NL>\n)
  | (?P<WS>[ \t\r\f\v]+)
  | (?P<STRING>"(?:[^"\\\n]|\\.)*")
  | (?P<PERM>1/m(?![A-Za-z0-9_]))
  | (?P<NUMBER>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?![A-Za-z0-9_.]))
  | (?P<WORD>[A-Za-z_%][A-Za-z0-9_./%-]*|%)
  | (?P<LBRACK>\[)
  | (?P<RBRACK>\])
  | (?P<COMMA>,)
""", re.VERBOSE)


def tokenize(text: str) -> tuple[list[Token], list[ParseError]]:
    tokens: list[Token] = []
    errors: list[ParseError] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            errors.append(ParseError(SourceSpan(line, col), f"unexpected character {text[pos]!r}"))
            pos += 1
            continue
        kind = m.lastgroup
        s = m.group()
        if kind == "NL":
            line += 1
            line_start = m.end()
        elif kind == "PERM":
            tokens.append(Token("WORD", s, line, col))
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, s, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens, errors


class _Abort(Exception):
    pass


class _Parser:
    def __init__(self, tokens: list[Token], errors: list[ParseError]):
        self.toks = tokens
        self.i = 0
        self.errors = errors
        self.name = ""
        self.metadata: list[tuple[str, str]] = []
        self.reqs: list[tuple[Requirement, Token]] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def fail(self, msg: str, expected=(), tok: Optional[Token] = None):
        tok = tok or self.tok
        self.errors.append(ParseError(tok.span, msg, tuple(expected)))
        raise _Abort

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            got = self.tok.text or "end of input"
            self.fail(f"expected {what}, got {got!r}", (what,))
        return self.advance()

    def expect_kw(self, kw: str) -> Token:
        if not self.tok.is_kw(kw):
            got = self.tok.text or "end of input"
            self.fail(f"expected '{kw}', got {got!r}", (kw,))
        return self.advance()

    def word(self, what: str) -> Token:
        t = self.tok
        if t.kind != "WORD" or t.text in KEYWORDS:
            got = t.text or "end of input"
            self.fail(f"expected {what}, got {got!r}", (what,))
        return self.advance()

    # -- entry --------------------------------------------------------------
    def parse(self):
        while self.tok.kind != "EOF":
            t = self.tok
            if t.kind == "META":
                self.advance()
                self.meta(t)
            elif t.is_kw("req"):
                try:
                    self.requirement()
                except _Abort:
                    self.recover()
            else:
                self.errors.append(ParseError(t.span, f"expected 'req', got {t.text!r}", ("req",)))
                self.advance()
                self.recover()

    def recover(self):
        while self.tok.kind != "EOF":
            if self.tok.is_kw("req"):
                return
            if self.advance().is_kw("end"):
                return

    def meta(self, t: Token):
        body = t.text[2:].strip()
        key, sep, value = body.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            self.errors.append(ParseError(t.span, "malformed header directive, want '#@ key = value'"))
            return
        if key == "name":
            self.name = value
        else:
            self.metadata.append((key, value))

    # -- values -------------------------------------------------------------
    def quantity(self) -> Quantity:
        num = self.tok
        if num.kind != "NUMBER":
            if num.kind == "WORD" and re.match(r"[+-]?[\d.]", num.text):
                self.fail(f"malformed number {num.text!r}", ("number",))
            self.fail(f"expected number, got {num.text or 'end of input'!r}", ("number",))
        self.advance()
        unit = self.tok
        # a unit always follows the number, so "min" here means minutes
        if unit.kind == "WORD" and (unit.text not in KEYWORDS or unit.text in SYMBOLS):
            symbol = unit.text
        elif unit.kind == "NUMBER" and unit.text == "1":
            symbol = "1"
        else:
            self.fail(f"missing unit after {num.text}", ("unit",), tok=unit if unit.kind != "EOF" else num)
        if symbol not in SYMBOLS:
            self.fail(f"unknown unit {symbol!r}", tuple(SYMBOLS), tok=unit)
        self.advance()
        try:
            return Quantity.of(float(num.text), symbol)
        except (UnitError, ValueError, OverflowError):
            self.fail(f"malformed number {num.text!r}", ("number",), tok=num)

    def interval(self) -> tuple[Quantity, Quantity, Token]:
        open_tok = self.expect_kind("LBRACK", "'['")
        lo = self.quantity()
        self.expect_kind("COMMA", "','")
        hi = self.quantity()
        self.expect_kind("RBRACK", "']'")
        if lo.unit != hi.unit:
            self.fail(f"interval bounds {lo} and {hi} have different dimensions", tok=open_tok)
        if lo.value > hi.value:
            self.fail("empty interval", tok=open_tok)
        return lo, hi, open_tok

    def string(self, what: str) -> str:
        t = self.expect_kind("STRING", what)
        try:
            return json.loads(t.text)
        except ValueError:
            self.fail("malformed string literal", tok=t)

    def enum_value(self, enum_cls, what: str):
        t = self.word(what)
        try:
            return enum_cls(t.text)
        except ValueError:
            self.fail(f"unknown {what} {t.text!r}", tuple(e.value for e in enum_cls), tok=t)

    # -- requirement block ---------------------------------------------------
    def requirement(self):
        req_tok = self.expect_kw("req")
        rid = self.word("requirement id").text
        category = kind = None
        text = ""
        bounds: list[SignalBound] = []
        methods: list[VerificationMethod] = []
        phases: list[str] = []
        items: list[str] = []
        width_max = fraction = duration = window = None
        trigger = None
        windows: list[tuple[Quantity, Quantity]] = []
        seen: set[str] = set()

        def once(key: str, tok: Token):
            if key in seen:
                self.fail(f"duplicate {key} clause", tok=tok)
            seen.add(key)

        while True:
            t = self.tok
            if t.is_kw("end"):
                self.advance()
                break
            if t.kind == "EOF" or t.is_kw("req"):
                break
            if t.kind != "WORD" or t.text not in CLAUSE_KEYWORDS:
                self.fail(f"unexpected {t.text!r} in requirement {rid}",
                          sorted(CLAUSE_KEYWORDS | {"end"}))
            self.advance()
            kw = t.text
            if kw == "category":
                once(kw, t)
                category = self.enum_value(Category, "category")
            elif kw == "kind":
                once(kw, t)
                kind = self.enum_value(Kind, "kind")
            elif kw == "signal":
                bounds.append(self.signal_clause())
            elif kw == "fraction":
                once(kw, t)
                fraction = self.quantity()
            elif kw == "for":
                if self.tok.kind == "NUMBER":
                    once("for-duration", t)
                    duration = self.quantity()
                else:
                    once("for-trigger", t)
                    trigger = self.word("trigger event or duration").text
            elif kw == "window":
                if self.tok.kind == "LBRACK":
                    lo, hi, _ = self.interval()
                    windows.append((lo, hi))
                else:
                    once(kw, t)
                    window = self.quantity()
            elif kw == "phase":
                phases.append(self.word("phase name").text)
            elif kw == "item":
                if self.tok.is_kw("max"):
                    self.fail("expected item selector", ("selector",))
                sel = self.word("item selector")
                if sel.text == "width":
                    once("item-width", sel)
                    self.expect_kw("max")
                    width_max = self.quantity()
                else:
                    items.append(sel.text)
            elif kw == "method":
                m = self.enum_value(Method, "method")
                detail = self.string("method detail") if self.tok.kind == "STRING" else ""
                methods.append(VerificationMethod(m, detail))
            elif kw == "text":
                once(kw, t)
                text = self.string("text string")

        if category is None:
            self.fail(f"requirement {rid} is missing its category", ("category",), tok=req_tok)
        if kind is None:
            self.fail(f"requirement {rid} is missing its kind", ("kind",), tok=req_tok)
        if not methods:
            self.fail(f"requirement {rid} is missing a method tag", ("method",), tok=req_tok)
        req = Requirement(
            id=rid,
            category=category,
            kind=kind,
            params=Params(tuple(bounds), fraction, duration, trigger, window, tuple(windows)),
            methods=tuple(methods),
            applicability=Applicability(tuple(phases), tuple(items), width_max),
            text=text,
        )
        self.reqs.append((req, req_tok))

    def signal_clause(self) -> SignalBound:
        name = self.word("signal name").text
        lo = hi = tol = None
        interval = False
        if self.tok.is_kw("in"):
            self.advance()
            lo, hi, _ = self.interval()
            interval = True
        elif self.tok.is_kw("max"):
            self.advance()
            hi = self.quantity()
        elif self.tok.is_kw("min"):
            self.advance()
            lo = self.quantity()
        if self.tok.is_kw("within"):
            self.advance()
            tol = self.quantity()
        return SignalBound(name, lo, hi, interval, tol)


def parse_spec(text: Union[str, bytes], name: str = "") -> SpecificationDoc:
    """Parse a ``.gspec`` document.

    Raises :class:`SpecSyntaxError` listing every problem found; each error
    carries a source span.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise SpecSyntaxError([ParseError(SourceSpan(1, 1), f"input is not UTF-8 ({e.reason})")])
    tokens, errors = tokenize(text)
    p = _Parser(tokens, errors)
    p.parse()
    if not p.reqs and not errors:
        errors.append(ParseError(SourceSpan(1, 1), "empty document", ("req",)))
    doc = SpecificationDoc(p.name or name, tuple(r for r, _ in p.reqs), tuple(p.metadata))
    if p.reqs:
        spans = {}
        for r, tok in p.reqs:
            spans.setdefault(r.id, tok.span)
        for v in validate_doc(doc):
            if v.rule in ("EmptyInterval", "EmptyDocument"):
                continue
            span = spans.get(v.requirement_id, SourceSpan(1, 1))
            errors.append(ParseError(span, f"{v.rule}: {v.message}"))
    if errors:
        errors.sort(key=lambda e: (e.span.line, e.span.column))
        raise SpecSyntaxError(errors)
    return doc


def _q(q: Quantity) -> str:
    return f"{format_number(q.magnitude)} {q.symbol}"


def _signal_line(b: SignalBound) -> str:
    s = f"signal {b.signal}"
    if b.interval:
        s += f" in [{_q(b.lo)}, {_q(b.hi)}]"
    elif b.hi is not None:
        s += f" max {_q(b.hi)}"
    elif b.lo is not None:
        s += f" min {_q(b.lo)}"
    if b.tolerance is not None:
        s += f" within {_q(b.tolerance)}"
    return s


def print_requirement(r: Requirement) -> str:
    p, a = r.params, r.applicability
    lines = [f"req {r.id}", f"  category {r.category.value}", f"  kind {r.kind.value}"]
    lines += [f"  {_signal_line(b)}" for b in p.bounds]
    if p.fraction is not None:
        lines.append(f"  fraction {_q(p.fraction)}")
    if p.trigger is not None:
        lines.append(f"  for {p.trigger}")
    if p.duration is not None:
        lines.append(f"  for {_q(p.duration)}")
    if p.window is not None:
        lines.append(f"  window {_q(p.window)}")
    lines += [f"  window [{_q(lo)}, {_q(hi)}]" for lo, hi in p.windows]
    lines += [f"  phase {ph}" for ph in a.phases]
    lines += [f"  item {sel}" for sel in a.items]
    if a.width_max is not None:
        lines.append(f"  item width max {_q(a.width_max)}")
    for m in r.methods:
        detail = f" {json.dumps(m.detail, ensure_ascii=False)}" if m.detail else ""
        lines.append(f"  method {m.method.value}{detail}")
    if r.text:
        lines.append(f"  text {json.dumps(r.text, ensure_ascii=False)}")
    lines.append("end")
    return "\n".join(lines)


def print_spec(doc: SpecificationDoc) -> str:
    """Render ``doc`` as ``.gspec`` text; the output parses back to an equal document."""
    out = []
    if doc.name:
        out.append(f"#@ name = {doc.name}")
    out += [f"#@ {k} = {v}" for k, v in doc.metadata]
    if out:
        out.append("")
    out += [print_requirement(r) + "\n" for r in doc.requirements]
    return "\n".join(out)
