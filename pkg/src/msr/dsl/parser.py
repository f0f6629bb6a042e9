"""LL(1) recursive-descent parser for scenario files.

One statement per line; newlines inside brackets are ignored.  In
expressions ``^`` is exponentiation when both operands are functions (the
exponent must then be a non-negative integer constant) and the wedge
product otherwise; that choice is made during elaboration, the tree only
records ``^``.
"""

from __future__ import annotations

from . import ast as A
from .lexer import ParseError, Token, tokenize

CHECK_ARITY = {
    "nondegenerate": (0, 0),
    "action": (0, 0),
    "moment": (0, 0),
    "hamiltonian": (1, 2),
    "tangent": (1, 1),
    "reducible": (1, 1),
    "vanishing": (1, 1),
    "fundamental": (1, 1),
    "equal": (2, 2),
    "symplectic": (1, 1),
    "poisson-descent": (0, None),
    "contains": (1, 1),
    "closure": (0, None),
    "identical": (2, 2),
}
LET_KINDS = ("form", "field", "observable", "potential")
RESERVED = {"expect", "sample", "trials", "ansatz", "over", "of"}
MAX_DEPTH = 120


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0
        self.depth = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        return ParseError(msg, t.line, t.col)

    def at_op(self, op: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == op

    def at_word(self, w: str) -> bool:
        return self.tok.kind == "IDENT" and self.tok.text == w

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            raise self.error(f"expected {op!r}, found {describe(self.tok)}")
        return self.advance()

    def expect_word(self, w: str) -> Token:
        if not self.at_word(w):
            raise self.error(f"expected {w!r}, found {describe(self.tok)}")
        return self.advance()

    def expect_ident(self, what="name") -> Token:
        if self.tok.kind != "IDENT":
            raise self.error(f"expected {what}, found {describe(self.tok)}")
        if self.tok.text in RESERVED:
            raise self.error(f"{self.tok.text!r} is reserved")
        return self.advance()

    def expect_int(self) -> int:
        neg = False
        if self.at_op("-"):
            self.advance()
            neg = True
        if self.tok.kind != "NUM":
            raise self.error(f"expected an integer, found {describe(self.tok)}")
        v = int(self.advance().text)
        return -v if neg else v

    def end_of_statement(self):
        if self.tok.kind not in ("NEWLINE", "EOF"):
            raise self.error(f"unexpected {describe(self.tok)} at end of statement")
        self.advance()

    def hyphen_word(self, first: str, second: str) -> bool:
        """Match ``first-second`` written without spaces."""
        t0, t1, t2 = self.tok, self.peek(1), self.peek(2)
        if (t0.kind == "IDENT" and t0.text == first and t1.kind == "OP" and t1.text == "-"
                and t2.kind == "IDENT" and t2.text == second
                and t1.end - 1 == t0.end and t2.end - len(t2.text) == t1.end):
            self.pos += 3
            return True
        return False

    # entry

    def parse(self) -> A.Scenario:
        stmts = []
        while self.tok.kind != "EOF":
            if self.tok.kind == "NEWLINE":
                self.advance()
                continue
            stmts.append(self.statement())
        return A.Scenario(tuple(stmts))

    def statement(self):
        t = self.tok
        span = A.Span(t.line, t.col)
        if t.kind != "IDENT":
            raise self.error(f"expected a statement keyword, found {describe(t)}")
        if self.hyphen_word("reduced", "basis"):
            return self.reduced_basis(span)
        word = t.text
        handler = {
            "chart": self.chart, "fibration": self.fibration, "omega": self.omega,
            "action": self.action, "structconst": self.structconst, "constraints": self.constraints,
            "moment": self.moment, "level": self.level, "check": self.check, "reduce": self.reduce,
            "jacobi": self.jacobi,
        }.get(word)
        if word in LET_KINDS:
            self.advance()
            name = self.expect_ident().text
            self.expect_op("=")
            e = self.expr()
            self.end_of_statement()
            return A.Let(word, name, e, span)
        if handler is None:
            raise self.error(f"unknown statement {word!r}")
        self.advance()
        node = handler(span)
        self.end_of_statement()
        return node

    def ident_list(self) -> tuple:
        self.expect_op("(")
        names = []
        if not self.at_op(")"):
            names.append(self.expect_ident("variable name").text)
            while self.at_op(","):
                self.advance()
                names.append(self.expect_ident("variable name").text)
        self.expect_op(")")
        return tuple(names)

    def chart(self, span):
        name = self.expect_ident("chart name").text
        return A.ChartDecl(name, self.ident_list(), span)

    def fibration(self, span):
        name = self.expect_ident("fibration name").text
        vs = self.ident_list()
        over = None
        if self.at_word("over"):
            self.advance()
            over = self.ident_list()
        return A.FibrationDecl(name, vs, over, span)

    def omega(self, span):
        n = None
        if self.at_word("n"):
            self.advance()
            self.expect_op("=")
            n = self.expect_int()
        self.expect_op("=")
        return A.OmegaDecl(n, self.expr(), span)

    def expr_list(self) -> tuple:
        items = [self.expr()]
        while self.at_op(","):
            self.advance()
            items.append(self.expr())
        return tuple(items)

    def action(self, span):
        return A.ActionDecl(self.expr_list(), span)

    def structconst(self, span):
        self.expect_op("[")
        a = self.expect_ident().text
        self.expect_op(",")
        b = self.expect_ident().text
        self.expect_op("]")
        self.expect_op("=")
        return A.StructConstDecl(a, b, self.expr(), span)

    def constraints(self, span):
        if self.at_word("level"):
            self.advance()
            zero = False
            if self.tok.kind == "NUM":
                if self.tok.text.strip("0") != "":
                    raise self.error("only the zero level can be named here; declare others with 'level'")
                self.advance()
                zero = True
            self.expect_word("of")
            self.expect_word("moment")
            return A.ConstraintsDecl((), True, zero, span)
        return A.ConstraintsDecl(self.expr_list(), False, False, span)

    def moment(self, span):
        if self.at_word("from"):
            self.advance()
            self.expect_word("potential")
            return A.MomentDecl(self.expect_ident("potential name").text, (), span)
        return A.MomentDecl(None, self.expr_list(), span)

    def level(self, span):
        return A.LevelDecl(self.expr_list(), span)

    def expect_clause_bool(self):
        if not self.at_word("expect"):
            return None
        self.advance()
        if self.at_word("true"):
            self.advance()
            return True
        if self.at_word("false"):
            self.advance()
            return False
        raise self.error(f"expected true or false, found {describe(self.tok)}")

    def check(self, span):
        kind_tok = self.tok
        if self.hyphen_word("poisson", "descent"):
            kind = "poisson-descent"
        elif self.tok.kind == "IDENT" and self.tok.text in CHECK_ARITY:
            kind = self.advance().text
        else:
            raise self.error(f"unknown check {kind_tok.text!r}; expected one of {', '.join(CHECK_ARITY)}")
        args = ()
        if self.tok.kind not in ("NEWLINE", "EOF") and not self.at_word("expect"):
            args = self.expr_list()
        lo, hi = CHECK_ARITY[kind]
        if len(args) < lo or (hi is not None and len(args) > hi):
            want = str(lo) if lo == hi else f"{lo}..{hi if hi is not None else 'n'}"
            raise ParseError(f"check {kind} takes {want} argument(s), got {len(args)}", span.line, span.col)
        return A.CheckQuery(kind, args, self.expect_clause_bool(), span)

    def reduce(self, span):
        if self.hyphen_word("tangent", "module"):
            expect = None
            if self.at_word("expect"):
                self.advance()
                expect = self.expr_list()
            return A.ReduceTangentQuery(expect, span)
        e = self.expr()
        return A.ReduceQuery(e, self.expect_clause_bool(), span)

    def keyword_int(self, word: str) -> int:
        self.expect_word(word)
        self.expect_op("=")
        return self.expect_int()

    def reduced_basis(self, span):
        deg = self.keyword_int("degree")
        if deg < 0:
            raise ParseError("degree must be non-negative", span.line, span.col)
        ansatz = ()
        expect = None
        if self.at_word("ansatz"):
            self.advance()
            ansatz = self.expr_list()
        if self.at_word("expect"):
            self.advance()
            expect = self.expr_list()
        node = A.ReducedBasisQuery(deg, ansatz, expect, span)
        self.end_of_statement()
        return node

    def jacobi(self, span):
        arity = self.keyword_int("arity")
        if arity < 1:
            raise ParseError("arity must be positive", span.line, span.col)
        sample = ()
        trials = None
        if self.at_word("sample"):
            self.advance()
            sample = self.expr_list()
        if self.at_word("trials"):
            trials = self.keyword_int("trials")
            if trials < 1:
                raise ParseError("trials must be positive", span.line, span.col)
        return A.JacobiQuery(arity, sample, trials, span)

    # expressions

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")

    def expr(self):
        self._enter()
        try:
            left = self.term()
            while self.tok.kind == "OP" and self.tok.text in "+-":
                op = self.advance()
                right = self.term()
                left = A.Binary(op.text, left, right, A.Span(op.line, op.col))
            return left
        finally:
            self.depth -= 1

    def term(self):
        left = self.unary()
        while self.tok.kind == "OP" and self.tok.text in "*/":
            op = self.advance()
            right = self.unary()
            left = A.Binary(op.text, left, right, A.Span(op.line, op.col))
        return left

    def unary(self):
        if self.at_op("-"):
            op = self.advance()
            self._enter()
            try:
                return A.Unary("-", self.unary(), A.Span(op.line, op.col))
            finally:
                self.depth -= 1
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            op = self.advance()
            self._enter()
            try:
                exp = self.unary()
            finally:
                self.depth -= 1
            return A.Binary("^", base, exp, A.Span(op.line, op.col))
        return base

    def atom(self):
        t = self.tok
        span = A.Span(t.line, t.col)
        if t.kind == "NUM":
            self.advance()
            return A.Num(int(t.text), span)
        if t.kind == "IDENT":
            if t.text in RESERVED:
                raise self.error(f"{t.text!r} is reserved")
            self.advance()
            if self.at_op("("):
                self.advance()
                args = ()
                if not self.at_op(")"):
                    args = self.expr_list()
                self.expect_op(")")
                return A.Call(t.text, args, span)
            return A.Name(t.text, span)
        if self.at_op("("):
            self.advance()
            e = self.expr()
            self.expect_op(")")
            return e
        raise self.error(f"expected an expression, found {describe(t)}")


def describe(t: Token) -> str:
    if t.kind == "EOF":
        return "end of input"
    if t.kind == "NEWLINE":
        return "end of line"
    return repr(t.text)


def parse_syntax(src: str) -> A.Scenario:
    """Parse source text into a syntax tree without resolving names."""
    return Parser(src).parse()


def parse_expr(src: str):
    p = Parser(src)
    e = p.expr()
    if p.tok.kind not in ("NEWLINE", "EOF"):
        raise p.error(f"unexpected {describe(p.tok)}")
    return e
