"""Recursive-descent parser for the expression language shared by the library and the CLI.

Grammar::

    expr := term (('+'|'-') term)*
    term := atom ('*' atom)*
    atom := 's'INT | 't'INT | 'Q' | 'P' | '1' | 'q' | 'qc' | 'q[' INT ',' INT ']'
          | '(' expr ')' | atom '^' INT | atom "'"

``'`` is the adjoint.  Columns in error messages are 1-based.
"""
from __future__ import annotations

from .coeff import ConfigError, Mode, PhaseCoeff
from .symalg import S, T, AlgebraConfig, Element, ModeError

__all__ = ["ParseError", "parse_expr"]


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"syntax error at column {column}: {message}")
        self.column = column
        self.reason = message


class _Parser:
    def __init__(self, text: str, config: AlgebraConfig):
        self.text = text
        self.pos = 0
        self.cfg = config
        self.open_parens: list[int] = []

    # lexing helpers
    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _col(self) -> int:
        return self.pos + 1

    def _fail(self, message: str, column: int | None = None):
        if column is None:
            self._skip()
            if self.pos >= len(self.text) and self.open_parens:
                column = self.open_parens[-1]
                message = f"{message} (unclosed '(' at column {column})"
            else:
                column = self._col()
        raise ParseError(message, column)

    def _int(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._fail("expected an integer")
        return int(self.text[start:self.pos])

    def _expect(self, ch: str):
        if self._peek() != ch:
            self._fail(f"expected {ch!r}" + (" but input ended" if not self._peek() else f", found {self._peek()!r}"))
        self.pos += 1

    # grammar
    def parse(self) -> Element:
        if not self._peek():
            self._fail("empty expression")
        value = self.expr()
        if self._peek():
            self._fail(f"unexpected {self._peek()!r}")
        return value

    def expr(self) -> Element:
        value = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Element:
        value = self.atom()
        while self._peek() == "*":
            self.pos += 1
            value = value * self.atom()
        return value

    def atom(self) -> Element:
        value = self.primary()
        while True:
            ch = self._peek()
            if ch == "^":
                self.pos += 1
                value = value ** self._int()
            elif ch == "'":
                self.pos += 1
                value = value.adjoint()
            else:
                return value

    def _index(self, family: int, col: int) -> int:
        idx = self._int()
        try:
            self.cfg.check_letter(family, idx)
        except ConfigError as exc:
            raise ParseError(str(exc), col) from None
        return idx

    def _scalar(self, coeff: PhaseCoeff) -> Element:
        return Element.scalar(self.cfg, coeff)

    def primary(self) -> Element:
        ch = self._peek()
        col = self._col()
        cfg = self.cfg
        if not ch:
            self._fail("unexpected end of input")
        if ch == "(":
            self.open_parens.append(col)
            self.pos += 1
            value = self.expr()
            self._expect(")")
            self.open_parens.pop()
            return value
        if ch == "s" or ch == "t":
            self.pos += 1
            if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
                self._fail(f"expected an index after {ch!r}")
            family = S if ch == "s" else T
            return Element.gen(cfg, family, self._index(family, col))
        if ch == "Q":
            self.pos += 1
            return Element.Q(cfg)
        if ch == "P":
            self.pos += 1
            return Element.P(cfg)
        if ch == "1":
            self.pos += 1
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                self._fail("only the literal 1 is allowed", col)
            return Element.one(cfg)
        if ch == "q":
            self.pos += 1
            nxt = self.text[self.pos] if self.pos < len(self.text) else ""
            if nxt == "[":
                self.pos += 1
                i = self._int()
                self._expect(",")
                j = self._int()
                self._expect("]")
                if cfg.vars.mode is not Mode.MULTI_UNIMODULAR:
                    raise ModeError(f"q[{i},{j}] used outside the multiparameter mode (column {col})")
                try:
                    return self._scalar(PhaseCoeff.qij(cfg.vars, i, j))
                except ConfigError as exc:
                    raise ParseError(str(exc), col) from None
            conj = nxt == "c"
            if conj:
                self.pos += 1
            if cfg.vars.mode is Mode.MULTI_UNIMODULAR:
                raise ModeError(f"{'qc' if conj else 'q'} used in the multiparameter mode (column {col})")
            return self._scalar(PhaseCoeff.qc(cfg.vars) if conj else PhaseCoeff.q(cfg.vars))
        self._fail(f"unexpected {ch!r}")


def parse_expr(text: str, config: AlgebraConfig) -> Element:
    """Parse ``text`` into a normal-ordered Element of ``config``."""
    return _Parser(text, config).parse()
