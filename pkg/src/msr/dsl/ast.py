"""Syntax tree for scenario files.  Spans never take part in equality."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span():
    return field(default=Span(0, 0), compare=False, repr=False)


# expressions

@dataclass(frozen=True)
class Num:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class Name:
    id: str
    span: Span = _span()


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple
    span: Span = _span()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object
    span: Span = _span()


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object
    span: Span = _span()


# declarations

@dataclass(frozen=True)
class ChartDecl:
    name: str
    variables: tuple
    span: Span = _span()


@dataclass(frozen=True)
class FibrationDecl:
    name: str
    variables: tuple
    over: tuple | None = None
    span: Span = _span()


@dataclass(frozen=True)
class Let:
    kind: str  # form, field, observable, potential
    name: str
    expr: object
    span: Span = _span()


@dataclass(frozen=True)
class OmegaDecl:
    n: int | None
    expr: object
    span: Span = _span()


@dataclass(frozen=True)
class ActionDecl:
    items: tuple
    span: Span = _span()


@dataclass(frozen=True)
class StructConstDecl:
    a: str
    b: str
    expr: object
    span: Span = _span()


@dataclass(frozen=True)
class ConstraintsDecl:
    gens: tuple = ()
    from_level: bool = False
    zero_level: bool = False
    span: Span = _span()


@dataclass(frozen=True)
class MomentDecl:
    potential: str | None = None
    comps: tuple = ()
    span: Span = _span()


@dataclass(frozen=True)
class LevelDecl:
    comps: tuple
    span: Span = _span()


# queries

@dataclass(frozen=True)
class CheckQuery:
    kind: str
    args: tuple = ()
    expect: bool | None = None
    span: Span = _span()


@dataclass(frozen=True)
class ReduceTangentQuery:
    expect: tuple | None = None
    span: Span = _span()


@dataclass(frozen=True)
class ReduceQuery:
    expr: object
    expect: bool | None = None
    span: Span = _span()


@dataclass(frozen=True)
class ReducedBasisQuery:
    degree: int
    ansatz: tuple = ()
    expect: tuple | None = None
    span: Span = _span()


@dataclass(frozen=True)
class JacobiQuery:
    arity: int
    sample: tuple = ()
    trials: int | None = None
    span: Span = _span()


QUERY_TYPES = (CheckQuery, ReduceTangentQuery, ReduceQuery, ReducedBasisQuery, JacobiQuery)


@dataclass(frozen=True)
class Scenario:
    statements: tuple

    @property
    def queries(self):
        return tuple(s for s in self.statements if isinstance(s, QUERY_TYPES))

    @property
    def declarations(self):
        return tuple(s for s in self.statements if not isinstance(s, QUERY_TYPES))
