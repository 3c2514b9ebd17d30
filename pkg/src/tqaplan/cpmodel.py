"""Finite-domain constraint model: Boolean/integer variables, clause and
linear constraints with conjunctive guards and reified conjunctions, plus a
canonical text form that round-trips exactly."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

BOOL = "b"
INT = "i"

# ops for integer comparison atoms and linear constraints
LE, GE, EQ = "le", "ge", "eq"


@dataclass(frozen=True)
class Lit:
    """Boolean variable pinned to a value."""

    var: int
    val: bool = True

    def negate(self) -> "Lit":
        return Lit(self.var, not self.val)

    def token(self) -> str:
        return f"{'+' if self.val else '-'}b{self.var}"


@dataclass(frozen=True)
class Cmp:
    """Integer comparison atom: ``var op k`` with op in le/ge/eq."""

    var: int
    op: str
    k: int

    def token(self) -> str:
        sym = {LE: "<=", GE: ">=", EQ: "=="}[self.op]
        return f"i{self.var}{sym}{self.k}"


Atom = Union[Lit, Cmp]


@dataclass(frozen=True)
class Term:
    """One linear term ``coef * var`` where the variable may be Boolean (0/1)."""

    coef: int
    space: str  # BOOL | INT
    var: int

    def token(self) -> str:
        return f"{self.coef}*{self.space}{self.var}"


@dataclass(frozen=True)
class Clause:
    lits: tuple[Lit, ...]


@dataclass(frozen=True)
class Lin:
    """``sum(terms) op const`` with op in le/eq."""

    terms: tuple[Term, ...]
    op: str
    const: int


@dataclass(frozen=True)
class Implies:
    """Conjunctive guard implies a clause or a linear constraint."""

    guard: tuple[Atom, ...]
    body: Union[Clause, Lin]


@dataclass(frozen=True)
class IffConj:
    """Boolean literal reified to a conjunction of atoms."""

    lit: Lit
    atoms: tuple[Atom, ...]


@dataclass(frozen=True)
class ExactlyOne:
    lits: tuple[Lit, ...]


Constraint = Union[Clause, Lin, Implies, IffConj, ExactlyOne]


class ModelFormatError(ValueError):
    pass


@dataclass
class CspModel:
    bool_names: list[str] = field(default_factory=list)
    int_decls: list[tuple[str, int, int]] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: Optional[tuple[Term, ...]] = None  # always minimized

    # -- construction -----------------------------------------------------

    def new_bool(self, name: str) -> int:
        if any(ch.isspace() for ch in name):
            raise ValueError(f"variable names must not contain whitespace: {name!r}")
        self.bool_names.append(name)
        return len(self.bool_names) - 1

    def new_int(self, name: str, lo: int, hi: int) -> int:
        if any(ch.isspace() for ch in name):
            raise ValueError(f"variable names must not contain whitespace: {name!r}")
        if lo > hi:
            raise ValueError(f"empty domain [{lo}, {hi}] for {name!r}")
        self.int_decls.append((name, lo, hi))
        return len(self.int_decls) - 1

    def add(self, constraint: Constraint) -> None:
        self.constraints.append(constraint)

    def minimize(self, terms: Iterable[Term]) -> None:
        self.objective = tuple(terms)

    # -- helpers ----------------------------------------------------------

    @property
    def n_bools(self) -> int:
        return len(self.bool_names)

    @property
    def n_ints(self) -> int:
        return len(self.int_decls)

    def check_well_formed(self) -> None:
        """Reject dangling variable references and malformed pieces."""

        def check_atom(a: Atom) -> None:
            if isinstance(a, Lit):
                if not 0 <= a.var < self.n_bools:
                    raise ModelFormatError(f"boolean id {a.var} out of range")
            else:
                if not 0 <= a.var < self.n_ints:
                    raise ModelFormatError(f"integer id {a.var} out of range")
                if a.op not in (LE, GE, EQ):
                    raise ModelFormatError(f"bad comparison op {a.op!r}")

        def check_terms(terms: tuple[Term, ...]) -> None:
            for t in terms:
                if t.space == BOOL:
                    if not 0 <= t.var < self.n_bools:
                        raise ModelFormatError(f"boolean id {t.var} out of range")
                elif t.space == INT:
                    if not 0 <= t.var < self.n_ints:
                        raise ModelFormatError(f"integer id {t.var} out of range")
                else:
                    raise ModelFormatError(f"bad variable space {t.space!r}")

        def check_body(c: Union[Clause, Lin]) -> None:
            if isinstance(c, Clause):
                for lit in c.lits:
                    check_atom(lit)
            else:
                if c.op not in (LE, EQ):
                    raise ModelFormatError(f"bad linear op {c.op!r}")
                check_terms(c.terms)

        for con in self.constraints:
            if isinstance(con, (Clause, Lin)):
                check_body(con)
            elif isinstance(con, Implies):
                for a in con.guard:
                    check_atom(a)
                check_body(con.body)
            elif isinstance(con, IffConj):
                check_atom(con.lit)
                for a in con.atoms:
                    check_atom(a)
            elif isinstance(con, ExactlyOne):
                for lit in con.lits:
                    check_atom(lit)
            else:
                raise ModelFormatError(f"unknown constraint type {type(con).__name__}")
        if self.objective is not None:
            check_terms(self.objective)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CspModel):
            return NotImplemented
        return (
            self.bool_names == other.bool_names
            and self.int_decls == other.int_decls
            and self.constraints == other.constraints
            and self.objective == other.objective
        )


# -- canonical text form ---------------------------------------------------


def _body_tokens(body: Union[Clause, Lin]) -> list[str]:
    if isinstance(body, Clause):
        return ["clause", str(len(body.lits))] + [lit.token() for lit in body.lits]
    toks = ["lin", body.op, str(body.const), str(len(body.terms))]
    toks += [t.token() for t in body.terms]
    return toks


def export_model(m: CspModel) -> str:
    """Serialize to the canonical line format; equal models export to
    byte-identical text."""
    m.check_well_formed()
    lines = ["cspmodel 1"]
    for name in m.bool_names:
        lines.append(f"bool {name}")
    for name, lo, hi in m.int_decls:
        lines.append(f"int {lo} {hi} {name}")
    for con in m.constraints:
        if isinstance(con, (Clause, Lin)):
            lines.append(" ".join(_body_tokens(con)))
        elif isinstance(con, Implies):
            toks = ["imp", str(len(con.guard))] + [a.token() for a in con.guard]
            lines.append(" ".join(toks + _body_tokens(con.body)))
        elif isinstance(con, IffConj):
            toks = ["iff", con.lit.token(), str(len(con.atoms))]
            lines.append(" ".join(toks + [a.token() for a in con.atoms]))
        elif isinstance(con, ExactlyOne):
            lines.append(" ".join(["exactone", str(len(con.lits))] + [l.token() for l in con.lits]))
    if m.objective is not None:
        lines.append(
            " ".join(["minimize", str(len(m.objective))] + [t.token() for t in m.objective])
        )
    return "\n".join(lines) + "\n"


def _parse_atom(token: str) -> Atom:
    if token.startswith(("+b", "-b")):
        return Lit(int(token[2:]), token[0] == "+")
    for sym, op in (("<=", LE), (">=", GE), ("==", EQ)):
        if sym in token:
            left, right = token.split(sym, 1)
            if not left.startswith("i"):
                raise ModelFormatError(f"bad atom token {token!r}")
            return Cmp(int(left[1:]), op, int(right))
    raise ModelFormatError(f"bad atom token {token!r}")


def _parse_lit(token: str) -> Lit:
    atom = _parse_atom(token)
    if not isinstance(atom, Lit):
        raise ModelFormatError(f"expected a boolean literal, got {token!r}")
    return atom


def _parse_term(token: str) -> Term:
    if "*" not in token:
        raise ModelFormatError(f"bad term token {token!r}")
    coef_text, var_text = token.split("*", 1)
    if var_text[0] not in (BOOL, INT):
        raise ModelFormatError(f"bad term token {token!r}")
    return Term(int(coef_text), var_text[0], int(var_text[1:]))


def _parse_body(tokens: list[str]) -> Union[Clause, Lin]:
    kind = tokens[0]
    if kind == "clause":
        n = int(tokens[1])
        return Clause(tuple(_parse_lit(t) for t in tokens[2 : 2 + n]))
    if kind == "lin":
        op, const, n = tokens[1], int(tokens[2]), int(tokens[3])
        return Lin(tuple(_parse_term(t) for t in tokens[4 : 4 + n]), op, const)
    raise ModelFormatError(f"bad constraint body {tokens!r}")


def parse_model(text: str) -> CspModel:
    """Parse the canonical text form back into an equal model."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split() != ["cspmodel", "1"]:
        raise ModelFormatError("missing 'cspmodel 1' header")
    m = CspModel()
    for ln in lines[1:]:
        tokens = ln.split()
        kind = tokens[0]
        if kind == "bool":
            if len(tokens) != 2:
                raise ModelFormatError(f"bad bool line {ln!r}")
            m.new_bool(tokens[1])
        elif kind == "int":
            if len(tokens) != 4:
                raise ModelFormatError(f"bad int line {ln!r}")
            m.new_int(tokens[3], int(tokens[1]), int(tokens[2]))
        elif kind in ("clause", "lin"):
            m.add(_parse_body(tokens))
        elif kind == "imp":
            n = int(tokens[1])
            guard = tuple(_parse_atom(t) for t in tokens[2 : 2 + n])
            m.add(Implies(guard, _parse_body(tokens[2 + n :])))
        elif kind == "iff":
            lit = _parse_lit(tokens[1])
            n = int(tokens[2])
            m.add(IffConj(lit, tuple(_parse_atom(t) for t in tokens[3 : 3 + n])))
        elif kind == "exactone":
            n = int(tokens[1])
            m.add(ExactlyOne(tuple(_parse_lit(t) for t in tokens[2 : 2 + n])))
        elif kind == "minimize":
            n = int(tokens[1])
            m.minimize(_parse_term(t) for t in tokens[2 : 2 + n])
        else:
            raise ModelFormatError(f"unknown line kind {kind!r}")
    m.check_well_formed()
    return m
