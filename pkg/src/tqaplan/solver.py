"""Backtracking finite-domain solver with unit propagation, bounds
consistency, guard/reification propagation, and branch-and-bound
optimization, plus an exhaustive enumeration oracle for small models.

The engine compiles the model into flat tuples over a unified variable
space (Booleans first, then integers) and fuses per-stage timestamp
channelling rows into element-style propagators so that bounds jump
instead of creeping across wide time domains.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .cpmodel import (
    BOOL,
    EQ,
    GE,
    INT,
    LE,
    Clause,
    Cmp,
    CspModel,
    ExactlyOne,
    IffConj,
    Implies,
    Lin,
    Lit,
    Term,
    export_model,
    parse_model,
)

__all__ = [
    "Assignment",
    "GuardExceededError",
    "SolveResult",
    "SolverConfig",
    "brute_force_solve",
    "check_assignment",
    "export_model",
    "objective_value",
    "parse_model",
    "solve",
]

SAT, UNSAT, LIMIT = "sat", "unsat", "limit"


class GuardExceededError(ValueError):
    """The enumeration oracle refuses search spaces past its guard."""


@dataclass(frozen=True)
class SolverConfig:
    time_budget: float = 300.0
    node_budget: int = 100_000_000
    branching: str = "actions_first"  # or "declaration"
    seed: int = 0  # reserved; search is deterministic without randomization

    def __post_init__(self) -> None:
        if self.time_budget <= 0 or self.node_budget <= 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Assignment:
    bools: tuple[bool, ...]
    ints: tuple[int, ...]


@dataclass
class SolveResult:
    status: str
    assignment: Optional[Assignment] = None
    objective: Optional[int] = None
    reason: str = ""
    nodes: int = 0

    @property
    def is_sat(self) -> bool:
        return self.status == SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT


# -- direct evaluation (the semantic definition; shared by the re-check and
#    the enumeration oracle, never by the propagation engine) ---------------


def _atom_holds(atom, bools, ints) -> bool:
    if isinstance(atom, Lit):
        return bools[atom.var] == atom.val
    v = ints[atom.var]
    if atom.op == LE:
        return v <= atom.k
    if atom.op == GE:
        return v >= atom.k
    return v == atom.k


def _body_holds(body, bools, ints) -> bool:
    if isinstance(body, Clause):
        return any(_atom_holds(l, bools, ints) for l in body.lits)
    total = 0
    for t in body.terms:
        total += t.coef * (bools[t.var] if t.space == BOOL else ints[t.var])
    return total <= body.const if body.op == LE else total == body.const


def constraint_holds(con, bools, ints) -> bool:
    """Evaluate one constraint on a total assignment."""
    if isinstance(con, (Clause, Lin)):
        return _body_holds(con, bools, ints)
    if isinstance(con, Implies):
        if all(_atom_holds(a, bools, ints) for a in con.guard):
            return _body_holds(con.body, bools, ints)
        return True
    if isinstance(con, IffConj):
        return _atom_holds(con.lit, bools, ints) == all(
            _atom_holds(a, bools, ints) for a in con.atoms
        )
    if isinstance(con, ExactlyOne):
        return sum(1 for l in con.lits if _atom_holds(l, bools, ints)) == 1
    raise TypeError(f"unknown constraint {type(con).__name__}")


def check_assignment(m: CspModel, a: Assignment) -> bool:
    return all(constraint_holds(con, a.bools, a.ints) for con in m.constraints)


def objective_value(m: CspModel, a: Assignment) -> Optional[int]:
    if m.objective is None:
        return None
    total = 0
    for t in m.objective:
        total += t.coef * (a.bools[t.var] if t.space == BOOL else a.ints[t.var])
    return total


# -- propagation engine -------------------------------------------------------

# compiled constraint tags
_CL, _LE, _EQ2, _IMP, _IFF, _EX1, _ELEM = range(7)
# atom ops (compiled)
_OP_LE, _OP_GE, _OP_EQ = 0, 1, 2

_OP_CODE = {LE: _OP_LE, GE: _OP_GE, EQ: _OP_EQ}


class _Engine:
    """Trail-based propagation and chronological backtracking search."""

    def __init__(self, model: CspModel, branching: str):
        model.check_well_formed()
        self.model = model
        self.nb = model.n_bools
        self.nv = self.nb + model.n_ints
        self.lo = [0] * self.nb + [d[1] for d in model.int_decls]
        self.hi = [1] * self.nb + [d[2] for d in model.int_decls]
        self.trail: list[tuple[int, bool, int]] = []
        self.watchers: list[list[int]] = [[] for _ in range(self.nv)]
        self.cons: list[tuple] = []
        self.queued: list[bool] = []
        self.queue: list[int] = []
        self.conflict = False
        self.nodes = 0
        # constraints observed satisfied sleep until the next backtrack
        self.epoch = 0
        self.sleep: list[int] = []
        self._compile_all()
        self.order = self._branch_order(branching)
        self.prefer_true = [
            model.bool_names[i].startswith(("u[", "uT[")) for i in range(self.nb)
        ]

    # -- compilation --------------------------------------------------------

    def _uid(self, space: str, var: int) -> int:
        return var if space == BOOL else self.nb + var

    def _atom(self, atom) -> tuple[int, int, int]:
        if isinstance(atom, Lit):
            return (atom.var, _OP_EQ, 1 if atom.val else 0)
        return (self.nb + atom.var, _OP_CODE[atom.op], atom.k)

    def _body(self, body):
        if isinstance(body, Clause):
            return ("c", tuple((l.var, 1 if l.val else 0) for l in body.lits))
        terms = tuple((t.coef, self._uid(t.space, t.var)) for t in body.terms)
        neg = tuple((-c, u) for c, u in terms)
        return ("l", 0 if body.op == LE else 1, terms, neg, body.const)

    def _register(self, compiled, uids) -> None:
        idx = len(self.cons)
        self.cons.append(compiled)
        self.queued.append(True)
        self.queue.append(idx)
        self.sleep.append(-1)
        for uid in set(uids):
            self.watchers[uid].append(idx)

    def _compile_all(self) -> None:
        fused, elements = _fuse_channels(self.model, self.nb)
        for pos, con in enumerate(self.model.constraints):
            if pos in fused:
                continue
            self._compile(con)
        for u_uid, idx_uid, tgt_uid, t_min, b_uids in elements:
            self._register(
                (_ELEM, u_uid, idx_uid, tgt_uid, t_min, b_uids),
                [u_uid, idx_uid, tgt_uid, *b_uids],
            )

    def _compile(self, con) -> None:
        if isinstance(con, Clause):
            lits = tuple((l.var, 1 if l.val else 0) for l in con.lits)
            self._register((_CL, lits), [u for u, _ in lits])
        elif isinstance(con, Lin):
            terms = tuple((t.coef, self._uid(t.space, t.var)) for t in con.terms)
            if con.op == LE:
                self._register((_LE, terms, con.const), [u for _, u in terms])
            else:
                neg = tuple((-c, u) for c, u in terms)
                self._register((_EQ2, terms, neg, con.const), [u for _, u in terms])
        elif isinstance(con, Implies):
            guard = tuple(self._atom(a) for a in con.guard)
            body = self._body(con.body)
            uids = [a[0] for a in guard]
            uids += [u for u, _ in body[1]] if body[0] == "c" else [u for _, u in body[2]]
            self._register((_IMP, guard, body), uids)
        elif isinstance(con, IffConj):
            lit = (con.lit.var, 1 if con.lit.val else 0)
            atoms = tuple(self._atom(a) for a in con.atoms)
            self._register((_IFF, lit, atoms), [lit[0]] + [a[0] for a in atoms])
        elif isinstance(con, ExactlyOne):
            lits = tuple((l.var, 1 if l.val else 0) for l in con.lits)
            self._register((_EX1, lits), [u for u, _ in lits])

    def _branch_order(self, branching: str) -> list[int]:
        if branching == "declaration":
            return list(range(self.nv))
        if branching != "actions_first":
            raise ValueError(f"unknown branching {branching!r}")

        def bool_rank(i: int) -> int:
            name = self.model.bool_names[i]
            if name.startswith(("u[", "uT[")):
                return 0
            if name.startswith("flow["):
                return 1
            return 2

        int_class = {"l[": 0, "r[": 0, "b[": 1, "S[": 2, "E[": 2, "s[": 3}

        def int_rank(j: int) -> int:
            name = self.model.int_decls[j][0]
            for prefix, rank in int_class.items():
                if name.startswith(prefix):
                    return rank
            return 4

        bools = sorted(range(self.nb), key=lambda i: (bool_rank(i), i))
        ints = sorted(range(self.nv - self.nb), key=lambda j: (int_rank(j), j))
        return bools + [self.nb + j for j in ints]

    # -- domain updates -------------------------------------------------------

    def _set_lo(self, uid: int, val: int) -> None:
        if val <= self.lo[uid]:
            return
        if val > self.hi[uid]:
            self.conflict = True
            return
        self.trail.append((uid, True, self.lo[uid]))
        self.lo[uid] = val
        queued, queue = self.queued, self.queue
        for idx in self.watchers[uid]:
            if not queued[idx]:
                queued[idx] = True
                queue.append(idx)

    def _set_hi(self, uid: int, val: int) -> None:
        if val >= self.hi[uid]:
            return
        if val < self.lo[uid]:
            self.conflict = True
            return
        self.trail.append((uid, False, self.hi[uid]))
        self.hi[uid] = val
        queued, queue = self.queued, self.queue
        for idx in self.watchers[uid]:
            if not queued[idx]:
                queued[idx] = True
                queue.append(idx)

    # -- atom helpers (status: 1 true, 0 false, -1 unknown) -------------------

    def _status(self, atom) -> int:
        uid, op, k = atom
        lo, hi = self.lo[uid], self.hi[uid]
        if op == _OP_LE:
            if hi <= k:
                return 1
            if lo > k:
                return 0
        elif op == _OP_GE:
            if lo >= k:
                return 1
            if hi < k:
                return 0
        else:
            if lo == hi == k:
                return 1
            if k < lo or k > hi:
                return 0
        return -1

    def _force(self, atom, value: bool) -> None:
        uid, op, k = atom
        if value:
            if op == _OP_LE:
                self._set_hi(uid, k)
            elif op == _OP_GE:
                self._set_lo(uid, k)
            else:
                self._set_lo(uid, k)
                if not self.conflict:
                    self._set_hi(uid, k)
        else:
            if op == _OP_LE:
                self._set_lo(uid, k + 1)
            elif op == _OP_GE:
                self._set_hi(uid, k - 1)
            else:
                if self.lo[uid] == k:
                    self._set_lo(uid, k + 1)
                elif self.hi[uid] == k:
                    self._set_hi(uid, k - 1)

    # -- constraint propagation -------------------------------------------------

    def _prop_clause(self, lits) -> bool:
        """Returns True when the clause is satisfied (may sleep)."""
        lo, hi = self.lo, self.hi
        unknown = -1
        count = 0
        for uid, want in lits:
            l = lo[uid]
            if l == hi[uid]:
                if l == want:
                    return True
            else:
                count += 1
                if count > 1:
                    return False
                unknown = uid
                unknown_want = want
        if count == 0:
            self.conflict = True
            return False
        if unknown_want:
            self._set_lo(unknown, 1)
        else:
            self._set_hi(unknown, 0)
        return True

    def _prop_lin_le(self, terms, const) -> bool:
        """Returns True when entailed under current bounds (may sleep)."""
        lo, hi = self.lo, self.hi
        mn = mx = 0
        for coef, uid in terms:
            if coef > 0:
                mn += coef * lo[uid]
                mx += coef * hi[uid]
            else:
                mn += coef * hi[uid]
                mx += coef * lo[uid]
        if mx <= const:
            return True
        if mn > const:
            self.conflict = True
            return False
        slack = const - mn
        for coef, uid in terms:
            if coef > 0:
                limit = lo[uid] + slack // coef
                if limit < hi[uid]:
                    self._set_hi(uid, limit)
                    if self.conflict:
                        return False
            else:
                limit = hi[uid] - slack // (-coef)
                if limit > lo[uid]:
                    self._set_lo(uid, limit)
                    if self.conflict:
                        return False
        return False

    def _body_status(self, body) -> int:
        if body[0] == "c":
            lo, hi = self.lo, self.hi
            saw_unknown = False
            for uid, want in body[1]:
                l = lo[uid]
                if l == hi[uid]:
                    if l == want:
                        return 1
                else:
                    saw_unknown = True
            return -1 if saw_unknown else 0
        _, eq, terms, _neg, const = body
        lo, hi = self.lo, self.hi
        if len(terms) == 2:
            (c0, u0), (c1, u1) = terms
            if c0 > 0:
                mn, mx = c0 * lo[u0], c0 * hi[u0]
            else:
                mn, mx = c0 * hi[u0], c0 * lo[u0]
            if c1 > 0:
                mn += c1 * lo[u1]
                mx += c1 * hi[u1]
            else:
                mn += c1 * hi[u1]
                mx += c1 * lo[u1]
        else:
            mn = mx = 0
            for coef, uid in terms:
                if coef > 0:
                    mn += coef * lo[uid]
                    mx += coef * hi[uid]
                else:
                    mn += coef * hi[uid]
                    mx += coef * lo[uid]
        if eq:
            if mn == mx == const:
                return 1
            if mn > const or mx < const:
                return 0
        else:
            if mx <= const:
                return 1
            if mn > const:
                return 0
        return -1

    def _prop_body(self, body) -> bool:
        if body[0] == "c":
            return self._prop_clause(body[1])
        _, eq, terms, neg, const = body
        done = self._prop_lin_le(terms, const)
        if eq and not self.conflict:
            done = self._prop_lin_le(neg, -const) and done
        return done

    def _prop_imp(self, guard, body) -> bool:
        """Returns True once the implication can no longer act (guard refuted
        or body entailed); such rows sleep until the next backtrack."""
        lo, hi = self.lo, self.hi
        unknown = None
        unknown_count = 0
        for atom in guard:
            uid, op, k = atom
            l, h = lo[uid], hi[uid]
            if op == _OP_LE:
                if l > k:
                    return True
                if h > k:
                    unknown_count += 1
                    unknown = atom
            elif op == _OP_GE:
                if h < k:
                    return True
                if l < k:
                    unknown_count += 1
                    unknown = atom
            else:
                if k < l or k > h:
                    return True
                if l != h:
                    unknown_count += 1
                    unknown = atom
        if unknown_count == 0:
            return self._prop_body(body)
        if unknown_count == 1 and self._body_status(body) == 0:
            self._force(unknown, False)
        return False

    def _prop_iff(self, lit, atoms) -> bool:
        uid, want = lit
        lo, hi = self.lo, self.hi
        st = -1
        if lo[uid] == hi[uid]:
            st = 1 if lo[uid] == want else 0
        if st == 1:
            for atom in atoms:
                self._force(atom, True)
                if self.conflict:
                    return False
            return True
        falses = 0
        unknown = None
        unknown_count = 0
        for atom in atoms:
            a_st = self._status(atom)
            if a_st == 0:
                falses += 1
            elif a_st == -1:
                unknown_count += 1
                unknown = atom
        if st == 0:
            if falses == 0:
                if unknown_count == 0:
                    self.conflict = True
                elif unknown_count == 1:
                    self._force(unknown, False)
            return falses > 0
        if falses > 0:
            self._force((uid, _OP_EQ, 1 - want), True)
            return True
        if unknown_count == 0:
            self._force((uid, _OP_EQ, want), True)
            return True
        return False

    def _prop_exone(self, lits) -> bool:
        lo, hi = self.lo, self.hi
        trues = 0
        unknowns = []
        for uid, want in lits:
            l = lo[uid]
            if l == hi[uid]:
                if l == want:
                    trues += 1
            else:
                unknowns.append((uid, want))
        if trues > 1:
            self.conflict = True
            return False
        if trues == 1:
            for uid, want in unknowns:
                if want:
                    self._set_hi(uid, 0)
                else:
                    self._set_lo(uid, 1)
                if self.conflict:
                    return False
            return True
        if not unknowns:
            self.conflict = True
            return False
        if len(unknowns) == 1:
            uid, want = unknowns[0]
            if want:
                self._set_lo(uid, 1)
            else:
                self._set_hi(uid, 0)
            return True
        return False

    def _prop_elem(self, u_uid, idx_uid, tgt_uid, t_min, b_uids) -> bool:
        """Fused channelling: when the use literal holds, the target equals
        the boundary selected by the index variable.  Bounds may be
        transiently non-monotone mid-propagation, so min/max scans cover the
        whole surviving index range (indices with incompatible boundaries at
        the edges are sliced off)."""
        lo, hi = self.lo, self.hi
        if lo[u_uid] == 0:
            # inactive until the use literal is decided true
            return hi[u_uid] == 0
        t_max = t_min + len(b_uids) - 1
        t = lo[idx_uid]
        if t == hi[idx_uid]:
            # pinned index: plain two-way equality with the selected boundary
            if t < t_min or t > t_max:
                self.conflict = True
                return False
            b_uid = b_uids[t - t_min]
            if lo[b_uid] > lo[tgt_uid]:
                self._set_lo(tgt_uid, lo[b_uid])
            elif lo[tgt_uid] > lo[b_uid]:
                self._set_lo(b_uid, lo[tgt_uid])
            if self.conflict:
                return False
            if hi[b_uid] < hi[tgt_uid]:
                self._set_hi(tgt_uid, hi[b_uid])
            elif hi[tgt_uid] < hi[b_uid]:
                self._set_hi(b_uid, hi[tgt_uid])
            return False
        tlo = max(t, t_min)
        thi = min(hi[idx_uid], t_max)
        tgt_lo, tgt_hi = lo[tgt_uid], hi[tgt_uid]
        while tlo <= thi:
            b = b_uids[tlo - t_min]
            if hi[b] < tgt_lo or lo[b] > tgt_hi:
                tlo += 1
            else:
                break
        while thi >= tlo:
            b = b_uids[thi - t_min]
            if hi[b] < tgt_lo or lo[b] > tgt_hi:
                thi -= 1
            else:
                break
        if tlo > thi:
            self.conflict = True
            return False
        if tlo > lo[idx_uid]:
            self._set_lo(idx_uid, tlo)
            if self.conflict:
                return False
        if thi < hi[idx_uid]:
            self._set_hi(idx_uid, thi)
            if self.conflict:
                return False
        new_lo = min(lo[b_uids[t - t_min]] for t in range(tlo, thi + 1))
        new_hi = max(hi[b_uids[t - t_min]] for t in range(tlo, thi + 1))
        if new_lo > tgt_lo:
            self._set_lo(tgt_uid, new_lo)
            if self.conflict:
                return False
        if new_hi < tgt_hi:
            self._set_hi(tgt_uid, new_hi)
            if self.conflict:
                return False
        if tlo == thi:
            b_uid = b_uids[tlo - t_min]
            if lo[tgt_uid] > lo[b_uid]:
                self._set_lo(b_uid, lo[tgt_uid])
                if self.conflict:
                    return False
            if hi[tgt_uid] < hi[b_uid]:
                self._set_hi(b_uid, hi[tgt_uid])
        return False

    def propagate(self) -> bool:
        queue, queued, cons, sleep = self.queue, self.queued, self.cons, self.sleep
        epoch = self.epoch
        while queue:
            if self.conflict:
                break
            idx = queue.pop()
            queued[idx] = False
            if sleep[idx] == epoch:
                continue
            con = cons[idx]
            tag = con[0]
            if tag == _IMP:
                done = self._prop_imp(con[1], con[2])
            elif tag == _CL:
                done = self._prop_clause(con[1])
            elif tag == _LE:
                done = self._prop_lin_le(con[1], con[2])
            elif tag == _EQ2:
                done = self._prop_lin_le(con[1], con[3])
                if not self.conflict:
                    done = self._prop_lin_le(con[2], -con[3]) and done
            elif tag == _IFF:
                done = self._prop_iff(con[1], con[2])
            elif tag == _EX1:
                done = self._prop_exone(con[1])
            else:
                done = self._prop_elem(con[1], con[2], con[3], con[4], con[5])
            if done and not self.conflict:
                sleep[idx] = epoch
        if self.conflict:
            queue.clear()
            for idx in range(len(queued)):
                queued[idx] = False
            return False
        return True

    # -- search ------------------------------------------------------------------

    def _undo_to(self, mark: int) -> None:
        self.epoch += 1
        trail, lo, hi = self.trail, self.lo, self.hi
        while len(trail) > mark:
            uid, changed_lo, old = trail.pop()
            if changed_lo:
                lo[uid] = old
            else:
                hi[uid] = old
        self.conflict = False

    def _next_var(self, start: int) -> int:
        order, lo, hi = self.order, self.lo, self.hi
        i = start
        n = len(order)
        while i < n and lo[order[i]] == hi[order[i]]:
            i += 1
        return i

    def _children(self, uid: int):
        lo, hi = self.lo[uid], self.hi[uid]
        if uid < self.nb:
            pref = 1 if self.prefer_true[uid] else 0
            return ((pref, pref), (1 - pref, 1 - pref))
        mid = (lo + hi) // 2
        return ((lo, mid), (mid + 1, hi))

    def search(self, deadline: float, node_budget: int):
        if not self.propagate():
            return UNSAT, None
        stack: list[list] = []
        pos = self._next_var(0)
        if pos == len(self.order):
            return SAT, self._extract()
        stack.append([len(self.trail), pos, self.order[pos], None, 0])
        while stack:
            frame = stack[-1]
            mark, pos, uid, windows, child = frame
            if windows is None:
                windows = self._children(uid)
                frame[3] = windows
            if child >= 2:
                stack.pop()
                continue
            frame[4] = child + 1
            self._undo_to(mark)
            self.nodes += 1
            if self.nodes > node_budget:
                return LIMIT, None
            if not self.nodes & 0x3FF and time.monotonic() > deadline:
                return LIMIT, None
            w_lo, w_hi = windows[child]
            self._set_lo(uid, w_lo)
            if not self.conflict:
                self._set_hi(uid, w_hi)
            if self.conflict or not self.propagate():
                continue
            nxt = self._next_var(pos)
            if nxt == len(self.order):
                return SAT, self._extract()
            stack.append([len(self.trail), nxt, self.order[nxt], None, 0])
        return UNSAT, None

    def _extract(self) -> Assignment:
        bools = tuple(bool(self.lo[i]) for i in range(self.nb))
        ints = tuple(self.lo[self.nb + i] for i in range(self.model.n_ints))
        return Assignment(bools, ints)

    def reset(self) -> None:
        self._undo_to(0)
        self.queue = list(range(len(self.cons)))
        self.queued = [True] * len(self.cons)

    def add_bound(self, terms: tuple[Term, ...], const: int) -> None:
        compiled_terms = tuple((t.coef, self._uid(t.space, t.var)) for t in terms)
        self._register((_LE, compiled_terms, const), [u for _, u in compiled_terms])


def _fuse_channels(model: CspModel, nb: int):
    """Find groups of rows (u ∧ idx = t) → (tgt - b_t = 0) sharing (u, idx,
    tgt) and fuse each group into one element propagator.  Returns the fused
    constraint positions and the element tuples; groups must cover a
    contiguous index range backed by monotonically ordered boundary
    variables (guaranteed by the boundary chain)."""
    groups: dict[tuple[int, int, int], dict[int, int]] = {}
    positions: dict[tuple[int, int, int], list[int]] = {}
    for pos, con in enumerate(model.constraints):
        if not isinstance(con, Implies) or len(con.guard) != 2:
            continue
        g0, g1 = con.guard
        if not (isinstance(g0, Lit) and g0.val and isinstance(g1, Cmp) and g1.op == EQ):
            continue
        body = con.body
        if not (
            isinstance(body, Lin)
            and body.op == EQ
            and body.const == 0
            and len(body.terms) == 2
        ):
            continue
        t_pos, t_neg = body.terms
        if t_pos.coef == -1 and t_neg.coef == 1:
            t_pos, t_neg = t_neg, t_pos
        if (
            t_pos.coef != 1
            or t_neg.coef != -1
            or t_pos.space != INT
            or t_neg.space != INT
        ):
            continue
        key = (g0.var, nb + g1.var, nb + t_pos.var)
        groups.setdefault(key, {})[g1.k] = nb + t_neg.var
        positions.setdefault(key, []).append(pos)

    fused: set[int] = set()
    elements = []
    for key, tmap in groups.items():
        if len(tmap) < 2:
            continue
        ts = sorted(tmap)
        if ts != list(range(ts[0], ts[-1] + 1)):
            continue
        u_uid, idx_uid, tgt_uid = key
        elements.append((u_uid, idx_uid, tgt_uid, ts[0], tuple(tmap[t] for t in ts)))
        fused.update(positions[key])
    return fused, elements


def solve(m: CspModel, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Decide satisfiability (optimizing when the model has an objective).

    Every satisfying assignment returned has been re-checked against the raw
    constraint list; optimal results come from a closed branch-and-bound.
    """
    engine = _Engine(m, cfg.branching)
    deadline = time.monotonic() + cfg.time_budget
    status, assignment = engine.search(deadline, cfg.node_budget)
    if status == LIMIT:
        return SolveResult(LIMIT, reason="budget exhausted", nodes=engine.nodes)
    if status == UNSAT:
        return SolveResult(UNSAT, nodes=engine.nodes)
    _assert_model_holds(m, assignment)
    if m.objective is None:
        return SolveResult(SAT, assignment, nodes=engine.nodes)

    best = assignment
    best_val = objective_value(m, assignment)
    while True:
        engine.reset()
        engine.add_bound(m.objective, best_val - 1)
        status, assignment = engine.search(deadline, cfg.node_budget)
        if status == UNSAT:
            return SolveResult(SAT, best, best_val, nodes=engine.nodes)
        if status == LIMIT:
            return SolveResult(
                LIMIT, best, best_val, reason="budget exhausted; incumbent reported",
                nodes=engine.nodes,
            )
        _assert_model_holds(m, assignment)
        best = assignment
        best_val = objective_value(m, assignment)


def _assert_model_holds(m: CspModel, a: Assignment) -> None:
    if not check_assignment(m, a):
        raise AssertionError("solver returned an assignment violating the model")


def brute_force_solve(m: CspModel, guard: int = 1 << 24) -> SolveResult:
    """Exhaustively enumerate assignments in declaration order, pruning a
    branch as soon as some fully-assigned constraint fails.

    With an objective, returns the true optimum; the search space (product
    of domain sizes) must stay within the guard.
    """
    m.check_well_formed()
    space = 1
    for _ in range(m.n_bools):
        space *= 2
        if space > guard:
            raise GuardExceededError(f"search space exceeds guard {guard}")
    for _, lo, hi in m.int_decls:
        space *= hi - lo + 1
        if space > guard:
            raise GuardExceededError(f"search space exceeds guard {guard}")

    nb, ni = m.n_bools, m.n_ints
    nv = nb + ni

    def max_ref(con) -> int:
        uids = []

        def add_atom(a):
            uids.append(a.var if isinstance(a, Lit) else nb + a.var)

        def add_body(body):
            if isinstance(body, Clause):
                for l in body.lits:
                    add_atom(l)
            else:
                for t in body.terms:
                    uids.append(t.var if t.space == BOOL else nb + t.var)

        if isinstance(con, (Clause, Lin)):
            add_body(con)
        elif isinstance(con, Implies):
            for a in con.guard:
                add_atom(a)
            add_body(con.body)
        elif isinstance(con, IffConj):
            add_atom(con.lit)
            for a in con.atoms:
                add_atom(a)
        elif isinstance(con, ExactlyOne):
            for l in con.lits:
                add_atom(l)
        return max(uids, default=-1)

    by_last_var: list[list] = [[] for _ in range(nv + 1)]
    for con in m.constraints:
        by_last_var[max_ref(con) + 1].append(con)

    bools = [False] * nb
    ints = [0] * ni
    nodes = 0
    best: Optional[Assignment] = None
    best_val: Optional[int] = None

    def domain_of(uid: int):
        if uid < nb:
            return (False, True)
        lo, hi = m.int_decls[uid - nb][1], m.int_decls[uid - nb][2]
        return range(lo, hi + 1)

    def record() -> bool:
        nonlocal best, best_val
        a = Assignment(tuple(bools), tuple(ints))
        if m.objective is None:
            best = a
            return True
        val = objective_value(m, a)
        if best_val is None or val < best_val:
            best, best_val = a, val
        return False

    def descend(uid: int) -> bool:
        nonlocal nodes
        if uid == nv:
            return record()
        for value in domain_of(uid):
            nodes += 1
            if uid < nb:
                bools[uid] = value
            else:
                ints[uid - nb] = value
            if all(constraint_holds(c, bools, ints) for c in by_last_var[uid + 1]):
                if descend(uid + 1):
                    return True
        return False

    if all(constraint_holds(c, bools, ints) for c in by_last_var[0]):
        descend(0)
    if best is None:
        return SolveResult(UNSAT, nodes=nodes)
    _assert_model_holds(m, best)
    return SolveResult(SAT, best, best_val, nodes=nodes)
