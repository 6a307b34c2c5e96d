"""Finitely presented groups: words, presentations, coset enumeration.

Presentations use a small text grammar: `< a, b | a^2, b^3, (a b)^2 >`.
Inside relators, juxtaposition (or `*`) multiplies, `^n` is an integer
power, `x^y` with a non-integer exponent is the conjugate y^-1 x y, and
`[x, y]` is the commutator x^-1 y^-1 x y. All sugar expands eagerly, so a
parsed relator is a flat, freely reduced word.

Coset enumeration is the relator-scanning strategy with full row filling.
Every scan keeps the table's mirror invariant (an entry and its inverse
entry are set and cleared together), which is what makes coincidence
processing able to repair every stale reference by walking dead rows.
Tables are renumbered by breadth-first search from coset 0 over the columns
in order before they are returned, so the numbering depends only on the
quotient itself, not on the enumeration history.
"""

from __future__ import annotations

import re
from array import array
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ConstructionError, IncompleteTableError, ParseError
from .perm import Perm, PermGroup

__all__ = [
    "Word",
    "Presentation",
    "CosetTable",
    "parse_presentation",
    "todd_coxeter",
    "regular_representation",
    "DEFAULT_MAX_COSETS",
]

DEFAULT_MAX_COSETS = 10**6

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def _reduce(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for sym, sign in letters:
        if stack and stack[-1][0] == sym and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((sym, sign))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over named generators."""

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for item in self.letters:
            sym, sign = item
            if not isinstance(sym, str) or sign not in (1, -1):
                raise ValueError(f"bad letter {item!r}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @staticmethod
    def gen(symbol: str) -> "Word":
        return Word(((symbol, 1),))

    def is_empty(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((s, -sg) for s, sg in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        return Word(base.letters * abs(n))

    def conjugate_by(self, other: "Word") -> "Word":
        return other.inverse() * self * other

    def commutator(self, other: "Word") -> "Word":
        return self.inverse() * other.inverse() * self * other

    def symbols(self) -> frozenset[str]:
        return frozenset(s for s, _ in self.letters)

    def render(self) -> str:
        if not self.letters:
            return "()"
        parts = []
        i = 0
        while i < len(self.letters):
            sym, sign = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (sym, sign):
                j += 1
            count = (j - i) * sign
            parts.append(sym if count == 1 else f"{sym}^{count}")
            i = j
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Presentation:
    """Generators and defining relators."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        seen = set()
        for name in self.generators:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad generator name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate generator {name!r}")
            seen.add(name)
        for w in self.relators:
            stray = w.symbols() - seen
            if stray:
                raise ValueError(f"relator uses undeclared generators {sorted(stray)}")

    def render(self) -> str:
        gens = ", ".join(self.generators)
        if not self.relators:
            return f"< {gens} | >"
        rels = ", ".join(w.render() for w in self.relators)
        return f"< {gens} | {rels} >"

    def __str__(self) -> str:
        return self.render()


# -- parsing ------------------------------------------------------------------

_TOKEN_KINDS = {
    "<": "LANGLE",
    ">": "RANGLE",
    "|": "PIPE",
    ",": "COMMA",
    "^": "CARET",
    "[": "LBRACK",
    "]": "RBRACK",
    "(": "LPAREN",
    ")": "RPAREN",
    "*": "STAR",
}


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _TOKEN_KINDS:
            tokens.append(_Token(_TOKEN_KINDS[ch], ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("SYM", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line=line, column=col)
    tokens.append(_Token("EOF", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind}, found {tok.value!r}", line=tok.line, column=tok.column
            )
        return tok

    def fail(self, message: str) -> None:
        tok = self.peek()
        raise ParseError(message, line=tok.line, column=tok.column)

    def presentation(self) -> Presentation:
        self.expect("LANGLE")
        gens = [self.expect("SYM").value]
        while self.peek().kind == "COMMA":
            self.next()
            gens.append(self.expect("SYM").value)
        self.expect("PIPE")
        known = set(gens)
        if len(known) != len(gens):
            self.fail("duplicate generator")
        relators = []
        if self.peek().kind not in ("RANGLE",):
            relators.append(self.word(known))
            while self.peek().kind == "COMMA":
                self.next()
                relators.append(self.word(known))
        self.expect("RANGLE")
        self.expect("EOF")
        return Presentation(tuple(gens), tuple(relators))

    def word(self, known: set[str]) -> Word:
        result = self.term(known)
        while True:
            kind = self.peek().kind
            if kind == "STAR":
                self.next()
                result = result * self.term(known)
            elif kind in ("SYM", "LPAREN", "LBRACK"):
                result = result * self.term(known)
            else:
                return result

    def term(self, known: set[str]) -> Word:
        value = self.atom(known)
        while self.peek().kind == "CARET":
            self.next()
            tok = self.peek()
            if tok.kind == "INT":
                self.next()
                value = value ** tok.value
            elif tok.kind in ("SYM", "LPAREN", "LBRACK"):
                value = value.conjugate_by(self.atom(known))
            else:
                self.fail("expected an integer or a word after '^'")
        return value

    def atom(self, known: set[str]) -> Word:
        tok = self.next()
        if tok.kind == "SYM":
            if tok.value not in known:
                raise ParseError(
                    f"unknown generator {tok.value!r}", line=tok.line, column=tok.column
                )
            return Word.gen(tok.value)
        if tok.kind == "LPAREN":
            if self.peek().kind == "RPAREN":
                self.next()
                return Word()
            inner = self.word(known)
            self.expect("RPAREN")
            return inner
        if tok.kind == "LBRACK":
            left = self.word(known)
            self.expect("COMMA")
            right = self.word(known)
            self.expect("RBRACK")
            return left.commutator(right)
        raise ParseError(
            f"expected a generator, '(' or '[', found {tok.value!r}",
            line=tok.line,
            column=tok.column,
        )


def parse_presentation(text: str) -> Presentation:
    """Parse `< gens | relators >` text into a Presentation."""
    return _Parser(text).presentation()


# -- coset enumeration ----------------------------------------------------------


@dataclass(frozen=True)
class CosetTable:
    """A complete, audited, canonically numbered coset table."""

    presentation: Presentation
    subgroup: tuple[Word, ...]
    n: int
    rows: tuple[tuple[int, ...], ...]  # one row per coset, one entry per column
    status: str = "complete"
    _tree: dict[int, tuple[int, int, int] | None] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def ncols(self) -> int:
        return 2 * len(self.presentation.generators)

    def column(self, gen_index: int, sign: int = 1) -> np.ndarray:
        c = 2 * gen_index + (0 if sign > 0 else 1)
        return np.array([row[c] for row in self.rows], dtype=np.int32)

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "generators": list(self.presentation.generators),
            "subgroup": [w.render() for w in self.subgroup],
            "cosets": self.n,
            "table": [
                [row[2 * i] for i in range(len(self.presentation.generators))]
                for row in self.rows
            ],
        }

    def verify_complete(self) -> None:
        """Re-run the full relator audit; raises on any violation."""
        _audit_table(self)


class _Full(Exception):
    pass


def _compile_relators(
    presentation: Presentation, words: Sequence[Word]
) -> list[tuple[int, ...]]:
    index = {name: i for i, name in enumerate(presentation.generators)}
    out = []
    seen = set()
    for w in words:
        cols = tuple(2 * index[s] + (0 if sg > 0 else 1) for s, sg in w.letters)
        if cols and cols not in seen:
            seen.add(cols)
            out.append(cols)
    return out


class _Enumerator:
    def __init__(self, presentation: Presentation, subgroup: Sequence[Word], max_cosets: int):
        self.pres = presentation
        self.nc = 2 * len(presentation.generators)
        self.max = max_cosets
        self.tbl = array("i", [-1] * self.nc)
        self.p = array("i", [0])
        self.nrows = 1
        self.alive = 1
        self.relators = _compile_relators(presentation, presentation.relators)
        self.subgroup = _compile_relators(presentation, subgroup)

    def rep(self, k: int) -> int:
        p = self.p
        while p[k] != k:
            p[k] = p[p[k]]
            k = p[k]
        return k

    def _merge(self, a: int, b: int, queue: deque) -> None:
        a = self.rep(a)
        b = self.rep(b)
        if a != b:
            lo, hi = (a, b) if a < b else (b, a)
            self.p[hi] = lo
            self.alive -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: deque[int] = deque()
        self._merge(a, b, queue)
        tbl, nc = self.tbl, self.nc
        while queue:
            dead = queue.popleft()
            row = dead * nc
            for c in range(nc):
                d = tbl[row + c]
                if d < 0:
                    continue
                # remove the mirror entry pointing back at the dead coset
                tbl[d * nc + (c ^ 1)] = -1
                mu = self.rep(dead)
                nu = self.rep(d)
                e = tbl[mu * nc + c]
                if e >= 0:
                    self._merge(nu, e, queue)
                else:
                    e = tbl[nu * nc + (c ^ 1)]
                    if e >= 0:
                        self._merge(mu, e, queue)
                    else:
                        tbl[mu * nc + c] = nu
                        tbl[nu * nc + (c ^ 1)] = mu

    def define(self, coset: int, col: int) -> int:
        if self.nrows >= self.max:
            raise _Full
        beta = self.nrows
        self.tbl.extend([-1] * self.nc)
        self.p.append(beta)
        self.nrows += 1
        self.alive += 1
        self.tbl[coset * self.nc + col] = beta
        self.tbl[beta * self.nc + (col ^ 1)] = coset
        return beta

    def scan_and_fill(self, alpha: int, cols: tuple[int, ...]) -> None:
        tbl, nc = self.tbl, self.nc
        f = alpha
        i = 0
        b = alpha
        j = len(cols) - 1
        while True:
            while i <= j and tbl[f * nc + cols[i]] >= 0:
                f = tbl[f * nc + cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and tbl[b * nc + (cols[j] ^ 1)] >= 0:
                b = tbl[b * nc + (cols[j] ^ 1)]
                j -= 1
            if j < i:
                if f != b:
                    self.coincidence(f, b)
                return
            if j == i:
                tbl[f * nc + cols[i]] = b
                tbl[b * nc + (cols[i] ^ 1)] = f
                return
            self.define(f, cols[i])

    def compact(self, track: int) -> int:
        """Remove dead rows; returns the new index of the tracked live coset."""
        nc = self.nc
        mapping = array("i", [-1] * self.nrows)
        new = 0
        for i in range(self.nrows):
            if self.p[i] == i:
                mapping[i] = new
                new += 1
        fresh = array("i", [-1] * (new * nc))
        for i in range(self.nrows):
            if self.p[i] != i:
                continue
            src = i * nc
            dst = mapping[i] * nc
            for c in range(nc):
                v = self.tbl[src + c]
                if v >= 0:
                    fresh[dst + c] = mapping[self.rep(v)]
        tracked = mapping[self.rep(track)]
        self.tbl = fresh
        self.nrows = new
        self.alive = new
        self.p = array("i", range(new))
        return tracked

    def _room_or_compact(self, alpha: int) -> int:
        if self.alive == self.nrows:
            raise CapacityError(
                f"coset enumeration exceeded {self.max} cosets", count=self.max
            )
        return self.compact(alpha)

    def run(self) -> None:
        for w in self.subgroup:
            while True:
                try:
                    self.scan_and_fill(0, w)
                    break
                except _Full:
                    self._room_or_compact(0)
        alpha = 0
        while alpha < self.nrows:
            if self.p[alpha] != alpha:
                alpha += 1
                continue
            if self.nrows > 4096 and (self.nrows - self.alive) > 0.3 * self.nrows:
                alpha = self.compact(alpha)
            k = 0
            while k < len(self.relators):
                if self.p[alpha] != alpha:
                    break
                try:
                    self.scan_and_fill(alpha, self.relators[k])
                    k += 1
                except _Full:
                    alpha = self._room_or_compact(alpha)
            if self.p[alpha] == alpha:
                row = alpha * self.nc
                for c in range(self.nc):
                    if self.tbl[row + c] < 0:
                        while True:
                            try:
                                self.define(alpha, c)
                                break
                            except _Full:
                                alpha = self._room_or_compact(alpha)
                                row = alpha * self.nc
            alpha += 1

    def finish(self) -> tuple[int, array, dict[int, tuple[int, int, int] | None]]:
        """Compact, then renumber cosets by BFS from 0 over the columns in order."""
        self.compact(0)
        n, nc, tbl = self.nrows, self.nc, self.tbl
        order = array("i", [-1] * n)  # old -> new
        tree: dict[int, tuple[int, int, int] | None] = {0: None}
        order[0] = 0
        queue = deque([0])
        assigned = 1
        while queue:
            cur = queue.popleft()
            base = cur * nc
            for c in range(nc):
                v = tbl[base + c]
                if v >= 0 and order[v] < 0:
                    order[v] = assigned
                    tree[assigned] = (c // 2, 1 if c % 2 == 0 else -1, order[cur])
                    assigned += 1
                    queue.append(v)
        if assigned != n:
            raise IncompleteTableError("coset graph is not connected from coset 0")
        fresh = array("i", [-1] * (n * nc))
        for i in range(n):
            src = i * nc
            dst = order[i] * nc
            for c in range(nc):
                v = tbl[src + c]
                if v < 0:
                    raise IncompleteTableError("enumeration left an undefined entry")
                fresh[dst + c] = order[v]
        return n, fresh, tree


def _audit_table(table: CosetTable) -> None:
    n = table.n
    nc = table.ncols
    flat = np.array([v for row in table.rows for v in row], dtype=np.int32)
    cols = flat.reshape(n, nc)
    idx = np.arange(n, dtype=np.int32)
    # inverse-column consistency
    for c in range(nc):
        if not np.array_equal(cols[:, c ^ 1][cols[:, c]], idx):
            raise ConstructionError("table columns are not mutually inverse")
    for cs in _compile_relators(table.presentation, table.presentation.relators):
        v = idx
        for c in cs:
            v = cols[:, c][v]
        if not np.array_equal(v, idx):
            bad = int(np.nonzero(v != idx)[0][0])
            raise ConstructionError(f"relator fails at coset {bad}")
    for cs in _compile_relators(table.presentation, table.subgroup):
        v = 0
        for c in cs:
            v = int(cols[v, c])
        if v != 0:
            raise ConstructionError("subgroup word does not stabilize coset 0")


def todd_coxeter(
    presentation: Presentation,
    subgroup: Sequence[Word] = (),
    *,
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by the given words.

    Returns a complete table, renumbered canonically and audited against
    every relator at every coset; raises CapacityError if the enumeration
    needs more than max_cosets simultaneously live-plus-dead cosets even
    after compaction.
    """
    enum = _Enumerator(presentation, tuple(subgroup), max_cosets)
    enum.run()
    n, flat, tree = enum.finish()
    nc = enum.nc
    rows = tuple(tuple(flat[i * nc : (i + 1) * nc]) for i in range(n))
    table = CosetTable(
        presentation=presentation,
        subgroup=tuple(subgroup),
        n=n,
        rows=rows,
        _tree=tree,
    )
    _audit_table(table)
    return table


def regular_representation(table: CosetTable) -> tuple[PermGroup, dict[str, Perm]]:
    """Permutation group of a trivial-subgroup table, acting on its cosets.

    For an empty subgroup the audited table is the regular action of the
    presented group on itself, so the resulting group is certified to act
    freely and its order equals the number of cosets.
    """
    if table.subgroup:
        raise ValueError("regular representation needs a trivial subgroup")
    gens = []
    for i in range(len(table.presentation.generators)):
        images = np.fromiter((row[2 * i] for row in table.rows), dtype=np.int32, count=table.n)
        gens.append(Perm(images, _trusted=True))
    group = PermGroup._regular_from_edges(gens, table.n, dict(table._tree))
    gen_map = {name: gens[i] for i, name in enumerate(table.presentation.generators)}
    return group, gen_map
