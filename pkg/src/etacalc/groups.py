"""Concrete finite groups as multiplication tables, plus stock constructions.

A TableGroup is the packed form every construction in this package starts
from: elements are indices 0..n-1, the table holds products left-to-right
(table[a][b] is a*b), and validation proves the axioms outright (Latin
square, two-sided identity, associativity) rather than trusting the caller.

The builtin registry pins down small named groups with fixed element
orderings and labels, so anything derived from them (presentations, coset
tables, reports) is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .abelian import AbelianInvariants, invariants_from_element_orders, pi_set
from .errors import CapacityError
from .fpgroup import Presentation, Word
from .perm import Perm, PermGroup

__all__ = [
    "TableGroup",
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric3",
    "alternating4",
    "direct_product",
    "builtin",
    "builtin_names",
    "table_from_permgroup",
    "regular_permgroup",
    "cayley_presentation",
]

_VALIDATION_SIZE_LIMIT = 512


class TableGroup:
    """A finite group given by its full multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
        arr = np.asarray(table, dtype=np.int32)
        n = arr.shape[0] if arr.ndim == 2 else 0
        if arr.ndim != 2 or arr.shape != (n, n) or n == 0:
            raise ValueError("multiplication table must be square and non-empty")
        if n > _VALIDATION_SIZE_LIMIT:
            raise CapacityError(
                f"table groups above {_VALIDATION_SIZE_LIMIT} elements are not supported",
                count=n,
            )
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("table entries must be element indices")
        ident = np.arange(n, dtype=np.int32)
        for i in range(n):
            if not np.array_equal(np.sort(arr[i]), ident):
                raise ValueError(f"row {i} is not a permutation of the elements")
            if not np.array_equal(np.sort(arr[:, i]), ident):
                raise ValueError(f"column {i} is not a permutation of the elements")
        e = None
        for i in range(n):
            if np.array_equal(arr[i], ident) and np.array_equal(arr[:, i], ident):
                e = i
                break
        if e is None:
            raise ValueError("table has no two-sided identity")
        for a in range(n):
            left = arr[arr[a]]          # left[b, c] = (a*b)*c
            right = arr[a][arr]         # right[b, c] = a*(b*c)
            if not np.array_equal(left, right):
                bad = np.argwhere(left != right)[0]
                raise ValueError(
                    f"associativity fails at ({a}, {int(bad[0])}, {int(bad[1])})"
                )
        if labels is None:
            labels = tuple("e" if i == e else f"x{i}" for i in range(n))
        else:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n or len(set(labels)) != n:
                raise ValueError("labels must be distinct and match the table size")
        self.table = arr
        self.table.setflags(write=False)
        self.labels = labels
        self.n = n
        self.identity = e
        inv = np.empty(n, dtype=np.int32)
        for a in range(n):
            inv[a] = int(np.nonzero(arr[a] == e)[0][0])
        inv.setflags(write=False)
        self.inverse_table = inv

    # -- element arithmetic -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def conj(self, a: int, b: int) -> int:
        """a^b = b^-1 a b."""
        return self.mul(self.mul(self.inv(b), a), b)

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        result = self.identity
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def element_order(self, a: int) -> int:
        k = 1
        cur = a
        while cur != self.identity:
            cur = self.mul(cur, a)
            k += 1
        return k

    def elements(self) -> range:
        return range(self.n)

    def non_identity(self) -> list[int]:
        return [i for i in range(self.n) if i != self.identity]

    # -- subgroup machinery ---------------------------------------------------

    def subgroup_closure(self, seed: Iterable[int]) -> tuple[int, ...]:
        members = {self.identity}
        queue = [self.identity]
        gens = sorted(set(int(x) for x in seed))
        for g in gens:
            if not (0 <= g < self.n):
                raise ValueError(f"element index {g} out of range")
        i = 0
        while i < len(queue):
            x = queue[i]
            i += 1
            for g in gens:
                y = self.mul(x, g)
                if y not in members:
                    members.add(y)
                    queue.append(y)
        return tuple(sorted(members))

    def generating_subset(self) -> tuple[int, ...]:
        """Small generating set, chosen greedily over ascending element indices."""
        gens: list[int] = []
        current = (self.identity,)
        for x in range(self.n):
            if x not in current:
                gens.append(x)
                current = self.subgroup_closure(gens)
                if len(current) == self.n:
                    break
        return tuple(gens)

    def is_subgroup(self, members: Iterable[int]) -> bool:
        mset = set(int(x) for x in members)
        if self.identity not in mset:
            return False
        return all(self.mul(a, b) in mset for a in mset for b in mset)

    def is_normal(self, members: Iterable[int]) -> bool:
        mset = set(int(x) for x in members)
        if not self.is_subgroup(mset):
            return False
        return all(self.conj(a, g) in mset for a in mset for g in range(self.n))

    def derived_indices(self) -> tuple[int, ...]:
        comms = {self.comm(a, b) for a in range(self.n) for b in range(self.n)}
        return self.subgroup_closure(comms)

    def center_indices(self) -> tuple[int, ...]:
        return tuple(
            a
            for a in range(self.n)
            if all(self.mul(a, b) == self.mul(b, a) for b in range(self.n))
        )

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def abelian_invariants(self) -> AbelianInvariants:
        derived = set(self.derived_indices())
        reps = sorted(
            {min(self.mul(x, d) for d in derived) for x in range(self.n)}
        )
        orders = []
        for r in reps:
            cur = r
            k = 1
            while cur not in derived:
                cur = self.mul(cur, r)
                k += 1
            orders.append(k)
        return invariants_from_element_orders(orders)

    def pi(self) -> frozenset[int]:
        return pi_set(self.n)

    # -- serialization -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "schema": 1,
            "labels": list(self.labels),
            "table": [[int(v) for v in row] for row in self.table],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "TableGroup":
        if not isinstance(data, dict) or data.get("schema") != 1:
            raise ValueError('expected an object with "schema": 1')
        if "table" not in data:
            raise ValueError('missing "table"')
        group = cls(data["table"], data.get("labels"))
        if group.identity == 0:
            return group
        # renumber so the identity sits at index 0, keeping the rest in order
        order = [group.identity] + [i for i in range(group.n) if i != group.identity]
        pos = {old: new for new, old in enumerate(order)}
        table = [
            [pos[int(group.table[a, b])] for b in order] for a in order
        ]
        return cls(table, [group.labels[i] for i in order])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TableGroup):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.labels, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"TableGroup(order={self.n})"


# -- stock constructions -----------------------------------------------------------


def cyclic(n: int) -> TableGroup:
    """Cyclic group of order n; element k is g^k, label e, g1, ..."""
    if n < 1:
        raise ValueError("order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    labels = ["e"] + [f"g{k}" for k in range(1, n)]
    return TableGroup(table, labels)


def dihedral(order: int) -> TableGroup:
    """Dihedral group of the given (even, >= 4) order.

    Element i < m is the rotation r^i; element m + i is the reflection r^i s.
    """
    if order < 4 or order % 2:
        raise ValueError("dihedral groups here have even order >= 4")
    m = order // 2

    def idx(rot: int, flip: int) -> int:
        return rot % m + (m if flip else 0)

    table = [[0] * order for _ in range(order)]
    for i in range(m):
        for f1 in (0, 1):
            for j in range(m):
                for f2 in (0, 1):
                    # (r^i s^f1)(r^j s^f2): moving s^f1 across r^j flips its sign
                    rot = (i + (j if not f1 else -j)) % m
                    table[idx(i, f1)][idx(j, f2)] = idx(rot, f1 ^ f2)
    labels = (
        ["e"]
        + [f"r{i}" for i in range(1, m)]
        + ["s"]
        + [f"sr{i}" for i in range(1, m)]
    )
    return TableGroup(table, labels)


def quaternion8() -> TableGroup:
    """Quaternion group on the unit labels 1, -1, i, -i, j, -j, k, -k."""
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("i", "i"): "-1",
        ("j", "j"): "-1",
        ("k", "k"): "-1",
        ("i", "j"): "k",
        ("j", "k"): "i",
        ("k", "i"): "j",
        ("j", "i"): "-k",
        ("k", "j"): "-i",
        ("i", "k"): "-j",
    }

    def mul(a: str, b: str) -> str:
        sign = 1
        if a.startswith("-"):
            sign, a = -sign, a[1:]
        if b.startswith("-"):
            sign, b = -sign, b[1:]
        if a == "1":
            out = b
        elif b == "1":
            out = a
        else:
            out = base[(a, b)]
        if out.startswith("-"):
            sign, out = -sign, out[1:]
        return out if sign > 0 else f"-{out}"

    index = {u: i for i, u in enumerate(units)}
    table = [[index[mul(a, b)] for b in units] for a in units]
    return TableGroup(table, units)


def _perm_label(images: tuple[int, ...]) -> str:
    p = Perm(list(images))
    cyc = p.cycles()
    if not cyc:
        return "e"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cyc)


def _group_of_perms(images_list: list[tuple[int, ...]]) -> TableGroup:
    index = {imgs: i for i, imgs in enumerate(images_list)}
    degree = len(images_list[0])
    table = [
        [index[tuple(b[a[x]] for x in range(degree))] for b in images_list]
        for a in images_list
    ]
    return TableGroup(table, [_perm_label(imgs) for imgs in images_list])


def symmetric3() -> TableGroup:
    """All permutations of {0,1,2} in lexicographic order of their images."""
    return _group_of_perms(sorted(permutations(range(3))))


def alternating4() -> TableGroup:
    """Even permutations of {0,1,2,3} in lexicographic order of their images."""
    evens = []
    for images in sorted(permutations(range(4))):
        inversions = sum(
            1
            for x in range(4)
            for y in range(x + 1, 4)
            if images[x] > images[y]
        )
        if inversions % 2 == 0:
            evens.append(images)
    return _group_of_perms(evens)


def direct_product(a: TableGroup, b: TableGroup) -> TableGroup:
    """Direct product on lexicographic pairs: index = i_a * |b| + i_b."""
    n, m = a.n, b.n
    table = [
        [
            int(a.table[x // m, y // m]) * m + int(b.table[x % m, y % m])
            for y in range(n * m)
        ]
        for x in range(n * m)
    ]
    labels = [f"({a.labels[x // m]},{b.labels[x % m]})" for x in range(n * m)]
    return TableGroup(table, labels)


def _builtin_factories() -> dict[str, object]:
    factories: dict[str, object] = {}
    for k in range(1, 13):
        factories[f"c{k}"] = (lambda kk: (lambda: cyclic(kk)))(k)
    factories["c2xc2"] = lambda: direct_product(cyclic(2), cyclic(2))
    factories["v4"] = factories["c2xc2"]
    factories["c2xc4"] = lambda: direct_product(cyclic(2), cyclic(4))
    factories["c2xc6"] = lambda: direct_product(cyclic(2), cyclic(6))
    factories["d6"] = lambda: dihedral(6)
    factories["d8"] = lambda: dihedral(8)
    factories["d10"] = lambda: dihedral(10)
    factories["d12"] = lambda: dihedral(12)
    factories["q8"] = quaternion8
    factories["s3"] = symmetric3
    factories["a4"] = alternating4
    return factories


_BUILTINS = _builtin_factories()


def builtin(name: str) -> TableGroup:
    """Named stock group; lookup is case-insensitive."""
    key = name.lower()
    if key not in _BUILTINS:
        raise ValueError(
            f"unknown builtin group {name!r}; known: {', '.join(builtin_names())}"
        )
    return _BUILTINS[key]()


def builtin_names() -> list[str]:
    skip = {"v4"}
    return sorted(k for k in _BUILTINS if k not in skip)


def table_from_permgroup(group: PermGroup) -> TableGroup:
    """Multiplication table of a permutation group, identity listed first.

    Elements after the identity are ordered lexicographically by their image
    tuples, so the table does not depend on how the group was generated.
    """
    elems = sorted(group.elements(), key=lambda p: tuple(p.as_list()))
    ident = Perm.identity(group.degree)
    elems.remove(ident)
    elems.insert(0, ident)
    key = {p._key(): i for i, p in enumerate(elems)}
    table = [[key[(a * b)._key()] for b in elems] for a in elems]
    labels = []
    for p in elems:
        cyc = p.cycles()
        labels.append(
            "e" if not cyc else "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        )
    return TableGroup(table, labels)


def regular_permgroup(group: TableGroup) -> tuple[PermGroup, list[Perm]]:
    """Right-regular action of a table group on itself, certified free.

    Returns the permutation group and the list mapping each element index to
    its permutation (the identity element maps to the identity permutation).
    """
    if group.identity != 0:
        raise ValueError("regular action expects the identity at index 0")
    perms = [Perm(group.table[:, a].copy(), _trusted=True) for a in range(group.n)]
    gens = [perms[a] for a in group.non_identity()]
    edges: dict[int, tuple[int, int, int] | None] = {0: None}
    for slot, a in enumerate(group.non_identity()):
        edges[a] = (slot, 1, 0)
    reg = PermGroup._regular_from_edges(gens, group.n, edges)
    return reg, perms


def cayley_presentation(group: TableGroup) -> Presentation:
    """Presentation with one generator per non-identity element.

    The relators are all products x_i x_j = x_(i*j) over non-identity pairs;
    a product landing on the identity contributes the two-letter relator.
    """
    symbols = {a: f"x{a}" for a in group.non_identity()}

    def word_of(a: int) -> Word:
        return Word() if a == group.identity else Word.gen(symbols[a])

    relators = []
    for a in group.non_identity():
        for b in group.non_identity():
            relators.append(
                word_of(a) * word_of(b) * word_of(group.mul(a, b)).inverse()
            )
    return Presentation(tuple(symbols.values()), tuple(relators))
