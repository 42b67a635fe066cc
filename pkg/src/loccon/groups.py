"""Group presentations: free groups (dense models of topologically finitely
generated profinite groups) and finite groups given by multiplication tables.

Words are tuples of (generator index, exponent sign); finite-group elements
are integers 0..order-1 with precomputed generator words from a breadth-first
search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from loccon.padic import DomainError


@dataclass(frozen=True)
class GroupPresentation:
    kind: str  # "free" | "finite"
    generators: tuple
    table: tuple | None = None       # finite: table[i][j] = product
    identity: int | None = None
    gen_elements: tuple | None = None  # finite: element index of each generator

    def __post_init__(self):
        if self.kind == "finite":
            self._validate_table()
        elif self.kind != "free":
            raise DomainError("group kind must be 'free' or 'finite'")

    def _validate_table(self):
        t = self.table
        n = len(t)
        if any(len(row) != n for row in t):
            raise DomainError("multiplication table must be square")
        e = self.identity
        if any(t[e][i] != i or t[i][e] != i for i in range(n)):
            raise DomainError("identity element does not act as identity")
        for i in range(n):
            if not any(t[i][j] == e and t[j][i] == e for j in range(n)):
                raise DomainError(f"element {i} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise DomainError("multiplication table is not associative")
        if self.gen_elements is None or len(self.gen_elements) != len(self.generators):
            raise DomainError("finite groups need one element index per generator")
        if len(self._bfs_words()) != n:
            raise DomainError("declared generators do not generate the group")

    # -- finite-group structure ------------------------------------------

    @property
    def order(self):
        if self.kind != "finite":
            raise DomainError("free groups have no order")
        return len(self.table)

    def multiply(self, a, b):
        return self.table[a][b]

    def inverse_element(self, a):
        e = self.identity
        for b in range(self.order):
            if self.table[a][b] == e:
                return b
        raise DomainError("no inverse found")

    def elements(self):
        return range(self.order)

    def _bfs_words(self):
        """Word in the generators for each reachable element."""
        e = self.identity
        words = {e: ()}
        frontier = [e]
        gens = list(self.gen_elements)
        inv = [self.inverse_element(g) for g in gens]
        while frontier:
            nxt = []
            for a in frontier:
                for gi, g in enumerate(gens):
                    for sign, gel in ((1, g), (-1, inv[gi])):
                        b = self.table[a][gel]
                        if b not in words:
                            words[b] = words[a] + ((gi, sign),)
                            nxt.append(b)
            frontier = nxt
        return words

    def element_words(self):
        return self._bfs_words()

    # -- word utilities ---------------------------------------------------

    def reduce_word(self, word):
        out = []
        for gi, s in word:
            if out and out[-1][0] == gi and out[-1][1] == -s:
                out.pop()
            else:
                out.append((gi, s))
        return tuple(out)

    def invert_word(self, word):
        return tuple((gi, -s) for gi, s in reversed(word))

    def words_up_to(self, cap, include_inverses=True):
        """All reduced words of length <= cap over the generators."""
        r = len(self.generators)
        letters = [(i, 1) for i in range(r)]
        if include_inverses:
            letters += [(i, -1) for i in range(r)]
        out = [()]
        frontier = [()]
        for _ in range(cap):
            nxt = []
            for w in frontier:
                for let in letters:
                    if w and w[-1] == (let[0], -let[1]):
                        continue
                    nxt.append(w + (let,))
            out.extend(nxt)
            frontier = nxt
        return out


def free_group(r):
    return GroupPresentation("free", tuple(f"g{i+1}" for i in range(r)))


def cyclic_group(n):
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return GroupPresentation("finite", ("g",), table, 0, (1 % n,))


def _perm_group(perms, gen_names, gen_perms):
    perms = sorted(perms)
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = tuple(
        tuple(index[tuple(perms[i][perms[j][k]] for k in range(len(perms[0])))]
              for j in range(n))
        for i in range(n))
    ident = index[tuple(range(len(perms[0])))]
    return GroupPresentation("finite", gen_names, table, ident,
                             tuple(index[p] for p in gen_perms))


def symmetric_group(n):
    if n > 4:
        raise DomainError("symmetric groups supported up to n = 4")
    perms = list(itertools.permutations(range(n)))
    transposition = tuple([1, 0] + list(range(2, n)))
    cycle = tuple(list(range(1, n)) + [0])
    return _perm_group(perms, ("s", "c"), (transposition, cycle))


def dihedral_group(n):
    """Symmetries of the regular n-gon, as permutations of vertices."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    perms = set()
    frontier = {tuple(range(n))}
    while frontier:
        nxt = set()
        for p in frontier:
            for q in (rot, ref):
                comp = tuple(p[q[i]] for i in range(n))
                if comp not in perms:
                    nxt.add(comp)
            perms.add(p)
        frontier = nxt - perms
    return _perm_group(perms, ("r", "f"), (rot, ref))
