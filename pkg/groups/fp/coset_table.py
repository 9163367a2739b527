"""
Todd-Coxeter coset enumeration (HLT with lookahead).

Column ``2k`` of the table holds the action of the k-th generator, column
``2k + 1`` that of its inverse. Undefined entries are -1.
"""

import logging
from collections import deque
from typing import Deque, Dict, List, Optional, Sequence

import numpy as np

from ..conf import get_limit
from ..exceptions import ConsistencyError, CosetLimitError, WordSyntaxError
from ..perm import Permutation
from .words import Presentation, Word

logger = logging.getLogger(__name__)


class _OutOfSpace(Exception):
    pass


class CosetTable:
    """
    Coset table for the action of a finitely presented group on the cosets
    of a subgroup.

    Built by ``coset_enumerate``; once ``status`` is ``complete`` the table is
    compressed, standardized and treated as immutable.
    """

    def __init__(self, presentation: Presentation, subgroup_words: Sequence[Word], max_cosets: int):
        if max_cosets < 1:
            raise ValueError(f"max_cosets must be positive, got {max_cosets}")
        self.presentation = presentation
        self.first = presentation.generators.start
        self.columns = 2 * presentation.generator_count
        self.max_cosets = max_cosets
        self.table: List[List[int]] = [[-1] * self.columns]
        self.p: List[int] = [0]
        self.relators = [self._columns_of(w) for w in presentation.all_relators]
        self.subgroup = [self._columns_of(w) for w in subgroup_words]
        self.status = "incomplete"
        self.stats: Dict[str, int] = {"defined": 1, "max_rows": 1, "lookaheads": 0}

    def _columns_of(self, w: Word) -> List[int]:
        cols = []
        for g, e in w.expand():
            k = g - self.first
            if not 0 <= k < self.columns // 2:
                raise WordSyntaxError(f"generator {g} outside the presentation")
            cols.append(2 * k if e > 0 else 2 * k + 1)
        return cols

    # -- primitive operations -------------------------------------------

    def _define(self, alpha: int, x: int):
        if len(self.table) >= self.max_cosets:
            raise _OutOfSpace()
        beta = len(self.table)
        self.table.append([-1] * self.columns)
        self.p.append(beta)
        self.table[alpha][x] = beta
        self.table[beta][x ^ 1] = alpha
        self.stats["defined"] += 1
        self.stats["max_rows"] = max(self.stats["max_rows"], len(self.table))

    def _rep(self, k: int) -> int:
        p = self.p
        lam = k
        rho = p[lam]
        while rho != lam:
            lam = rho
            rho = p[lam]
        mu = k
        rho = p[mu]
        while rho != lam:
            p[mu] = lam
            mu = rho
            rho = p[mu]
        return lam

    def _merge(self, k: int, lam: int, queue: Deque[int]):
        phi = self._rep(k)
        psi = self._rep(lam)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.p[v] = mu
            queue.append(v)

    def _coincidence(self, alpha: int, beta: int):
        table = self.table
        queue: Deque[int] = deque()
        self._merge(alpha, beta, queue)
        while queue:
            gamma = queue.popleft()
            for x in range(self.columns):
                delta = table[gamma][x]
                if delta < 0:
                    continue
                table[delta][x ^ 1] = -1
                mu = self._rep(gamma)
                nu = self._rep(delta)
                if table[mu][x] >= 0:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    self._merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def _scan(self, alpha: int, word: List[int], fill: bool):
        table = self.table
        f = b = alpha
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] >= 0:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            if not fill:
                return
            self._define(f, word[i])

    def live(self) -> List[int]:
        return [a for a in range(len(self.p)) if self.p[a] == a]

    def _lookahead(self):
        """Scan every relator at every live coset without defining anything."""
        self.stats["lookaheads"] += 1
        for beta in range(len(self.p)):
            if self.p[beta] != beta:
                continue
            for w in self.relators:
                self._scan(beta, w, fill=False)
                if self.p[beta] != beta:
                    break

    def _compress(self) -> Dict[int, int]:
        """Drop dead cosets keeping the order of the live ones; returns old -> new."""
        live = self.live()
        new_index = {a: k for k, a in enumerate(live)}
        table = []
        for a in live:
            row = self.table[a]
            table.append([new_index[self._rep(b)] if b >= 0 else -1 for b in row])
        self.table = table
        self.p = list(range(len(live)))
        return new_index

    def _standardize(self):
        """Renumber cosets in order of first appearance scanning rows left to right."""
        order = [0]
        seen = {0: 0}
        k = 0
        while k < len(order):
            row = self.table[order[k]]
            for x in range(self.columns):
                b = row[x]
                if b >= 0 and b not in seen:
                    seen[b] = len(order)
                    order.append(b)
            k += 1
        self.table = [[seen[b] for b in self.table[a]] for a in order]
        self.p = list(range(len(order)))

    # -- driver -----------------------------------------------------------

    def _process(self, alpha: int):
        for w in self.relators:
            self._scan(alpha, w, fill=True)
            if self.p[alpha] < alpha:
                return
        if self.p[alpha] == alpha:
            for x in range(self.columns):
                if self.table[alpha][x] < 0:
                    self._define(alpha, x)

    def _recover(self, alpha: int) -> int:
        """Lookahead and compress; returns the new position of the HLT pointer."""
        before = len(self.table)
        self._lookahead()
        live_before_alpha = sum(1 for a in range(alpha) if self.p[a] == a)
        self._compress()
        logger.debug(f"Lookahead reclaimed {before - len(self.table)} of {before} rows")
        if len(self.table) >= self.max_cosets:
            raise CosetLimitError(
                f"Coset enumeration exceeded {self.max_cosets} cosets",
                {
                    "cap": self.max_cosets,
                    "defined": self.stats["defined"],
                    "live": len(self.table),
                    "max_rows": self.stats["max_rows"],
                    "lookaheads": self.stats["lookaheads"],
                },
            )
        return live_before_alpha

    def run(self) -> "CosetTable":
        for w in self.subgroup:
            while True:
                try:
                    self._scan(0, w, fill=True)
                    break
                except _OutOfSpace:
                    self._recover(0)
        for _ in range(3):
            alpha = 0
            while alpha < len(self.table):
                if self.p[alpha] == alpha:
                    try:
                        self._process(alpha)
                    except _OutOfSpace:
                        alpha = self._recover(alpha)
                        continue
                alpha += 1
            self._compress()
            if all(b >= 0 for row in self.table for b in row):
                break
            logger.debug("Entries were cleared by late coincidences, scanning again")
        else:
            raise ConsistencyError("Coset table finished with undefined entries", dict(self.stats))
        self._standardize()
        if not self.scans_closed():
            raise ConsistencyError("A relator does not close on the finished table", dict(self.stats))
        self.status = "complete"
        self.stats["index"] = len(self.table)
        logger.debug(f"Coset enumeration complete: index {len(self.table)}, {self.stats['defined']} cosets defined")
        return self

    # -- queries ----------------------------------------------------------

    @property
    def index(self) -> int:
        return len(self.table)

    @property
    def rows(self) -> List[List[int]]:
        return self.table

    def is_complete(self) -> bool:
        return self.status == "complete"

    def scans_closed(self) -> bool:
        """Every relator closes at every coset without deduction."""
        for alpha in range(len(self.table)):
            for w in self.relators:
                f = alpha
                for x in w:
                    f = self.table[f][x]
                if f != alpha:
                    return False
        return True


def coset_enumerate(
    presentation: Presentation,
    subgroup_words: Sequence[Word] = (),
    max_cosets: Optional[int] = None,
) -> CosetTable:
    """
    Enumerate the cosets of the subgroup generated by ``subgroup_words``.

    Args:
        presentation: Relators of the group
        subgroup_words: Generators of the subgroup (empty for the regular action)
        max_cosets: Row cap; defaults to the MAX_COSETS setting

    Returns:
        Complete, standardized CosetTable

    Raises:
        CosetLimitError: the cap was reached even after lookahead
    """
    if max_cosets is None:
        max_cosets = get_limit("MAX_COSETS")
    table = CosetTable(presentation, subgroup_words, max_cosets).run()
    logger.info(f"Enumerated {table.index} cosets for a rank {presentation.rank} {presentation.kind} presentation")
    return table


def perm_rep(table: CosetTable) -> List[Permutation]:
    """One permutation per generator, acting on the cosets."""
    if not table.is_complete():
        raise ValueError("Coset table is not complete")
    rows = np.asarray(table.rows, dtype=np.intp)
    perms = [Permutation(rows[:, 2 * k]) for k in range(table.columns // 2)]
    first = table.first
    for w in table.presentation.all_relators:
        if not evaluate(w, perms, first=first).is_identity():
            raise ConsistencyError(
                "Relator does not evaluate to the identity on the coset action",
                {"relator": [list(letter) for letter in w.letters], "index": table.index},
            )
    return perms


def evaluate(w: Word, gens: Sequence[Permutation], first: int = 1) -> Permutation:
    """
    Evaluate a word on permutations, reading left to right.

    ``gens[0]`` is the image of generator number ``first``.
    """
    if not gens:
        raise ValueError("No generator images given")
    result = Permutation.identity(gens[0].degree)
    for g, e in w.letters:
        k = g - first
        if not 0 <= k < len(gens):
            raise WordSyntaxError(f"generator {g} has no image among {len(gens)} permutations")
        result = result * gens[k] ** e
    return result
