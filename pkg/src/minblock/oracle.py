"""Brute-force references for the test suite.

Everything here re-derives results the fast paths compute cleverly:
the minimum emission size by enumerating whole grammars and materializing
their bits, and the additive universality bound evaluated from first
principles.  Nothing in this module is needed at run time.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .codes import SymbolCode
from .grammar import DictionaryGrammar, encode_grammar

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationBudget:
    """Caps keeping exhaustive enumeration tractable."""

    max_n: int = 10
    max_distinct: int = 6  # identifier assignments enumerated: max_distinct!
    max_k: int | None = None


def _assignment_grammar(m: int, head, blocks, occ_index, tail, perm) -> DictionaryGrammar:
    """Grammar giving block j the identifier m+1+perm[j]."""
    rules: list[tuple[int, ...]] = [()] * len(blocks)
    for j, block in enumerate(blocks):
        rules[perm[j]] = block
    primary = tuple(head) + tuple(m + 1 + perm[j] for j in occ_index) + tuple(tail)
    return DictionaryGrammar(m, tuple(rules) + (primary,))


def brute_force_min_block(code: SymbolCode, u, budget: EnumerationBudget | None = None) -> int:
    """True minimum emission size over every block grammar producing ``u``.

    Enumerates every block length, phase, and identifier permutation, plus
    the bare terminal grammar, and scores each candidate by materializing
    its bits with the grammar encoder (deliberately not reusing any closed
    form from the fast path).
    """
    if budget is None:
        budget = EnumerationBudget()
    u = [int(x) for x in np.asarray(u).ravel()] if not isinstance(u, list) else [int(x) for x in u]
    n = len(u)
    if n > budget.max_n:
        raise ValueError(f"string length {n} exceeds the enumeration budget {budget.max_n}")
    m = code.m

    best = len(encode_grammar(code, DictionaryGrammar(m, (tuple(u),))))
    kcap = n if budget.max_k is None else min(n, budget.max_k)
    for k in range(1, kcap + 1):
        for l in range(0, min(k, n - k + 1)):
            p = (n - l) // k
            head = u[:l]
            tail = u[l + p * k :]
            parsed = [tuple(u[l + i * k : l + (i + 1) * k]) for i in range(p)]
            blocks = sorted(set(parsed))
            if len(blocks) > budget.max_distinct:
                raise ValueError(
                    f"{len(blocks)} distinct blocks exceed the enumeration "
                    f"budget {budget.max_distinct}"
                )
            occ_index = [blocks.index(b) for b in parsed]
            for perm in itertools.permutations(range(len(blocks))):
                g = _assignment_grammar(m, head, blocks, occ_index, tail, perm)
                best = min(best, len(encode_grammar(code, g)))
    return best


def universality_bound(code: SymbolCode, x, k: int, pi: Mapping) -> float:
    """Additive bound that every emission of the transform must respect.

    Returns ``C(n, k) - (1/k) * sum_i log2 pi(block_i)`` over the n-k+1
    overlapping k-blocks of ``x``, where::

        C(k)    = (m**k * (k+1) + 2k + 2) * fixed_len
        C(n, k) = C(k) + (n/k) * (2*log2(k*log2 m) + length_bound_constant)

    A block of ``x`` with zero probability makes the bound vacuous (+inf).
    """
    if k < 1:
        raise ValueError("block length must be >= 1")
    x = [int(s) for s in np.asarray(x).ravel()]
    n = len(x)
    if k > n:
        raise ValueError("block length exceeds the string")
    m = code.m
    fl = code.fixed_len
    c_k = (m**k * (k + 1) + 2 * k + 2) * fl
    c_nk = c_k + (n / k) * (2 * math.log2(k * math.log2(m)) + code.length_bound_constant)
    total = 0.0
    for i in range(n - k + 1):
        p = float(pi.get(tuple(x[i : i + k]), 0.0))
        if p <= 0.0:
            log.info("zero-probability block at position %d: bound is vacuous", i)
            return math.inf
        total += math.log2(p)
    return c_nk - total / k
