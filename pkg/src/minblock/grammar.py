"""Dictionary grammars, their expansion, and the symbol-by-symbol encoding.

A dictionary grammar over terminals {1..m} is an ordered list of rules; rule
``i`` (1-based) defines symbol ``m + i`` and may only reference strictly
smaller symbols, so expansion always terminates.  The last rule is the
primary rule; expanding its symbol produces the grammar's output string.

The grammar is serialized rule by rule with :mod:`minblock.codes`: each rule
is the codewords of its symbols followed by the separator 0, and the whole
grammar ends with the terminator -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bits import BitReader, BitString, CorruptionError, ExpansionLimitError
from .codes import SymbolCode, decode_symbol, encode_symbol, symbol_length

Rule = tuple[int, ...]


def symbol_dtype(m: int):
    """Smallest unsigned dtype able to hold terminals 1..m."""
    return np.uint8 if m <= 0xFF else np.uint16


@dataclass(frozen=True)
class DictionaryGrammar:
    """Rule table; rule i defines symbol m+i, the last rule is primary."""

    m: int
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("alphabet size must be at least 1")
        rules = tuple(tuple(int(e) for e in rule) for rule in self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules:
            raise ValueError("a grammar needs at least a primary rule")
        for i, rule in enumerate(rules, start=1):
            sym = self.m + i
            for e in rule:
                if not 1 <= e < sym:
                    raise ValueError(
                        f"rule for symbol {sym} references {e}; "
                        "elements must be in 1..symbol-1"
                    )

    @property
    def num_rules(self) -> int:
        return len(self.rules)

    @property
    def primary_symbol(self) -> int:
        return self.m + len(self.rules)

    @property
    def primary(self) -> Rule:
        return self.rules[-1]


@dataclass(frozen=True)
class BlockGrammar:
    """Dictionary grammar whose secondary rules are all terminal k-blocks.

    The primary rule is ``head_len`` terminals, then rule references, then
    ``tail_len`` terminals, with both runs shorter than the block length.
    """

    base: DictionaryGrammar
    k: int
    head_len: int
    tail_len: int

    def __post_init__(self) -> None:
        g = self.base
        if self.k < 1:
            raise ValueError("block length must be >= 1")
        if not (0 <= self.head_len < self.k and 0 <= self.tail_len < self.k):
            raise ValueError("terminal runs must be shorter than the block length")
        for i, rule in enumerate(g.rules[:-1], start=1):
            if len(rule) != self.k or any(e > g.m for e in rule):
                raise ValueError(f"secondary rule {i} is not a terminal {self.k}-block")
        prim = g.primary
        if len(prim) < self.head_len + self.tail_len:
            raise ValueError("primary rule shorter than its terminal runs")
        mid = prim[self.head_len : len(prim) - self.tail_len]
        for e in prim[: self.head_len]:
            if e > g.m:
                raise ValueError("head run contains a nonterminal")
        for e in prim[len(prim) - self.tail_len :]:
            if e > g.m:
                raise ValueError("tail run contains a nonterminal")
        for e in mid:
            if e <= g.m:
                raise ValueError("terminal inside the reference run")

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def num_rules(self) -> int:
        return self.base.num_rules


def is_block_shaped(g: DictionaryGrammar) -> bool:
    """True if ``g`` fits the block shape (or is a bare terminal primary)."""
    secondary = g.rules[:-1]
    prim = g.primary
    if not secondary:
        return all(e <= g.m for e in prim)
    k = len(secondary[0])
    if k < 1 or any(len(r) != k or any(e > g.m for e in r) for r in secondary):
        return False
    if all(e <= g.m for e in prim):
        # nothing but terminal runs; they must split into head and tail < k
        return len(prim) <= 2 * (k - 1)
    head = 0
    while prim[head] <= g.m:
        head += 1
    tail = 0
    while prim[len(prim) - 1 - tail] <= g.m:
        tail += 1
    if head >= k or tail >= k:
        return False
    return all(e > g.m for e in prim[head : len(prim) - tail])


def expand(g: DictionaryGrammar, r: int, max_len: int | None = None) -> np.ndarray:
    """Terminal string produced by symbol ``r`` (terminals map to themselves).

    ``max_len`` guards against grammars whose expansion blows up (possible
    for hand-built or hostile rule tables; block grammars are linear).
    """
    if not 1 <= r <= g.primary_symbol:
        raise ValueError(f"symbol {r} out of range 1..{g.primary_symbol}")
    dtype = symbol_dtype(g.m)
    if r <= g.m:
        return np.array([r], dtype=dtype)

    # symbols actually contributing to the expansion of r
    reachable: set[int] = set()
    stack = [r]
    while stack:
        s = stack.pop()
        if s <= g.m or s in reachable:
            continue
        reachable.add(s)
        stack.extend(g.rules[s - g.m - 1])

    # lengths first: every reachable expansion is a substring of G'(r),
    # so checking the target length bounds them all
    lengths: dict[int, int] = {}
    for s in sorted(reachable):
        lengths[s] = sum(
            1 if e <= g.m else lengths[e] for e in g.rules[s - g.m - 1]
        )
    if max_len is not None and lengths[r] > max_len:
        raise ExpansionLimitError(
            f"expansion of symbol {r} has {lengths[r]} terminals (limit {max_len})"
        )

    expansions: dict[int, np.ndarray] = {}
    for s in sorted(reachable):
        parts = [
            np.array([e], dtype=dtype) if e <= g.m else expansions[e]
            for e in g.rules[s - g.m - 1]
        ]
        expansions[s] = (
            np.concatenate(parts) if parts else np.empty(0, dtype=dtype)
        )
    return expansions[r]


def encode_grammar(code: SymbolCode, g: DictionaryGrammar) -> BitString:
    """Emit the grammar: each rule's symbols then 0, and a final -1."""
    if code.m != g.m:
        raise ValueError("code and grammar disagree on the alphabet size")
    out = BitString()
    for rule in g.rules:
        for e in rule:
            encode_symbol(code, e, out)
        encode_symbol(code, 0, out)
    encode_symbol(code, -1, out)
    return out


def grammar_code_length(code: SymbolCode, g: DictionaryGrammar) -> int:
    """Exact bit length of :func:`encode_grammar` without building bits."""
    if code.m != g.m:
        raise ValueError("code and grammar disagree on the alphabet size")
    fl = code.fixed_len
    total = fl  # trailing terminator
    for rule in g.rules:
        total += fl  # rule separator
        for e in rule:
            total += symbol_length(code, e)
    return total


def decode_grammar(code: SymbolCode, bits: BitString | BitReader) -> DictionaryGrammar:
    """Inverse of :func:`encode_grammar`; validates structure while reading."""
    reader = bits if isinstance(bits, BitReader) else BitReader(bits)
    rules: list[Rule] = []
    current: list[int] = []
    while True:
        n = decode_symbol(code, reader)
        if n == 0:
            rules.append(tuple(current))
            current = []
        elif n == -1:
            if current:
                raise CorruptionError("grammar terminator inside a rule")
            if not rules:
                raise CorruptionError("grammar has no rules")
            break
        else:
            # the rule being read defines symbol m + len(rules) + 1
            if n >= code.m + len(rules) + 1:
                raise CorruptionError(
                    f"rule element {n} references its own or a later symbol"
                )
            current.append(n)
    if reader.remaining:
        raise CorruptionError("trailing bits after the grammar terminator")
    return DictionaryGrammar(code.m, tuple(rules))
