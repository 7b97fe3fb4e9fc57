"""Tokenization and single-pass corpus statistics.

A word is a maximal run of Unicode alphanumeric characters (``str.isalnum``),
lowercased; everything else separates words.  This is a fixed, documented
choice made for reproducibility and is reported as ``TOKENIZER`` in outputs.
"""
from __future__ import annotations

import re
import sys
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping

import numpy as np

from .numerics import DomainError
from .simulate import GrowthCurve

TOKENIZER = "lower-alnum-runs"
_WORD = re.compile(r"[^\W_]+")
_REPLACEMENT_UTF8 = "\ufffd".encode("utf-8")


@dataclass
class TokenizeDiagnostics:
    lines: int = 0
    tokens: int = 0
    invalid_utf8: int = 0  # characters substituted with U+FFFD


@dataclass(frozen=True)
class RankFrequency:
    """Token counts ordered by count descending, then token ascending."""

    entries: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        entries = tuple((str(t), int(c)) for t, c in self.entries)
        if len({t for t, _ in entries}) != len(entries):
            raise DomainError("tokens must be unique")
        if any(c < 1 for _, c in entries):
            raise DomainError("counts must be positive")
        if list(entries) != sorted(entries, key=_rank_key):
            raise DomainError("entries must be sorted by (-count, token)")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "RankFrequency":
        return cls(tuple(sorted(counts.items(), key=_rank_key)))

    @property
    def counts(self) -> np.ndarray:
        return np.array([c for _, c in self.entries], dtype=np.int64)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def __len__(self):
        return len(self.entries)


def _rank_key(item):
    return (-item[1], item[0])


def _decode(line, diagnostics):
    if isinstance(line, str):
        return line
    text = line.decode("utf-8", errors="replace")
    if diagnostics is not None and "\ufffd" in text:
        diagnostics.invalid_utf8 += text.count("\ufffd") - line.count(_REPLACEMENT_UTF8)
    return text


def _lines(source) -> Iterator[str | bytes]:
    if isinstance(source, (str, bytes)):
        # literal content, never a path
        yield from source.splitlines()
    else:
        yield from source


def tokenize(
    source: str | bytes | IO | Iterable[str | bytes],
    diagnostics: TokenizeDiagnostics | None = None,
) -> Iterator[str]:
    """Yield lowercase word tokens from text, bytes, a file or an iterable of lines.

    Bytes are decoded as UTF-8; undecodable sequences become U+FFFD (a
    separator) and are counted in ``diagnostics.invalid_utf8``.
    """
    for line in _lines(source):
        text = _decode(line, diagnostics)
        if diagnostics is not None:
            diagnostics.lines += 1
        for match in _WORD.finditer(text):
            if diagnostics is not None:
                diagnostics.tokens += 1
            yield match.group().lower()


def tokenize_paths(paths, diagnostics=None) -> Iterator[str]:
    """Tokens from each path in turn; ``-`` is standard input."""
    for path in paths:
        if path == "-":
            yield from tokenize(sys.stdin.buffer, diagnostics)
        else:
            with open(path, "rb") as fh:
                yield from tokenize(fh, diagnostics)


def analyze_stream(tokens: Iterable, checkpoints="doubling") -> tuple[GrowthCurve, RankFrequency]:
    """One pass over ``tokens``: growth curve plus rank-frequency table.

    With the default ``"doubling"`` policy the curve is sampled at
    m = 1, 2, 4, ... and at the final token count.  An explicit sorted
    iterable of token counts may be given instead (the final count is still
    appended).
    """
    if checkpoints == "doubling":
        explicit = None
    else:
        explicit = sorted(set(int(c) for c in checkpoints))
    counts: Counter = Counter()
    points = []
    m = 0
    next_cp = 1
    cp_iter = iter(explicit) if explicit is not None else None
    if cp_iter is not None:
        next_cp = next(cp_iter, None)
    for tok in tokens:
        counts[str(tok)] += 1
        m += 1
        if m == next_cp:
            points.append((m, len(counts)))
            next_cp = 2 * m if cp_iter is None else next(cp_iter, None)
    if m and (not points or points[-1][0] != m):
        points.append((m, len(counts)))
    return GrowthCurve(tuple(points)), RankFrequency.from_counts(counts)


def rank_frequency_from_ranks(ranks) -> RankFrequency:
    """Rank table for a sampled text, tokens being the rank numbers as strings."""
    values, counts = np.unique(np.asarray(ranks), return_counts=True)
    return RankFrequency.from_counts({str(v): int(c) for v, c in zip(values, counts)})
