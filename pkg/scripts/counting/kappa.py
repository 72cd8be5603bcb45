#!/usr/bin/env python3
"""
Counting numbers kappa_k(n) of connected labeled k-maps and the reference
tables they are checked against.

    F^(k)(t) = -sum_n prod_j (-t_2j)^(n_j) / n_j!  kappa_k(n)
"""

import itertools
import logging
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import Dict, Iterator, Sequence, Tuple

import pandas as pd
import sympy as sp

from scripts.config import REFERENCE_DIR
from scripts.errors import KappaIntegrityError, PotentialFormatError, UsageError

logger = logging.getLogger(__name__)

Key = Tuple[int, Tuple[int, ...]]


def exponent_vectors(width: int, cap: int) -> Iterator[Tuple[int, ...]]:
    """All vectors in {0..cap}^width in lexicographic order."""
    return itertools.product(range(cap + 1), repeat=width)


def extract_kappa(taylor: Dict[Tuple[int, ...], sp.Rational], k: int,
                  valences: Sequence[int], vertex_cap: int) -> Dict[Key, int]:
    """
    kappa_k(n) = -(prod n_j!) (-1)^(sum n_j) [t^n] F^(k) for every n with
    n_j <= vertex_cap; entries must be nonnegative integers.
    """
    width = len(valences)
    rows: Dict[Key, int] = {}
    for n in exponent_vectors(width, vertex_cap):
        coefficient = sp.Rational(taylor.get(n, 0))
        if not any(n):
            if coefficient != 0:
                raise KappaIntegrityError(f"F^({k}) has a constant Taylor term {coefficient}")
            rows[(k, n)] = 0
            continue
        weight = 1
        for e in n:
            weight *= factorial(e)
        value = -weight * (-1) ** sum(n) * coefficient
        if not value.is_integer:
            raise KappaIntegrityError(f"kappa_{k}{n} = {value} is not an integer")
        if value < 0:
            raise KappaIntegrityError(f"kappa_{k}{n} = {value} is negative")
        rows[(k, n)] = int(value)
    return rows


@dataclass
class KappaTable:
    """kappa_k(n) for k <= genus_max and n_j <= vertex_cap."""
    valences: Tuple[int, ...]
    genus_max: int
    vertex_cap: int
    entries: Dict[Key, int] = field(default_factory=dict)

    def update(self, rows: Dict[Key, int]):
        for (k, n), value in rows.items():
            if len(n) != len(self.valences):
                raise UsageError(f"exponent vector {n} does not match valences {self.valences}")
            self.entries[(k, tuple(n))] = int(value)

    def get(self, k: int, n: Sequence[int]) -> int:
        return self.entries.get((k, tuple(n)), 0)

    @property
    def columns(self) -> list:
        return [f'n{v}' for v in self.valences]

    def to_frame(self) -> pd.DataFrame:
        """One row per (n, k), kappa as a decimal string."""
        records = []
        for (k, n), value in sorted(self.entries.items(), key=lambda item: (item[0][1], item[0][0])):
            record = dict(zip(self.columns, n))
            record['k'] = k
            record['kappa'] = str(value)
            records.append(record)
        return pd.DataFrame(records, columns=self.columns + ['k', 'kappa'])

    def wide_frame(self) -> pd.DataFrame:
        """Exponent vectors as rows and one kappa_k column per genus."""
        frame = self.to_frame()
        if frame.empty:
            return frame
        wide = frame.pivot(index=self.columns, columns='k', values='kappa')
        wide.columns = [f'kappa{k}' for k in wide.columns]
        return wide.reset_index()

    def compare(self, other: 'KappaTable') -> Dict[Key, Tuple[int, int]]:
        """Entries present in both tables whose values differ."""
        shared = set(self.entries) & set(other.entries)
        return {key: (self.entries[key], other.entries[key])
                for key in sorted(shared) if self.entries[key] != other.entries[key]}


def table_from_frame(frame: pd.DataFrame, name: str = 'reference') -> KappaTable:
    columns = [c for c in frame.columns if c.startswith('n')]
    if not columns or 'k' not in frame or 'kappa' not in frame:
        raise PotentialFormatError(f"{name}: expected columns n2,n4[,n6],k,kappa")
    valences = tuple(int(c[1:]) for c in columns)
    table = KappaTable(valences, int(frame['k'].max()), int(frame[columns].max().max()))
    for _, row in frame.iterrows():
        n = tuple(int(row[c]) for c in columns)
        table.entries[(int(row['k']), n)] = int(str(row['kappa']))
    return table


def load_reference_table(name: str, directory: Path = None) -> KappaTable:
    """Load data/reference/<name>.csv; kappa is read as a decimal string."""
    path = Path(directory or REFERENCE_DIR) / f'{name}.csv'
    if not path.exists():
        available = sorted(p.stem for p in Path(directory or REFERENCE_DIR).glob('*.csv'))
        raise UsageError(f"no reference table {name!r}; available: {available}")
    frame = pd.read_csv(path, dtype={'kappa': str})
    logger.info("Loaded reference table %s (%d rows)", name, len(frame))
    return table_from_frame(frame, name)


if __name__ == '__main__':
    logging.basicConfig(level=logging.INFO, format='%(message)s')
    from scripts.counting.pipeline import count_maps
    print("=" * 60)
    print("Connected labeled quartic maps, n_j <= 2")
    print("=" * 60)
    table = count_maps((2, 4), 2, 2)
    print(table.wide_frame().to_string(index=False))
    reference = load_reference_table('quartic')
    mismatches = table.compare(reference)
    print(f"\nMismatches against the reference table: {len(mismatches)}")
