#!/usr/bin/env python3
"""
Deterministic rendering of result tables.

Exact rationals are written as "p/q", counting numbers as decimal integer
strings and high-precision floats as decimal strings with an explicit digit
count. JSON output uses sorted keys so that a parse and re-emit is byte-identical.
"""

import json
import logging
import numbers
from typing import Any, Dict, List, Mapping, Union

import mpmath as mp
import pandas as pd
import sympy as sp

from scripts.algebra.exact import format_rational
from scripts.config import JSON_SCHEMA_VERSION, OUTPUT_FORMATS
from scripts.counting.kappa import KappaTable
from scripts.errors import UsageError

logger = logging.getLogger(__name__)

FLOAT_DIGITS = 30


def format_value(value: Any, digits: int = FLOAT_DIGITS) -> Any:
    """JSON-safe scalar: ints stay ints, everything exact or high precision becomes a string."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (numbers.Integral, sp.Integer)):
        return int(value)
    if isinstance(value, sp.Rational):
        return format_rational(value)
    if isinstance(value, (mp.mpf, float)):
        return mp.nstr(mp.mpf(value), digits, strip_zeros=False)
    if isinstance(value, sp.Basic):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [format_value(v, digits) for v in value]
    if isinstance(value, Mapping):
        return {str(k): format_value(v, digits) for k, v in value.items()}
    return str(value)


def expression_tree(expr) -> Union[str, Dict]:
    """Nested {"op": ..., "args": [...]} form of a sympy expression; atoms are strings."""
    expr = sp.sympify(expr)
    if isinstance(expr, sp.Rational):
        return format_rational(expr)
    if expr.is_Atom:
        return str(expr)
    return {'op': type(expr).__name__, 'args': [expression_tree(a) for a in expr.args]}


def _frame_for(data) -> pd.DataFrame:
    if isinstance(data, KappaTable):
        return data.to_frame()
    if isinstance(data, pd.DataFrame):
        return data
    if isinstance(data, list):
        return pd.DataFrame(data)
    raise UsageError(f"cannot tabulate {type(data).__name__}")


def _json_payload(data, kind: str, meta: Mapping = None) -> Dict:
    frame = _frame_for(data)
    rows: List[Dict] = [{c: format_value(v) for c, v in zip(frame.columns, row)}
                        for row in frame.itertuples(index=False, name=None)]
    payload = {'schema': JSON_SCHEMA_VERSION, 'kind': kind, 'columns': [str(c) for c in frame.columns],
               'rows': rows}
    if isinstance(data, KappaTable):
        payload['valences'] = list(data.valences)
        payload['genus_max'] = data.genus_max
        payload['vertex_cap'] = data.vertex_cap
    if meta:
        payload['meta'] = format_value(dict(meta))
    return payload


def canonical_json(payload: Mapping) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def emit_table(data, fmt: str = 'table', kind: str = None, meta: Mapping = None) -> str:
    """
    Render a KappaTable or a frame of results as text, CSV or versioned JSON.

    An empty table gives a header-only CSV.
    """
    if fmt not in OUTPUT_FORMATS:
        raise UsageError(f"format must be one of {', '.join(OUTPUT_FORMATS)}, got {fmt!r}")
    kind = kind or ('kappa_table' if isinstance(data, KappaTable) else 'results')
    if fmt == 'json':
        return canonical_json(_json_payload(data, kind, meta))
    frame = _frame_for(data).copy()
    for column in frame.columns:
        frame[column] = [format_value(v) for v in frame[column]]
    if fmt == 'csv':
        return frame.to_csv(index=False, lineterminator='\n')
    if frame.empty:
        return '  '.join(str(c) for c in frame.columns) + '\n'
    lines = [frame.to_string(index=False)]
    for key, value in (meta or {}).items():
        lines.append(f"{key}: {format_value(value)}")
    return '\n'.join(lines) + '\n'


def reemit_json(text: str) -> str:
    """Parse a document written by emit_table and write it again."""
    return canonical_json(json.loads(text))


if __name__ == '__main__':
    from scripts.counting.kappa import load_reference_table
    table = load_reference_table('sixtic_genus4')
    print("=" * 60)
    print("Genus-4 reference table")
    print("=" * 60)
    print(emit_table(table, 'table'))
    text = emit_table(table, 'json')
    print(f"JSON round trip identical: {reemit_json(text) == text}")
