"""Value formatting, CSV/JSON emission and markdown reports."""

import json

import mpmath as mp
import numpy as np
import pandas as pd
import pytest
import sympy as sp

from scripts.counting.kappa import KappaTable
from scripts.errors import UsageError
from scripts.reporting.emit import emit_table, expression_tree, format_value, reemit_json
from scripts.reporting.report import generate_report, write_run_report

BIG = 92591402036428800000


@pytest.fixture
def genus_four_table():
    table = KappaTable((2, 4, 6), 4, 3)
    table.update({(4, (3, 3, 3)): BIG, (4, (0, 1, 3)): 1143525600})
    return table


@pytest.mark.parametrize('value, expected', [
    (sp.Rational(-7, 24), '-7/24'),
    (sp.Integer(5), 5),
    (np.int64(3), 3),
    (True, True),
    (None, None),
    (sp.sqrt(2), 'sqrt(2)'),
    ([sp.Rational(1, 2), 4], ['1/2', 4]),
])
def test_format_value(value, expected):
    assert format_value(value) == expected


def test_format_value_float_digits():
    assert format_value(mp.mpf(1) / 3, 5) == '0.33333'
    assert format_value(0.5, 4) == '0.5000'


def test_expression_tree():
    x = sp.Symbol('x')
    assert expression_tree(x + sp.Rational(1, 2)) == {'op': 'Add', 'args': ['1/2', 'x']}
    assert expression_tree(sp.log(x)) == {'op': 'log', 'args': ['x']}


def test_csv_keeps_large_counts_exact(genus_four_table):
    text = emit_table(genus_four_table, 'csv')
    lines = text.splitlines()
    assert lines[0] == 'n2,n4,n6,k,kappa'
    assert lines[-1] == f'3,3,3,4,{BIG}'


def test_empty_table_is_header_only():
    assert emit_table(KappaTable((2, 4), 1, 1), 'csv') == 'n2,n4,k,kappa\n'


def test_json_document(genus_four_table):
    text = emit_table(genus_four_table, 'json', meta={'reference': 'sixtic_genus4'})
    payload = json.loads(text)
    assert payload['schema'] == 1
    assert payload['kind'] == 'kappa_table'
    assert payload['valences'] == [2, 4, 6]
    assert payload['rows'][-1]['kappa'] == str(BIG)
    assert payload['meta'] == {'reference': 'sixtic_genus4'}
    assert reemit_json(text) == text


def test_results_frame_in_table_format():
    frame = pd.DataFrame([{'k': 1, 'F': 'log(3/2)/12'}])
    text = emit_table(frame, 'table', meta={'r0': sp.Rational(1, 4)})
    assert text.splitlines()[-1] == 'r0: 1/4'


@pytest.mark.parametrize('data, fmt', [(pd.DataFrame(), 'xml'), (42, 'csv')])
def test_emit_rejects(data, fmt):
    with pytest.raises(UsageError):
        emit_table(data, fmt)


def test_generate_report(tmp_path, genus_four_table):
    path = generate_report('Genus four', [
        ('Setup', {'valences': '2, 4, 6', 'r0': sp.Rational(1, 4)}),
        ('Counts', genus_four_table),
        ('Notes', ['first', 'second']),
    ], 'genus_four', directory=tmp_path, timestamp=False)
    assert path == tmp_path / 'genus_four.md'
    text = path.read_text(encoding='utf-8')
    assert text.startswith('# Genus four\n')
    assert 'Generated' not in text
    assert '- **r0:** 1/4' in text
    assert '## Counts' in text and str(BIG) in text
    assert '- second' in text


def test_failed_report_does_not_raise(tmp_path, capsys):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    assert write_run_report('t', [('A', 'text')], 'r', directory=blocker) is None
    assert 'Error writing report r' in capsys.readouterr().err
