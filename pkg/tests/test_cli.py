"""End-to-end runs of the command line."""

import json

import pytest

from scripts import genuskit
from scripts.errors import UsageError
from scripts.genuskit import RunConfig, parse_and_dispatch


def run(capsys, *argv):
    code = parse_and_dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_painleve_bmp(capsys):
    code, out, _ = run(capsys, 'painleve', '--m', '3')
    assert code == 0
    assert out == "u'''' + 10 u u'' + 5 (u')^2 + 10 u^3 = 10 x\n"


def test_painleve_tail_csv(capsys):
    code, out, _ = run(capsys, 'painleve', '--m', '3', '--tail-terms', '2', '--format', 'csv')
    assert code == 0
    assert 'a1,1/18' in out.splitlines()


def test_gaussian_rk(capsys):
    code, out, _ = run(capsys, 'rk', '--potential', 'gaussian', '--order', '3')
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == 'r0 = T/2'
    assert lines[1:4] == ['r1 = 0', 'r2 = 0', 'r3 = 0']


def test_count_with_checks(capsys):
    code, out, _ = run(capsys, 'count', '--valences', '2,4', '--max-vertices', '2', '--genus-max', '2',
                       '--reference', 'quartic', '--oracle', '--format', 'csv')
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == 'n2,n4,k,kappa'
    assert len(lines) == 28
    assert '2,2,1,4800' in lines


def test_count_json_round_trip(capsys):
    code, out, _ = run(capsys, 'count', '--valences', '4', '--max-vertices', '2', '--genus-max', '1',
                       '--format', 'json')
    assert code == 0
    payload = json.loads(out)
    assert payload['kind'] == 'kappa_table'
    assert {'n4': 1, 'k': 1, 'kappa': '1'} in payload['rows']


def test_output_file(capsys, tmp_path):
    target = tmp_path / 'out' / 'painleve.txt'
    code, out, _ = run(capsys, 'painleve', '--m', '2', '--output', str(target))
    assert code == 0
    assert out == ''
    assert target.read_text() == "u'' + 3 u^2 = 3 x\n"


def test_phase_model(capsys):
    code, out, _ = run(capsys, 'phase', '--model', 'sixtic', '--g', '3/2,-1/4,1/60')
    assert code == 0
    assert out == 'critical_boundary, singular_at_start\n'


def test_free_energy_quartic(capsys):
    code, out, _ = run(capsys, 'free-energy', '--couplings', '2=1,4=2/3', '--genus-max', '1',
                       '--format', 'json', '--precision', '20')
    assert code == 0
    payload = json.loads(out)
    assert payload['meta']['r0'] == '1/4'
    assert [row['k'] for row in payload['rows']] == [0, 1]
    assert payload['rows'][1]['value'].startswith('0.0337887')


def test_report_written(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr('scripts.reporting.report.REPORTS_DIR', tmp_path)
    code, _, _ = run(capsys, 'painleve', '--m', '3', '--report', 'bmp')
    assert code == 0
    assert '## Results' in (tmp_path / 'bmp.md').read_text(encoding='utf-8')


def test_validate_quartic(capsys):
    code, out, _ = run(capsys, 'validate', '--potential', 'quartic', '--N', '10,20',
                       '--precision', '30', '--format', 'json')
    assert code == 0
    payload = json.loads(out)
    assert [row['N'] for row in payload['rows']] == [10, 20]
    for row in payload['rows']:
        assert {'r_NN', 'string_residual', 'resolvent_residual', 'deviation_K2'} <= set(row)
        assert float(row['string_residual']) < 1e-18
        assert float(row['resolvent_residual']) < 1e-18
    meta = payload['meta']
    for K in range(3):
        assert meta[f'r exponent K={K}'].endswith('+- n/a')
        assert f'F exponent K={K}' in meta
    assert abs(float(meta['r exponent K=2'].split()[0]) - 6) < 0.5


@pytest.mark.parametrize('argv, exit_code', [
    (['rk', '--couplings', '2=1,4=-1'], 4),
    (['rk', '--potential', 'no_such_model'], 4),
    (['rk', '--potential', 'gaussian', '--couplings', '2=1'], 3),
    (['painleve', '--m', '1'], 3),
    (['phase', '--model', 'quartic', '--g', '1'], 3),
    (['count', '--valences', '2,8', '--oracle'], 3),
    (['count', '--valences', '2,x'], 3),
    (['free-energy', '--potential', 'bmp60'], 6),
    (['validate', '--N', '10'], 3),
    (['validate', '--potential', 'quartic', '--N', '0'], 3),
    (['validate', '--potential', 'quartic', '--N', '10', '--K', '-1'], 3),
    (['count', '--max-vertices', 'many'], 2),
    (['nonsense'], 2),
])
def test_exit_codes(capsys, argv, exit_code):
    code, out, err = run(capsys, *argv)
    assert code == exit_code
    assert out == ''
    if exit_code != 2:
        assert err.startswith('error: ')


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig('count', genus_max=-1)
    with pytest.raises(UsageError):
        RunConfig('rk', fmt='xml')
    assert RunConfig('count').valences == (2, 4)


def test_main_exits_with_status(monkeypatch):
    monkeypatch.setattr('sys.argv', ['genuskit', 'painleve', '--m', '1'])
    with pytest.raises(SystemExit) as info:
        genuskit.main()
    assert info.value.code == 3
