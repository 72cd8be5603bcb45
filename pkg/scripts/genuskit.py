#!/usr/bin/env python3
"""
Command line for the genus expansion toolkit.

    python -m scripts.genuskit count --valences 2,4 --max-vertices 4 --genus-max 2 --format csv
    python -m scripts.genuskit painleve --m 3 --rc 1
    python -m scripts.genuskit rk --potential gaussian --order 3

Every error of the toolkit ends the run with its own exit code and a one-line
diagnostic on stderr; argparse usage errors exit with 2.
"""

import argparse
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import pandas as pd
import sympy as sp

from scripts.algebra.exact import parse_rational
from scripts.algebra.jets import XI
from scripts.config import DEFAULT_GENUS_MAX, DEFAULT_VERTEX_CAP, OUTPUT_FORMATS, working_precision
from scripts.errors import GenusKitError, InternalConsistencyError, UsageError
from scripts.reporting.emit import emit_table, expression_tree
from scripts.reporting.report import write_run_report

logger = logging.getLogger('genuskit')

COMMANDS = ('rk', 'free-energy', 'count', 'phase', 'painleve', 'validate')
T_SYMBOL = sp.Symbol('T')


def _int_list(text: Optional[str]) -> Tuple[int, ...]:
    if text is None:
        return ()
    try:
        return tuple(int(v) for v in text.split(',') if v.strip())
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation; identical configs produce identical output."""
    command: str
    potential: Optional[str] = None
    couplings: Optional[str] = None
    order: int = 2
    genus_max: int = DEFAULT_GENUS_MAX
    max_vertices: int = DEFAULT_VERTEX_CAP
    valences: Tuple[int, ...] = (2, 4)
    deformed: bool = False
    certify: bool = False
    reference: Optional[str] = None
    oracle: bool = False
    model: Optional[str] = None
    g: Tuple[str, ...] = ()
    T: str = '1'
    m: int = 0
    rc: str = '1'
    W_m: Optional[str] = None
    tail_terms: int = 0
    y: Optional[str] = '0'
    N: Tuple[int, ...] = ()
    orders: int = 3
    K: int = 2
    fmt: str = 'table'
    output: Optional[Path] = None
    precision: Optional[int] = None
    report: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.command!r}")
        if self.fmt not in OUTPUT_FORMATS:
            raise UsageError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
        for name in ('order', 'genus_max', 'max_vertices', 'tail_terms', 'orders', 'K'):
            if getattr(self, name) < 0:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
        if self.potential and self.couplings:
            raise UsageError("--potential and --couplings are mutually exclusive")
        if self.command == 'phase' and self.model and (self.potential or self.couplings):
            raise UsageError("phase takes either --model with --g or a potential, not both")
        if self.command == 'count' and self.oracle and max(self.valences, default=0) > 6:
            raise UsageError("the Wick oracle is limited to valences up to 6")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        values = {k: v for k, v in vars(args).items() if k in cls.__dataclass_fields__ and v is not None}
        for key in ('valences', 'N'):
            if key in values:
                values[key] = _int_list(values[key])
        if 'g' in values:
            values['g'] = tuple(v.strip() for v in values['g'].split(','))
        if 'output' in values:
            values['output'] = Path(values['output'])
        return cls(**values)


@dataclass
class CommandResult:
    data: object
    kind: str
    meta: Dict
    text: Optional[str] = None


def resolve_potential(config: RunConfig, required: bool = True):
    from scripts.expansion.potential import load_potential, potential_from_dict
    if config.couplings:
        couplings = {}
        for item in config.couplings.split(','):
            if '=' not in item:
                raise UsageError(f"couplings take the form 2=1,4=2/3; got {item!r}")
            degree, value = item.split('=', 1)
            couplings[degree.strip()] = value.strip()
        return potential_from_dict({'couplings': couplings}, 'inline')
    if config.potential:
        return load_potential(config.potential)
    if required:
        raise UsageError(f"{config.command} needs --potential or --couplings")
    return None


def run_rk(config: RunConfig) -> CommandResult:
    from scripts.expansion.potential import build_W
    from scripts.expansion.recurrence import solve_deformed_rk, solve_rk
    pot = resolve_potential(config, required=False)
    solver = solve_deformed_rk if config.deformed else solve_rk
    if pot is None:
        rk = solver(None, config.order)
        exprs = rk.as_exprs()
        note = 'generic: W1, W2, ... are the xi-derivatives of W at xi = r0'
    else:
        W = build_W(pot)
        rk = solver(W, config.order, mode='concrete')
        exprs = rk.as_exprs()
        if W.degree == 1 and not config.deformed:
            slope = W.poly.LC()
            exprs = [sp.simplify(e.subs(XI, T_SYMBOL / slope)) for e in exprs]
            note = 'r0 solved from W(r0) = T'
        else:
            note = 'xi = r0 solves W(xi) = T'
    label = 'deformed r_k' if config.deformed else 'r_k'
    rows = [{'k': k, label: str(e)} for k, e in enumerate(exprs)]
    text = '\n'.join(f"r{k} = {e}" for k, e in enumerate(exprs)) + f"\n({note})\n"
    return CommandResult(pd.DataFrame(rows), 'rk', {'note': note}, text)


def run_free_energy(config: RunConfig) -> CommandResult:
    from scripts.expansion.potential import build_W, hodograph_root
    from scripts.free_energy.certificate import verify_total_derivative
    from scripts.free_energy.closed_forms import MAX_GENUS, R0, closed_form_F
    kmax = min(config.genus_max, MAX_GENUS)
    pot = resolve_potential(config, required=False)
    rows = []
    meta = {}
    if pot is None:
        forms = [closed_form_F(k) for k in range(1, kmax + 1)]
        r0 = None
    else:
        precision = working_precision(config.precision)
        W = build_W(pot)
        root = hodograph_root(W, 1, precision)
        r0 = root.exact if root.exact is not None else root.value
        meta['r0'] = r0
        forms = [closed_form_F(k, W, r0) for k in range(kmax + 1)]
    for form in forms:
        row = {'k': form.k, 'F': str(form.expression)}
        if r0 is not None:
            row['value'] = form.evaluate({R0: r0}, precision)
        if config.fmt == 'json':
            row['tree'] = expression_tree(form.expression)
        rows.append(row)
    if config.certify:
        for k in range(1, kmax + 1):
            certificate = verify_total_derivative(k)
            if not certificate.holds:
                raise InternalConsistencyError(f"certificate for F^({k}) failed")
            meta[f'certificate_F{k}'] = 'holds'
    return CommandResult(pd.DataFrame(rows), 'free_energy', meta)


def run_count(config: RunConfig) -> CommandResult:
    from scripts.counting.kappa import exponent_vectors, load_reference_table
    from scripts.counting.pipeline import count_maps
    from scripts.counting.wick import MAX_HALF_EDGES, wick_oracle
    table = count_maps(config.valences, config.max_vertices, config.genus_max)
    meta = {}
    if config.reference:
        mismatches = table.compare(load_reference_table(config.reference))
        if mismatches:
            raise InternalConsistencyError(f"{len(mismatches)} entries differ from {config.reference}: "
                                           f"{sorted(mismatches.items())[:3]}")
        meta['reference'] = f"{config.reference}: all shared entries agree"
    if config.oracle:
        checked = 0
        for n in exponent_vectors(len(table.valences), config.max_vertices):
            if not any(n) or sum(v * e for v, e in zip(table.valences, n)) > MAX_HALF_EDGES:
                continue
            for key, value in wick_oracle(n, config.genus_max, table.valences).items():
                if table.entries.get(key, 0) != value:
                    raise InternalConsistencyError(f"oracle disagrees at {key}: {value} vs {table.entries.get(key)}")
            checked += 1
        meta['oracle'] = f"{checked} profiles agree with brute-force enumeration"
    return CommandResult(table, 'kappa_table', meta)


def run_phase(config: RunConfig) -> CommandResult:
    from scripts.phase.regions import classify_quartic, endpoint_solve_one_cut, sixtic_one_cut_check
    if config.model:
        g = [parse_rational(v) for v in config.g]
        if config.model == 'quartic':
            if len(g) != 2:
                raise UsageError("quartic takes --g g2,g4")
            verdict = classify_quartic(*g)
        elif config.model == 'sixtic':
            if len(g) != 3:
                raise UsageError("sixtic takes --g g2,g4,g6")
            verdict = sixtic_one_cut_check(*g)
        else:
            raise UsageError(f"unknown model {config.model!r}")
        row = {'phase': verdict.phase, 'fate': verdict.fate,
               'crossing': verdict.crossing if verdict.crossing is not None else ''}
        return CommandResult(pd.DataFrame([row]), 'phase', dict(verdict.details), verdict.summary() + '\n')
    pot = resolve_potential(config)
    report = endpoint_solve_one_cut(pot, parse_rational(config.T), config.precision)
    row = {'r0': report.r0, 'alpha': report.alpha, 'regular': report.regular,
           'singular': report.singular, 'h': str(report.h.as_expr())}
    return CommandResult(pd.DataFrame([row]), 'endpoint', {'h_at_endpoint': report.h_at_endpoint})


def run_painleve(config: RunConfig) -> CommandResult:
    from scripts.phase.critical import CriticalData, default_W_m
    from scripts.phase.painleve import formal_tail_series, painleve_member
    if config.m < 2:
        raise UsageError("painleve needs --m >= 2")
    rc = parse_rational(config.rc)
    W_m = parse_rational(config.W_m) if config.W_m else default_W_m(config.m)
    member = painleve_member(config.m, CriticalData(rc, config.m, W_m))
    y_value = None if config.y in (None, 'y') else parse_rational(config.y)
    equation = member.render(y_value)
    rows = [{'item': 'equation', 'value': equation},
            {'item': 'hierarchy', 'value': member.hierarchy_alias}]
    lines = [equation]
    if config.tail_terms:
        tail = formal_tail_series(member, config.tail_terms)
        for n, a in enumerate(tail.coefficients):
            rows.append({'item': f'a{n}', 'value': str(a)})
        rows.append({'item': 'residual exponent', 'value': str(tail.residual_exponent())})
        lines.append(f"u ~ {tail.expression()}")
    return CommandResult(pd.DataFrame(rows), 'painleve', {}, '\n'.join(lines) + '\n')


def run_validate(config: RunConfig) -> CommandResult:
    from scripts.free_energy.closed_forms import MAX_GENUS
    from scripts.free_energy.numeric import numeric_free_energy
    from scripts.validation.asymptotics import (asymptotic_compare, format_exponent, free_energy_biz,
                                                free_energy_scaling)
    from scripts.validation.identities import resolvent_identity_check, string_residual
    from scripts.validation.jacobi import stieltjes_recurrence
    pot = resolve_potential(config)
    Ns = config.N or (20,)
    precision = working_precision(config.precision)
    kmax = min(config.K, MAX_GENUS)
    values = numeric_free_energy(pot, kmax, precision)
    rows, data, comparisons = [], [], []
    for N in Ns:
        jd = stieltjes_recurrence(pot, N, precision=precision)
        data.append(jd)
        comparison = free_energy_biz(jd, values, kmax)
        comparisons.append(comparison)
        rows.append({
            'N': N,
            'r_NN': jd.r_at(N),
            'string_residual': string_residual(jd).max_residual,
            'resolvent_residual': resolvent_identity_check(jd, config.orders).max_residual,
            'F_N - F_N^G': comparison.difference,
            f'deviation_K{kmax}': comparison.deviations[kmax],
        })
    asymptotics = asymptotic_compare(data, K=config.K)
    meta = {f'r exponent K={K}': format_exponent(p, err) for K, (p, err) in asymptotics.exponents.items()}
    for K, (p, err) in free_energy_scaling(comparisons).items():
        meta[f'F exponent K={K}'] = format_exponent(p, err)
    for note in asymptotics.notes:
        meta.setdefault('notes', []).append(note)
    return CommandResult(pd.DataFrame(rows), 'validation', meta)


HANDLERS = {
    'rk': run_rk,
    'free-energy': run_free_energy,
    'count': run_count,
    'phase': run_phase,
    'painleve': run_painleve,
    'validate': run_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', dest='fmt', choices=OUTPUT_FORMATS, help='output format (default: table)')
    common.add_argument('--output', help='write to this file instead of stdout')
    common.add_argument('--precision', type=int, help='working precision in decimal digits')
    common.add_argument('--report', help='also write outputs/reports/<REPORT>.md')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for progress, -vv for debug')

    potential = argparse.ArgumentParser(add_help=False)
    potential.add_argument('--potential', help='potential file or bundled name (data/potentials)')
    potential.add_argument('--couplings', help='inline couplings, e.g. 2=1,4=2/3')

    parser = argparse.ArgumentParser(prog='genuskit', description='Genus expansion of Hermitian matrix models')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('rk', parents=[common, potential], help='recurrence coefficients r_k')
    p.add_argument('--order', type=int, help='highest k (default 2)')
    p.add_argument('--deformed', action='store_true', help='Bleher-Its deformed coefficients')

    p = sub.add_parser('free-energy', parents=[common, potential], help='closed forms F^(k)')
    p.add_argument('--genus-max', type=int, help='highest k (at most 3)')
    p.add_argument('--certify', action='store_true', help='check the total-derivative certificates')

    p = sub.add_parser('count', parents=[common], help='labeled map counts kappa_k(n)')
    p.add_argument('--valences', help='comma-separated even valences, e.g. 2,4,6')
    p.add_argument('--max-vertices', type=int, help='cap on each n_j')
    p.add_argument('--genus-max', type=int, help='highest genus')
    p.add_argument('--reference', help='compare with data/reference/<NAME>.csv')
    p.add_argument('--oracle', action='store_true', help='compare with brute-force Wick enumeration')

    p = sub.add_parser('phase', parents=[common, potential], help='phase region and one-cut endpoint')
    p.add_argument('--model', choices=('quartic', 'sixtic'))
    p.add_argument('--g', help='couplings g2,g4[,g6] as rationals')
    p.add_argument('--T', help='scale the potential to g/T (default 1)')

    p = sub.add_parser('painleve', parents=[common], help='Painleve I hierarchy member')
    p.add_argument('--m', type=int, required=True, help='order of the critical point')
    p.add_argument('--rc', help='critical value r_c (default 1)')
    p.add_argument('--W-m', dest='W_m', help='normalized W_m(r_c) (default that of W = 1 + (xi - r_c)^m)')
    p.add_argument('--tail-terms', type=int, help='terms of the formal large-x tail')
    p.add_argument('--y', help="value of y, or 'y' to keep it symbolic (default 0)")

    p = sub.add_parser('validate', parents=[common, potential], help='finite-N checks')
    p.add_argument('--N', help='comma-separated matrix sizes (default 20)')
    p.add_argument('--orders', type=int, help='resolvent identity orders (default 3)')
    p.add_argument('--K', type=int, help='expansion order for the asymptotic comparison (default 2)')
    return parser


def configure_logging(verbosity: int):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format='%(message)s', force=True)


def _write(text: str, output: Optional[Path]):
    if output is None:
        sys.stdout.write(text)
        return
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        with open(output, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise UsageError(f"cannot write {output}: {e}")


def _config_summary(config: RunConfig) -> Dict:
    summary = {}
    for key, value in asdict(config).items():
        if value in (None, (), False, ''):
            continue
        summary[key] = ', '.join(map(str, value)) if isinstance(value, tuple) else value
    return summary


def parse_and_dispatch(argv: Sequence[str] = None) -> int:
    """Run one subcommand; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)
    try:
        config = RunConfig.from_args(args)
        logger.info("Running %s", config.command)
        result = HANDLERS[config.command](config)
        if config.fmt == 'table' and result.text is not None:
            text = result.text
        else:
            text = emit_table(result.data, config.fmt, result.kind, result.meta)
        _write(text, config.output)
        if config.report:
            write_run_report(f"genuskit {config.command}",
                             [("Run", _config_summary(config)), ("Results", result.data),
                              ("Notes", result.meta or {'notes': 'none'})],
                             config.report)
    except GenusKitError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


def main():
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
