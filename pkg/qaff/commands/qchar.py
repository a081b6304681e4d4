import json

import click
from flask import Blueprint, current_app

from qaff.commands import EXIT_FAILURE, emit, handle_errors, resolve_config
from qaff.models.laurent import dimension
from qaff.models.quiver import KRIndex, parse_vertex
from qaff.models.quivrep import ThinRep, builtin_K, f_polynomial, geometric_qchar
from qaff.models.tsystem import TSystemSolver, classical_character
from qaff.utils.cache import KRCache
from qaff.utils.errors import ConfigError
from qaff.utils.validators import validate_vertex

qchar_bp = Blueprint('qchar', __name__, cli_group=None)


@qchar_bp.cli.command('qchar')
@click.argument('type_label')
@click.option('--i', 'node', type=int, required=True, help='Dynkin node')
@click.option('--k', 'level', type=int, required=True, help='KR level')
@click.option('--r', 'shift', type=int, default=0, help='Spectral exponent')
@click.option('--fundamentals', type=click.Path(), default=None)
@click.option('--cache', type=click.Path(), default=None, help='KR table cache file')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default=None)
@handle_errors
def qchar(type_label, node, level, shift, fundamentals, cache, output_format):
    """q-character of the KR module W^(i)_{k,q^r}"""
    cfg = resolve_config(type_label=type_label, fundamentals=fundamentals, cache=cache,
                         output_format=output_format)
    cd = cfg.cartan
    if node not in cd.nodes:
        raise ConfigError(f'node {node} is not in 1..{cd.rank} for {cd.label}')
    if level < 0:
        raise ConfigError('k must be nonnegative')
    idx = KRIndex(node, level, shift)
    store = KRCache(cfg.cache)
    value = store.get(cd.label, idx)
    if value is None:
        value = TSystemSolver(cd, cfg.provider()).kr_qchar(idx)
        store.put(cd.label, idx, value)
        store.flush()
    else:
        current_app.logger.debug('cache hit for %s %s', cd.label, idx)
    character = {','.join(map(str, w)): m for w, m in sorted(classical_character(value, cd).items())}
    data = {
        'type': cd.label,
        'index': idx.to_dict(),
        'qchar': value.to_dict(),
        'text': str(value),
        'terms': len(value),
        'dimension': dimension(value),
        'character': character,
    }
    emit(cfg, data, [f'{idx} = {value}', f'terms: {len(value)}, dimension: {dimension(value)}'])


@qchar_bp.cli.command('tsys-verify')
@click.argument('type_label')
@click.option('--kmax', type=int, default=4)
@click.option('--window', type=int, default=16, help='Number of consecutive shifts checked')
@click.option('--fundamentals', type=click.Path(), default=None)
@handle_errors
def tsys_verify(type_label, kmax, window, fundamentals):
    """Check the T-system identities for every node, k <= kmax and r in the window"""
    cfg = resolve_config(type_label=type_label, fundamentals=fundamentals)
    if kmax < 1 or window < 1:
        raise ConfigError('kmax and window must be positive')
    cd = cfg.cartan
    solver = TSystemSolver(cd, cfg.provider())
    lo = -(window // 2)
    failures = 0
    for i in cd.nodes:
        for k in range(1, kmax + 1):
            bad = [r for r in range(lo, lo + window) if not solver.verify(i, k, r)]
            failures += len(bad)
            click.echo(f"{'PASS' if not bad else 'FAIL'} i={i} k={k}" + (f' r={bad}' if bad else ''))
    current_app.logger.info('tsys-verify %s: %d failures', cd.label, failures)
    if failures:
        click.get_current_context().exit(EXIT_FAILURE)


def _vertex_option(text):
    text = text.strip()
    if not text.startswith('('):
        text = f'({text})'
    ok, err = validate_vertex(text)
    if not ok:
        raise ConfigError(err)
    return parse_vertex(text)


def _check_node(cd, vertex):
    if vertex.i not in cd.nodes:
        raise ConfigError(f'node {vertex.i} is not in 1..{cd.rank} for {cd.label}')


def _load_module(path, cd):
    try:
        with open(path, encoding='utf-8') as handle:
            return ThinRep.from_dict(json.load(handle), cd)
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigError(f'bad representation file {path}: {e}') from None


def module_sink(module):
    """The unique support vertex with no arrow leaving it"""
    sources = {u for (u, _), _ in module.arrows}
    sinks = sorted(module.support - sources)
    if len(sinks) != 1:
        raise ConfigError(f'cannot tell which vertex the module is attached to ({len(sinks)} sinks); pass --at')
    return sinks[0]


@qchar_bp.cli.command('fpoly')
@click.option('--type', 'type_label', required=True, help='Lie type, e.g. B2')
@click.option('--module', 'module_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Thin representation JSON')
@click.option('--builtin', default=None, help='Built-in K module at vertex "i,r"')
@click.option('--at', 'attach', default=None, help='Vertex "(i,r)" a --module is attached to; defaults to its sink')
@click.option('--qchar', 'with_qchar', is_flag=True, help='Also print the geometric q-character')
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default=None)
@handle_errors
def fpoly(type_label, module_path, builtin, attach, with_qchar, output_format):
    """F-polynomial of a thin representation, optionally with its geometric q-character"""
    cfg = resolve_config(type_label=type_label, output_format=output_format)
    cd = cfg.cartan
    if (module_path is None) == (builtin is None):
        raise ConfigError('pass exactly one of --module FILE and --builtin i,r')
    if builtin is not None:
        if attach is not None:
            raise ConfigError('--at only applies to --module')
        vertex = _vertex_option(builtin)
        _check_node(cd, vertex)
        module = builtin_K(cd, vertex.i, vertex.r)
    else:
        module = _load_module(module_path, cd)
        vertex = _vertex_option(attach) if attach else module_sink(module)
        _check_node(cd, vertex)
    F = f_polynomial(module)
    data = {
        'vertex': vertex.to_dict(),
        'representation': module.to_dict(),
        'f_polynomial': F.to_dict(),
    }
    lines = [f'F = {F}']
    if with_qchar:
        value = geometric_qchar(cd, vertex.i, vertex.r, module)
        data['qchar'] = value.to_dict()
        data['dimension'] = dimension(value)
        lines += [f'chi_q = {value}', f'dimension: {dimension(value)}']
    emit(cfg, data, lines)
