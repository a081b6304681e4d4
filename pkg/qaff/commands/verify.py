import click
from flask import Blueprint, current_app

from qaff.commands import EXIT_FAILURE, emit, handle_errors, resolve_config
from qaff.utils.suites import SUITES, run_suite

verify_bp = Blueprint('verify', __name__, cli_group=None)


@verify_bp.cli.command('verify')
@click.option('--type', 'type_label', default=None, help='Lie type, e.g. B2')
@click.option('--suite', type=click.Choice(SUITES), default='all')
@click.option('--ell', type=int, default=None, help='Truncation level for the cluster suite (default 1)')
@click.option('--anchor', default=None)
@click.option('--preset', default=None)
@click.option('--kmax', type=int, default=4)
@click.option('--window', type=int, default=16)
@click.option('--fundamentals', type=click.Path(), default=None)
@click.option('--max-seeds', type=int, default=None)
@click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default=None)
@handle_errors
def verify(type_label, suite, ell, anchor, preset, kmax, window, fundamentals, max_seeds, output_format):
    """Run the identity suites; exit 0 iff every check passes"""
    cfg = resolve_config(type_label=type_label, ell=ell, anchor=anchor, preset=preset,
                         fundamentals=fundamentals, max_seeds=max_seeds, output_format=output_format)
    results = run_suite(cfg, suite, kmax=kmax, window=window)
    failed = [r for r in results if not r.passed]
    data = {'config': cfg.to_dict(), 'suite': suite, 'checks': [r.to_dict() for r in results],
            'failed': len(failed)}
    lines = [f'{r.status} {r.name}' + (f' ({r.detail})' if r.detail else '') for r in results]
    lines.append(f'{len(results)} checks, {len(failed)} failed')
    emit(cfg, data, lines)
    current_app.logger.info('verify %s on %s: %d failed', suite, cfg.type_label, len(failed))
    if failed:
        click.get_current_context().exit(EXIT_FAILURE)
