import click
from flask import Blueprint, current_app

from qaff.commands import common_options, emit, handle_errors, resolve_config, to_json
from qaff.models.cartan import cartan_from_label
from qaff.models.cluster import denominator_vector, enumerate_closure, initial_seed, mutate_sequence, realize_qchar
from qaff.models.quiver import (
    TruncationParams,
    Vertex,
    kr_label,
    parse_vertex,
    quivers_isomorphic,
    render_layout,
    truncated_quiver,
)
from qaff.models.tsystem import TSystemSolver, highest_monomial, kr_table, loop_weight_label
from qaff.utils.errors import ConfigError
from qaff.utils.presets import get_preset
from qaff.utils.validators import split_items, validate_sequence

quiver_bp = Blueprint('quiver', __name__, cli_group=None)

NUMBERING = {
    'B': 'nodes 1..n-1 long (d=2), node n short',
    'C': 'nodes 1..n-1 short, node n long (d=2)',
    'F': 'nodes 1,2 long (d=2), nodes 3,4 short',
    'G': 'node 1 long (d=3), node 2 short',
}


def _numbering_note(label):
    return NUMBERING.get(label[0], 'Bourbaki numbering, simply laced')


@quiver_bp.cli.command('info')
@click.argument('type_label', required=False)
@click.argument('ell', type=int, required=False)
@common_options
@handle_errors
def info(type_label, ell, anchor, preset, fundamentals, output_format):
    """Show the truncated quiver, its frozen vertices and KR labels"""
    cfg = resolve_config(type_label=type_label, ell=ell, anchor=anchor, preset=preset,
                         fundamentals=fundamentals, output_format=output_format, need_ell=True)
    cd = cfg.cartan
    quiver = truncated_quiver(cd, cfg.params)
    current_app.logger.info('info %s ell=%s anchor=%s', cd.label, cfg.ell, cfg.anchor)
    labels = [
        {'vertex': v.to_dict(), 'kr': kr_label(cd, v, cfg.ell).to_dict(), 'frozen': v in quiver.frozen}
        for v in sorted(quiver.vertices)
    ]
    data = {'cartan': cd.to_dict(), 'params': cfg.params.to_dict(), 'quiver': quiver.to_dict(), 'labels': labels}
    text = [
        f'type {cd.label}: d = {list(cd.d)}, t = {cd.t} ({_numbering_note(cd.label)})',
        f"C = {cd.to_dict()['C']}",
        f'V_{cfg.ell}: {len(quiver.vertices)} vertices, {len(quiver.frozen)} frozen, anchor {cfg.anchor}',
        '',
        render_layout(cd, quiver, cfg.ell),
    ]
    emit(cfg, data, text)


@quiver_bp.cli.command('mutate')
@click.argument('type_label', required=False)
@click.argument('ell', type=int, required=False)
@click.option('--seq', 'sequence', required=True, help='Mutation sequence "(i,r),(i,r),..."')
@click.option('--compare', default=None, help='Preset whose initial quiver is compared with the result')
@common_options
@handle_errors
def mutate_command(type_label, ell, sequence, compare, anchor, preset, fundamentals, output_format):
    """Mutate the initial seed along a sequence and print the resulting seed as JSON"""
    cfg = resolve_config(type_label=type_label, ell=ell, anchor=anchor, preset=preset,
                         fundamentals=fundamentals, output_format=output_format, need_ell=True)
    ok, err = validate_sequence(sequence)
    if not ok:
        raise ConfigError(err)
    steps = [parse_vertex(item) for item in split_items(sequence)]
    seed = mutate_sequence(initial_seed(cfg.cartan, cfg.params), steps)
    data = {'params': cfg.params.to_dict(), 'sequence': [v.to_dict() for v in steps], 'seed': seed.to_dict()}
    if compare:
        try:
            other = get_preset(compare)
        except KeyError as e:
            raise ConfigError(str(e.args[0])) from None
        target = truncated_quiver(cartan_from_label(other['type']),
                                  TruncationParams(other['ell'], Vertex(*other['anchor'])))
        data['isomorphic_to'] = {'preset': compare, 'result': quivers_isomorphic(seed.quiver, target)}
    click.echo(to_json(data))


@quiver_bp.cli.command('enumerate')
@click.argument('type_label', required=False)
@click.argument('ell', type=int, required=False)
@click.option('--max-seeds', type=int, default=None, help='Stop after this many seeds')
@click.option('--dump', is_flag=True, help='List every cluster variable')
@common_options
@handle_errors
def enumerate_command(type_label, ell, max_seeds, dump, anchor, preset, fundamentals, output_format):
    """Enumerate the cluster variables reachable from the initial seed"""
    cfg = resolve_config(type_label=type_label, ell=ell, anchor=anchor, preset=preset,
                         fundamentals=fundamentals, output_format=output_format, max_seeds=max_seeds,
                         need_ell=True)
    cd = cfg.cartan
    seed = initial_seed(cd, cfg.params)
    closure = enumerate_closure(seed, cfg.max_seeds)
    data = {'params': cfg.params.to_dict(), **closure.to_dict()}
    text = [
        f'{cd.label} ell={cfg.ell} anchor {cfg.anchor}',
        f'mutable cluster variables: {len(closure.variables)}',
        f'frozen variables: {len(closure.frozen_variables)}',
        f'seeds: {closure.seed_count}' + ('' if closure.closed else f' (stopped at cap {cfg.max_seeds})'),
        f'exchange graph: {closure.exchange_graph.number_of_edges()} edges',
    ]
    if not closure.closed:
        current_app.logger.warning('enumeration stopped at %d seeds', cfg.max_seeds)
    if dump:
        table = None
        if cfg.has_fundamentals():
            solver = TSystemSolver(cd, cfg.provider())
            table = kr_table(cd, seed.quiver.vertices, cfg.ell, solver)
        rows = []
        ordered = sorted(closure.variables, key=str) + sorted(closure.frozen_variables, key=str)
        for x in ordered:
            row = {'variable': str(x), 'frozen': x in closure.frozen_variables,
                   'd_vector': list(denominator_vector(x, seed))}
            if table is not None:
                label = loop_weight_label(highest_monomial(realize_qchar(x, table), cd))
                row['highest_loop_weight'] = [list(p) for p in label]
            rows.append(row)
        data['variables'] = rows
        text.append('')
        for row in rows:
            line = f"  {row['variable']}  d={row['d_vector']}"
            if 'highest_loop_weight' in row:
                line += f"  top={row['highest_loop_weight']}"
            text.append(line + ('  (frozen)' if row['frozen'] else ''))
    emit(cfg, data, text)
