import click
from flask import Blueprint

from qaff.commands import EXIT_FAILURE, handle_errors, to_json
from qaff.models.sl2strings import Str, elem_qchar, normalize, string_qchar
from qaff.utils.errors import ConfigError
from qaff.utils.validators import STRING_PATTERN, split_items, validate_strings

sl2_bp = Blueprint('sl2', __name__, cli_group='sl2')


def parse_strings(text):
    ok, err = validate_strings(text)
    if not ok:
        raise ConfigError(err)
    return [Str(*map(int, STRING_PATTERN.match(item).groups())) for item in split_items(text)]


@sl2_bp.cli.command('decompose')
@click.option('--strings', 'text', required=True, help='Strings "(lo,n);(lo,n);..."')
@click.option('--check', is_flag=True, help='Compare q-characters of both sides')
@handle_errors
def decompose(text, check):
    """Expand a tensor product of string modules into simple classes"""
    strings = parse_strings(text)
    result = normalize(strings)
    if check:
        product = string_qchar(strings[0])
        for s in strings[1:]:
            product = product * string_qchar(s)
        if elem_qchar(result) != product:
            click.echo('Error: q-characters of the decomposition do not match', err=True)
            click.get_current_context().exit(EXIT_FAILURE)
    click.echo(to_json(result.to_dict()))
