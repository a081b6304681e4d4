import json
from functools import wraps

import click
from flask import current_app

from qaff.utils.errors import ConfigError, QaffError
from qaff.utils.run_config import RunConfig

EXIT_FAILURE = 1
EXIT_CONFIG = 2


def handle_errors(f):
    """Turn configuration errors into exit code 2 and computation errors into exit code 1"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return f(*args, **kwargs)
        except ConfigError as e:
            click.echo(f'Error: {e}', err=True)
            ctx.exit(EXIT_CONFIG)
        except QaffError as e:
            current_app.logger.debug('command %s failed', ctx.command.name, exc_info=True)
            click.echo(f'Error: {e}', err=True)
            ctx.exit(EXIT_FAILURE)
    return decorated_function


def resolve_config(**options):
    return RunConfig.resolve(current_app.config, **options)


def to_json(data):
    return json.dumps(data, sort_keys=True, indent=2)


def emit(cfg, data, text):
    """Print data as canonical JSON or the given text lines"""
    if cfg.output_format == 'json':
        click.echo(to_json(data))
    else:
        click.echo(text if isinstance(text, str) else '\n'.join(text))


def common_options(f):
    """Options shared by the truncation commands"""
    f = click.option('--anchor', default=None, help='Component anchor vertex "(i,r)"')(f)
    f = click.option('--preset', default=None, help='Named truncation, e.g. paper-A3-l1')(f)
    f = click.option('--fundamentals', type=click.Path(), default=None, help='Fundamental q-characters JSON')(f)
    f = click.option('--format', 'output_format', type=click.Choice(['text', 'json']), default=None)(f)
    return f
