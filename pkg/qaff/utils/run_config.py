import os
from dataclasses import dataclass
from typing import Optional

from qaff.models.cartan import cartan_from_label
from qaff.models.quiver import TruncationParams, Vertex, default_anchor, parse_vertex
from qaff.models.quivrep import BUILTIN_TYPES
from qaff.models.tsystem import FundamentalProvider
from qaff.utils.errors import ConfigError
from qaff.utils.presets import get_preset
from qaff.utils.validators import validate_ell, validate_label, validate_output_format, validate_vertex


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one command invocation"""
    type_label: str
    ell: Optional[int] = None
    anchor: Optional[Vertex] = None
    fundamentals: Optional[str] = None
    cache: Optional[str] = None
    output_format: str = 'text'
    max_seeds: int = 10000

    @classmethod
    def resolve(cls, config, type_label=None, ell=None, anchor=None, preset=None,
                fundamentals=None, cache=None, output_format=None, max_seeds=None, need_ell=False):
        """Merge app config, an optional preset and command-line options (options win)"""
        if preset:
            try:
                values = get_preset(preset)
            except KeyError as e:
                raise ConfigError(str(e.args[0])) from None
            type_label = type_label or values['type']
            ell = values['ell'] if ell is None else ell
            anchor = anchor or '({},{})'.format(*values['anchor'])

        ok, err = validate_label(type_label)
        if not ok:
            raise ConfigError(err)
        cd = cartan_from_label(type_label)

        if need_ell:
            ok, err = validate_ell(ell)
            if not ok:
                raise ConfigError(err)

        if anchor is None:
            vertex = default_anchor(cd)
        else:
            ok, err = validate_vertex(anchor)
            if not ok:
                raise ConfigError(err)
            vertex = parse_vertex(anchor)
            if vertex.i not in cd.nodes:
                raise ConfigError(f'anchor {vertex} uses a node outside 1..{cd.rank} of {cd.label}')

        output_format = output_format or config.get('QAFF_OUTPUT_FORMAT', 'text')
        ok, err = validate_output_format(output_format)
        if not ok:
            raise ConfigError(err)

        fundamentals = fundamentals or config.get('QAFF_FUNDAMENTALS')
        if fundamentals and not os.access(fundamentals, os.R_OK):
            raise ConfigError(f'fundamentals file {fundamentals} is not readable')

        cache = cache or config.get('QAFF_CACHE')
        if cache:
            folder = os.path.dirname(os.path.abspath(cache))
            if not os.access(folder, os.W_OK):
                raise ConfigError(f'cache directory {folder} is not writable')

        max_seeds = config.get('QAFF_MAX_SEEDS', 10000) if max_seeds is None else max_seeds
        if max_seeds < 1:
            raise ConfigError('max-seeds must be at least 1')

        return cls(cd.label, ell, vertex, fundamentals, cache, output_format, max_seeds)

    @property
    def cartan(self):
        return cartan_from_label(self.type_label)

    @property
    def params(self):
        return TruncationParams(self.ell, self.anchor)

    def has_fundamentals(self):
        return bool(self.fundamentals) or self.type_label in BUILTIN_TYPES

    def provider(self):
        if self.fundamentals:
            return FundamentalProvider.from_file(self.cartan, self.fundamentals)
        return FundamentalProvider.builtin(self.cartan)

    def to_dict(self):
        return {
            'type': self.type_label,
            'ell': self.ell,
            'anchor': self.anchor.to_dict() if self.anchor else None,
            'fundamentals': self.fundamentals,
            'cache': self.cache,
            'output_format': self.output_format,
            'max_seeds': self.max_seeds,
        }
