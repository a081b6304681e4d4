"""On-disk cache of KR q-characters.

File layout: {"schema": SCHEMA, "checksum": sha256 of the canonical entries,
"entries": {"<type>/<i>/<k>/<r>": polynomial JSON}}.
"""
import hashlib
import json
import logging
import os

from qaff.models.laurent import from_json, to_json
from qaff.models.quiver import KRIndex
from qaff.utils.errors import CorruptCache

logger = logging.getLogger(__name__)

SCHEMA = 'qaff-kr-cache/1'


def cache_key(label, idx):
    return f'{label}/{idx.i}/{idx.k}/{idx.r}'


def parse_key(key):
    try:
        label, i, k, r = key.split('/')
        return label, KRIndex(int(i), int(k), int(r))
    except ValueError:
        raise CorruptCache(f'malformed cache key {key!r}') from None


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'))


def _checksum(entries):
    return hashlib.sha256(canonical_json(entries).encode('utf-8')).hexdigest()


def save_table(path, table):
    """Write {(label, KRIndex): LaurentPoly} as canonical JSON"""
    entries = {cache_key(label, idx): to_json(poly) for (label, idx), poly in table.items()}
    payload = {'schema': SCHEMA, 'checksum': _checksum(entries), 'entries': entries}
    tmp = f'{path}.tmp'
    with open(tmp, 'w', encoding='utf-8') as handle:
        handle.write(json.dumps(payload, sort_keys=True, indent=1))
        handle.write('\n')
    os.replace(tmp, path)
    logger.debug('wrote %d cache entries to %s', len(entries), path)


def load_table(path):
    """Read a cache file; a missing file is an empty table"""
    if not os.path.exists(path):
        return {}
    try:
        with open(path, encoding='utf-8') as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as e:
        raise CorruptCache(f'{path} is not valid JSON: {e}') from e
    if not isinstance(payload, dict) or payload.get('schema') != SCHEMA:
        raise CorruptCache(f'{path} does not use schema {SCHEMA}')
    entries = payload.get('entries')
    if not isinstance(entries, dict):
        raise CorruptCache(f'{path} has no entries map')
    if payload.get('checksum') != _checksum(entries):
        raise CorruptCache(f'checksum mismatch in {path}; the file was edited or truncated')
    table = {}
    for key, value in entries.items():
        try:
            table[parse_key(key)] = from_json(value)
        except (ValueError, KeyError, TypeError) as e:
            raise CorruptCache(f'bad polynomial under {key!r} in {path}: {e}') from e
    return table


def cache_roundtrip(path, table):
    save_table(path, table)
    return load_table(path)


class KRCache:
    """Cache file bound to one path, written back on flush"""

    def __init__(self, path):
        self.path = path
        self.table = load_table(path) if path else {}
        self.dirty = False

    def get(self, label, idx):
        return self.table.get((label, KRIndex(*idx)))

    def put(self, label, idx, poly):
        key = (label, KRIndex(*idx))
        if self.table.get(key) != poly:
            self.table[key] = poly
            self.dirty = True

    def flush(self):
        if self.path and self.dirty:
            save_table(self.path, self.table)
            self.dirty = False
