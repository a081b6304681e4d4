import re

from qaff.models.cartan import parse_label
from qaff.models.quiver import VERTEX_PATTERN
from qaff.utils.errors import QaffError

STRING_PATTERN = re.compile(r'^\s*\(\s*(-?\d+)\s*,\s*(\d+)\s*\)\s*$')


def validate_label(label):
    """Validate a Lie type tag such as 'A3' or 'g2'"""
    if not label or not isinstance(label, str):
        return False, "Lie type is required"
    try:
        parse_label(label)
    except QaffError as e:
        return False, str(e)
    return True, None


def validate_vertex(text):
    """Validate a vertex written as (i,r)"""
    if not text or not isinstance(text, str):
        return False, "Vertex is required"
    if not VERTEX_PATTERN.match(text):
        return False, f"Invalid vertex {text!r}, expected (i,r)"
    return True, None


def validate_ell(ell):
    if ell is None:
        return False, "Truncation level ell is required"
    if not isinstance(ell, int) or ell < 0:
        return False, "ell must be a nonnegative integer"
    return True, None


def split_items(text):
    """Split '(1,2),(3,4)' or '(1,2);(3,4)' into its parenthesised items"""
    return re.findall(r'\([^()]*\)', text or '')


def validate_sequence(text):
    """Validate a mutation sequence such as '(3,-2),(2,-1)'"""
    if text is None:
        return False, "Mutation sequence is required"
    items = split_items(text)
    leftover = re.sub(r'\([^()]*\)|[\s,;]', '', text)
    if leftover:
        return False, f"Unexpected text {leftover!r} in mutation sequence"
    for item in items:
        if not VERTEX_PATTERN.match(item):
            return False, f"Invalid vertex {item!r} in mutation sequence"
    return True, None


def validate_strings(text):
    """Validate a string list such as '(0,5);(6,6)' of (lo,n) pairs with n >= 1"""
    if not text or not isinstance(text, str):
        return False, "At least one string is required"
    items = split_items(text)
    if not items or re.sub(r'\([^()]*\)|[\s,;]', '', text):
        return False, "Strings must be written as (lo,n);(lo,n);..."
    for item in items:
        match = STRING_PATTERN.match(item)
        if not match:
            return False, f"Invalid string {item!r}, expected (lo,n)"
        if int(match.group(2)) < 1:
            return False, f"String {item} must have at least one point"
    return True, None


def validate_output_format(fmt):
    if fmt not in ('text', 'json'):
        return False, "Output format must be text or json"
    return True, None
