# Truncations drawn in the quiver figures, with the anchor that selects the component
PRESETS = {
    'paper-A2-l1': {'type': 'A2', 'ell': 1, 'anchor': (2, -1)},
    'paper-A3-l1': {'type': 'A3', 'ell': 1, 'anchor': (2, -1)},
    'paper-B2-l2': {'type': 'B2', 'ell': 2, 'anchor': (1, -2)},
    'paper-G2-l3': {'type': 'G2', 'ell': 3, 'anchor': (1, -3)},
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"Unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
