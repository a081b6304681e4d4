from qaff.models.cartan import CartanData, cartan_from_label, symmetrized_matrix, simple_root_coords
from qaff.models.laurent import VarKey, Monomial, LaurentPoly, exact_div, substitute, spectral_shift
from qaff.models.quiver import Vertex, KRIndex, TruncationParams, QuiverGraph, truncated_quiver, kr_label
from qaff.models.cluster import ClusterVar, Seed, initial_seed, mutate, enumerate_closure, realize_qchar
from qaff.models.tsystem import FundamentalProvider, TSystemSolver, kr_qchar, verify_tsystem
from qaff.models.quivrep import ThinRep, ModuleSum, f_polynomial, geometric_qchar
from qaff.models.sl2strings import Str, SimpleClass, K0Elem, tensor_pair, normalize

__all__ = [
    'CartanData', 'cartan_from_label', 'symmetrized_matrix', 'simple_root_coords',
    'VarKey', 'Monomial', 'LaurentPoly', 'exact_div', 'substitute', 'spectral_shift',
    'Vertex', 'KRIndex', 'TruncationParams', 'QuiverGraph', 'truncated_quiver', 'kr_label',
    'ClusterVar', 'Seed', 'initial_seed', 'mutate', 'enumerate_closure', 'realize_qchar',
    'FundamentalProvider', 'TSystemSolver', 'kr_qchar', 'verify_tsystem',
    'ThinRep', 'ModuleSum', 'f_polynomial', 'geometric_qchar',
    'Str', 'SimpleClass', 'K0Elem', 'tensor_pair', 'normalize',
]
