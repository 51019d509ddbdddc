"""Finite closures: dependency closures, keys, covers, flats and the cover matroid."""
from .core import (
    AttrSet,
    FdFunction,
    FdPair,
    HereditaryCollection,
    Universe,
    canonical_order,
    insert_pair,
    make_universe,
    set_ops,
)
from .closure import (
    Trace,
    all_keys,
    canonicalize,
    closed_sets,
    extend_by_closure,
    fast_closure,
    is_closed,
    key_restriction,
    keys_of,
    materialize_mu,
)
from .covers import (
    is_cover,
    is_independent,
    nonredundant_cover,
    removable_pairs,
    span,
)
from .flats import (
    ancestors,
    delta,
    from_facets,
    kappa_bottomup,
    kappa_topdown,
    uniform_collection,
)
from .matroid import (
    RangeRestriction,
    dd_bijection,
    dd_target,
    directly_determines,
    enumerate_bases,
    exchange,
    restrict,
    singleton_status,
    top_signature,
)

__version__ = "0.1.0"
