"""corpex: corpus indexing, keyness, collocation, and word-network analysis."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    Document,
    NodeKind,
    NodeSpec,
    Token,
    make_node,
    parse_vertical,
    serialize_vertical,
    tokenize_plain,
)
from .index import (  # noqa: F401
    Index,
    Scope,
    build_index,
    complement_scope,
    count_node,
    load_index,
    load_scope,
    save_index,
    save_scope,
    whole_scope,
)
from .queries import PRESETS, select_scope  # noqa: F401
from .stats import FreqProfile, aldf, arf, per_million, profile, rel_docf  # noqa: F401
from .keyness import KeynessRow, keywords, simple_maths  # noqa: F401
from .colloc import CollocateRow, collocates, cooccurrences, log_dice  # noqa: F401
from .sketch import match_relations, sketch  # noqa: F401
from .network import WordNetwork, build_network, emit_graph  # noqa: F401
