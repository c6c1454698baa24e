"""AMP chain graphs and maximal covariance-concentration graphs."""

from .closure import IndependenceModel, cl, cp, full_model, wtc_closure, wtc_dependence_closure
from .dependence import joined, verify_sound_complete
from .equivalence import blargest, enumerate_triplex_class, triplex_equivalent
from .graph import GraphError, MixedGraph, is_chain_graph, is_mccg, marginalize_mccg, triplexes
from .learn_amp import LearningError, learn_amp
from .learn_mccg import learn_mccg
from .oracle import exact_gaussian_oracle, fisher_z_oracle, gen_gaussian, graph_oracle
from .separation import amp_separated, mag_separated, mag_translate, mccg_separated, separated

__all__ = [
    "GraphError",
    "IndependenceModel",
    "LearningError",
    "MixedGraph",
    "amp_separated",
    "blargest",
    "cl",
    "cp",
    "enumerate_triplex_class",
    "exact_gaussian_oracle",
    "fisher_z_oracle",
    "full_model",
    "gen_gaussian",
    "graph_oracle",
    "is_chain_graph",
    "is_mccg",
    "joined",
    "learn_amp",
    "learn_mccg",
    "mag_separated",
    "mag_translate",
    "marginalize_mccg",
    "mccg_separated",
    "separated",
    "triplex_equivalent",
    "triplexes",
    "verify_sound_complete",
    "wtc_closure",
    "wtc_dependence_closure",
]
