"""Small named graphs used by tests, the CLI and the verification harness."""

from __future__ import annotations

from .graph import MixedGraph

P = MixedGraph.parse

# two chain graphs whose models are nested, I(H) in I(F), without a chain of
# single edge additions between them that keeps the model inclusion
NESTED_AMP_F = P("A->D, B->E, C--D, D--E")
NESTED_AMP_H = P("A->D, B--E, C--D, D--E, B--D")

# the same phenomenon for MCCGs
NESTED_MCCG_F = P("A<->D, B--C, C--D")
NESTED_MCCG_H = P("A--D, A--C, B--C, C--D")

# two deflagged, triplex equivalent chain graphs
DEFLAGGED_G = P("A->C, B->D, C--D, D--E, B->E")
DEFLAGGED_H = P("A->C, B->D, C--D, D->E, B->E")

# the AMP learner returns this graph unchanged
UNDIRECTED_SQUARE_TAIL = P("A--B, A--C, B--D, C--D, D--E")

# covariance-concentration graph that violates C2 through A-B-C-D<->A
NON_MAXIMAL_CCG = P("A--B, B--C, C--D, D--E, A<->D, B<->E, C<->F")

# MCCG whose covariance graph misses only {A, D} and whose concentration
# graph is complete
TWO_PATHS_MCCG = P("A--B, A--C, B<->D, C<->D")

# undirected triangle attached to a bidirected triangle at C
TRIANGLE_PAIR_MCCG = P("A--B, A--C, B--C, C<->D, C<->E, D<->E")

# collider chain and its marginal over {A, B, D, F, G}
COLLIDER_CHAIN = P("A->B, C->B, C->D, E->D, E->F, G->F")
COLLIDER_CHAIN_MARGINAL = P("A<->B, B<->D, D<->F, F<->G")

# MCCG with several Markov equivalent MAGs
SPOUSE_THEN_PATH = P("A<->C, C--D, D--E")

ALL = {
    "nested-amp-f": NESTED_AMP_F,
    "nested-amp-h": NESTED_AMP_H,
    "nested-mccg-f": NESTED_MCCG_F,
    "nested-mccg-h": NESTED_MCCG_H,
    "deflagged-g": DEFLAGGED_G,
    "deflagged-h": DEFLAGGED_H,
    "undirected-square-tail": UNDIRECTED_SQUARE_TAIL,
    "non-maximal-ccg": NON_MAXIMAL_CCG,
    "two-paths-mccg": TWO_PATHS_MCCG,
    "triangle-pair-mccg": TRIANGLE_PAIR_MCCG,
    "collider-chain": COLLIDER_CHAIN,
    "collider-chain-marginal": COLLIDER_CHAIN_MARGINAL,
    "spouse-then-path": SPOUSE_THEN_PATH,
}
