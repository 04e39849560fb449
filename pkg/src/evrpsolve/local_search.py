"""Intra-route improvement of customer order via 2-opt and swap moves."""

from __future__ import annotations

from enum import Enum

import numpy as np

from ._kernels import improve_segment_kernel
from .instance import Instance
from .solution import Genotype


class Move(Enum):
    TWO_OPT = "2opt"
    SWAP = "swap"


def intra_route_distance(route: list[int], inst: Instance) -> float:
    """Open-path length over consecutive customers, excluding depot legs."""
    dist = inst.dist_rows
    return sum(dist[u][v] for u, v in zip(route, route[1:]))


def local_search(g: Genotype, move: Move, inst: Instance) -> Genotype:
    """Improve each route of ``g`` independently until no move helps.

    Moves are accepted on first improvement (the scan restarts after each
    accepted move) using incremental distance deltas over customer-to-customer
    edges only; depot and station legs are ignored.  Route membership and
    boundaries are preserved; the returned genotype has no fitness cache.
    """
    if g.boundaries is None:
        raise ValueError("local search requires cached route boundaries")
    perm = np.asarray(g.perm, dtype=np.int64)
    two_opt = move is Move.TWO_OPT
    start = 0
    for end in g.boundaries:
        improve_segment_kernel(perm[start:end], inst.dist, two_opt)
        start = end
    return Genotype([int(c) for c in perm], list(g.boundaries), None)
