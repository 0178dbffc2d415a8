"""3D cellular automaton for document placement and cluster extraction.

Cells take one of four states, encoded in a flat int array: 0 dead, -1 alive,
-2 isolated, k >= 1 active holding document k.  Placement walks the corpus
once; similar documents land next to already-placed ones (neighborhood
strategy) or along a serpentine path (linear strategy).  Clusters are the
connected components of active cells.

Legal state transitions, enforced on every write:
dead -> alive | active; alive -> active | isolated; isolated and active are
terminal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import GridFull, IllegalTransition, InvalidSpec
from .proximity import ProximityMatrix

DEAD = 0
ALIVE = -1
ISOLATED = -2

MOORE = "moore"
VON_NEUMANN = "von_neumann"
NEIGHBORHOODS = (MOORE, VON_NEUMANN)
STRATEGIES = ("neighborhood", "linear")

_STATE_NAMES = {ALIVE: "alive", ISOLATED: "isolated"}


@dataclass
class Grid:
    side: int
    cells: np.ndarray  # flat int32, length side**3

    @property
    def placed(self) -> int:
        return int((self.cells >= 1).sum())

    def index(self, i: int, j: int, k: int) -> int:
        return (i * self.side + j) * self.side + k

    def coords(self, flat: int) -> tuple[int, int, int]:
        i, rest = divmod(flat, self.side * self.side)
        j, k = divmod(rest, self.side)
        return i, j, k


def grid_for(n_docs: int) -> Grid:
    """All-dead cube with one cell of margin: side = (smallest s, s^3 >= n) + 1."""
    if n_docs < 1:
        raise InvalidSpec(f"need at least one document, got {n_docs}")
    s = max(1, round(n_docs ** (1.0 / 3.0)))
    while s**3 < n_docs:
        s += 1
    while s > 1 and (s - 1) ** 3 >= n_docs:
        s -= 1
    side = s + 1
    return Grid(side=side, cells=np.zeros(side**3, dtype=np.int32))


def _offsets(kind: str) -> tuple[tuple[int, int, int], ...]:
    if kind == MOORE:
        return tuple(
            off for off in product((-1, 0, 1), repeat=3) if off != (0, 0, 0)
        )
    if kind == VON_NEUMANN:
        return tuple(
            sorted(
                off
                for off in product((-1, 0, 1), repeat=3)
                if sum(abs(v) for v in off) == 1
            )
        )
    raise InvalidSpec(f"unknown neighborhood kind: {kind!r}")


@lru_cache(maxsize=None)
def neighbor_table(side: int, kind: str) -> np.ndarray:
    """(side^3, n_offsets) table of neighbor flat indices, -1 where out of bounds."""
    offs = _offsets(kind)
    table = np.full((side**3, len(offs)), -1, dtype=np.int64)
    for i, j, k in product(range(side), repeat=3):
        flat = (i * side + j) * side + k
        for col, (di, dj, dk) in enumerate(offs):
            ni, nj, nk = i + di, j + dj, k + dk
            if 0 <= ni < side and 0 <= nj < side and 0 <= nk < side:
                table[flat, col] = (ni * side + nj) * side + nk
    table.setflags(write=False)
    return table


def neighbors(grid: Grid, flat: int, kind: str) -> list[int]:
    """In-bounds neighbors of a cell in deterministic (lexicographic) order."""
    row = neighbor_table(grid.side, kind)[flat]
    return [int(v) for v in row if v >= 0]


@lru_cache(maxsize=None)
def serpentine_order(side: int) -> tuple[int, ...]:
    """Boustrophedon visit of all cells; consecutive cells share a face."""
    order = []
    for i in range(side):
        js = range(side) if i % 2 == 0 else range(side - 1, -1, -1)
        for j in js:
            ks = range(side) if (i + j) % 2 == 0 else range(side - 1, -1, -1)
            for k in ks:
                order.append((i * side + j) * side + k)
    return tuple(order)


@dataclass(frozen=True)
class CaConfig:
    neighborhood: str = MOORE
    strategy: str = "neighborhood"
    similarity_threshold: float | None = None
    threshold_level: int | None = None

    def __post_init__(self):
        if self.neighborhood not in NEIGHBORHOODS:
            raise InvalidSpec(f"unknown neighborhood: {self.neighborhood!r}")
        if self.strategy not in STRATEGIES:
            raise InvalidSpec(f"unknown strategy: {self.strategy!r}")
        given = (self.similarity_threshold is not None) + (
            self.threshold_level is not None
        )
        if given != 1:
            raise InvalidSpec(
                "exactly one of similarity_threshold / threshold_level required"
            )
        if self.threshold_level is not None and not 1 <= self.threshold_level <= 10:
            raise InvalidSpec(f"threshold level must be 1..10, got {self.threshold_level}")

    def resolved(self, threshold: float) -> "CaConfig":
        return CaConfig(
            neighborhood=self.neighborhood,
            strategy=self.strategy,
            similarity_threshold=float(threshold),
            threshold_level=None,
        )


@dataclass(frozen=True)
class ClusterAssignment:
    cluster_of: dict[int, int]
    n_clusters: int
    unplaced: frozenset[int] = frozenset()


@dataclass
class CaResult:
    grid: Grid
    unplaced: tuple[int, ...]
    config: CaConfig
    doc_ids: tuple[int, ...]
    work: int = 0  # deterministic operation count of the placement pass


def _legal(old: int, new: int) -> bool:
    if old == DEAD:
        return new == ALIVE or new >= 1
    if old == ALIVE:
        return new >= 1 or new == ISOLATED
    return False  # isolated and active cells never change


class _Writer:
    """All grid mutation goes through here so transitions stay observable."""

    def __init__(self, grid: Grid, table: np.ndarray, on_transition=None):
        self.cells = grid.cells
        self.table = table
        self.on_transition = on_transition

    def set(self, flat: int, new: int) -> None:
        old = int(self.cells[flat])
        if old == new:
            return
        if not _legal(old, new):
            raise IllegalTransition(f"cell {flat}: {old} -> {new}")
        self.cells[flat] = new
        if self.on_transition is not None:
            self.on_transition(int(flat), old, int(new))

    def place(self, flat: int, doc_id: int) -> None:
        self.set(flat, doc_id)
        for nb in self.table[flat]:
            if nb >= 0 and self.cells[nb] == DEAD:
                self.set(int(nb), ALIVE)


def _farthest_from_active(grid: Grid, candidates: np.ndarray) -> int:
    """Candidate cell maximizing the Chebyshev grid distance to the nearest
    active cell; ties resolve to the lowest flat index."""
    active_idx = np.flatnonzero(grid.cells >= 1)
    side = grid.side

    def coords(flat):
        i, rest = np.divmod(flat, side * side)
        j, k = np.divmod(rest, side)
        return np.stack([i, j, k], axis=1)

    cheb = np.abs(
        coords(candidates)[:, None, :] - coords(active_idx)[None, :, :]
    ).max(axis=2)
    nearest = cheb.min(axis=1)
    return int(candidates[int(np.argmax(nearest))])


def _run_neighborhood(
    doc_ids, sim: np.ndarray, config: CaConfig, writer: _Writer, grid: Grid
) -> tuple[list[int], int]:
    table = writer.table
    cells = writer.cells
    thr = config.similarity_threshold
    row_of = np.full(int(max(doc_ids)) + 1, -1, dtype=np.int64)
    row_of[np.asarray(doc_ids)] = np.arange(len(doc_ids))

    unplaced: list[int] = []
    work = 0
    for pos, doc in enumerate(doc_ids):
        if pos == 0:
            half = grid.side // 2
            writer.place(grid.index(half, half, half), doc)
            continue
        placed = False
        alive_idx = np.flatnonzero(cells == ALIVE)
        work += int(alive_idx.size) * table.shape[1]
        if alive_idx.size:
            nbrs = table[alive_idx]                      # (m, width)
            valid = nbrs >= 0
            states = cells[np.where(valid, nbrs, 0)]
            active = valid & (states >= 1)
            rows = row_of[np.where(active, states, doc_ids[0])]
            sims = np.where(active, sim[pos][rows], -np.inf)
            best = sims.max(axis=1)                      # best active neighbor per alive cell
            hits = np.flatnonzero(best >= thr)
            if hits.size:
                # first frontier cell (ascending flat index) that passes
                writer.place(int(alive_idx[hits[0]]), doc)
                placed = True
            else:
                # the whole frontier failed against this document: it walls
                # off (turns isolated), and the document seeds a new region
                # as far from the active cells as possible
                dead_idx = np.flatnonzero(cells == DEAD)
                work += int(dead_idx.size) * int((cells >= 1).sum())
                if dead_idx.size:
                    seed = _farthest_from_active(grid, dead_idx)
                else:
                    seed = _farthest_from_active(grid, alive_idx)
                for flat in alive_idx:
                    if int(flat) != seed:
                        writer.set(int(flat), ISOLATED)
                writer.place(seed, doc)
                placed = True
        if not placed:
            # no frontier at all; seed on a dead cell or report the document
            dead_idx = np.flatnonzero(cells == DEAD)
            work += int(dead_idx.size) * int((cells >= 1).sum())
            if dead_idx.size:
                writer.place(_farthest_from_active(grid, dead_idx), doc)
            else:
                unplaced.append(int(doc))
    return unplaced, work


def _run_linear(
    doc_ids, sim: np.ndarray, config: CaConfig, writer: _Writer, grid: Grid
) -> tuple[list[int], int]:
    order = serpentine_order(grid.side)
    thr = config.similarity_threshold
    cursor = 0
    prev_row = -1
    unplaced: list[int] = []
    work = 0
    for pos, doc in enumerate(doc_ids):
        work += 1
        if prev_row >= 0:
            if sim[pos, prev_row] < thr and cursor < len(order):
                # skip one path cell as a visible separator between clusters
                writer.set(order[cursor], ISOLATED)
                cursor += 1
                work += 1
        if cursor >= len(order):
            unplaced.append(int(doc))
            continue
        writer.place(order[cursor], doc)
        cursor += 1
        prev_row = pos
    return unplaced, work


def run(
    doc_ids,
    similarity: ProximityMatrix,
    config: CaConfig,
    on_transition=None,
) -> CaResult:
    """Place documents one by one, in corpus order.

    ``similarity`` must be a similarity-kind matrix whose row order matches
    ``doc_ids``, and ``config`` must carry a concrete similarity threshold.
    The first document seeds the grid center (neighborhood strategy) or the
    path start (linear strategy); every placement marks the dead part of its
    neighborhood alive.  A document whose best frontier similarity stays
    below the threshold turns the failed frontier isolated and re-seeds at
    the dead cell farthest from all active ones, falling back to the
    farthest frontier cell when no dead cell remains.  Documents that find
    neither a frontier nor a free cell are returned unplaced.
    """
    if config.similarity_threshold is None:
        raise InvalidSpec("config must be resolved to a concrete threshold")
    if similarity.kind != "similarity":
        raise InvalidSpec("run() needs a similarity matrix, got a distance matrix")
    doc_ids = tuple(int(d) for d in doc_ids)
    if len(doc_ids) == 0:
        raise InvalidSpec("no documents to place")
    sim = similarity.values
    if sim.shape != (len(doc_ids), len(doc_ids)):
        raise InvalidSpec(
            f"similarity matrix is {sim.shape}, expected square of {len(doc_ids)}"
        )
    grid = grid_for(len(doc_ids))
    if len(doc_ids) > grid.side**3:
        raise GridFull(
            f"{len(doc_ids)} documents cannot fit a side-{grid.side} grid"
        )
    table = neighbor_table(grid.side, config.neighborhood)
    writer = _Writer(grid, table, on_transition)
    if config.strategy == "neighborhood":
        unplaced, work = _run_neighborhood(doc_ids, sim, config, writer, grid)
    else:
        unplaced, work = _run_linear(doc_ids, sim, config, writer, grid)
    # extraction scans every active cell's neighborhood once
    work += grid.placed * table.shape[1]
    return CaResult(
        grid=grid, unplaced=tuple(unplaced), config=config, doc_ids=doc_ids,
        work=work,
    )


def extract_clusters(
    grid: Grid, kind: str, unplaced=()
) -> ClusterAssignment:
    """Connected components of active cells under the given adjacency.

    Cluster ids are 1-based and ordered by each component's smallest document
    id, so the labeling is independent of traversal order.
    """
    cells = grid.cells
    table = neighbor_table(grid.side, kind)
    active = np.flatnonzero(cells >= 1)
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in active:
        start = int(start)
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        docs: list[int] = []
        while queue:
            flat = queue.pop()
            docs.append(int(cells[flat]))
            for nb in table[flat]:
                nb = int(nb)
                if nb >= 0 and nb not in seen and cells[nb] >= 1:
                    seen.add(nb)
                    queue.append(nb)
        components.append(sorted(docs))
    components.sort(key=lambda docs: docs[0])
    cluster_of = {
        doc: cid for cid, docs in enumerate(components, start=1) for doc in docs
    }
    return ClusterAssignment(
        cluster_of=cluster_of,
        n_clusters=len(components),
        unplaced=frozenset(int(u) for u in unplaced),
    )


def grid_state_json(grid: Grid, assignment: ClusterAssignment | None = None) -> str:
    """Stable JSON for the viewer: non-dead cells in flat-index order."""
    cells = []
    for flat in np.flatnonzero(grid.cells != DEAD):
        flat = int(flat)
        state = int(grid.cells[flat])
        i, j, k = grid.coords(flat)
        entry: dict = {"i": i, "j": j, "k": k}
        if state >= 1:
            entry["state"] = "active"
            entry["doc_id"] = state
            if assignment is not None and state in assignment.cluster_of:
                entry["cluster_id"] = assignment.cluster_of[state]
        else:
            entry["state"] = _STATE_NAMES[state]
        cells.append(entry)
    payload = {
        "side": grid.side,
        "cells": cells,
        "n_clusters": assignment.n_clusters if assignment is not None else 0,
    }
    return json.dumps(payload, separators=(",", ":"))


def grid_from_state_json(text: str) -> Grid:
    payload = json.loads(text)
    grid = Grid(
        side=payload["side"],
        cells=np.zeros(payload["side"] ** 3, dtype=np.int32),
    )
    codes = {"alive": ALIVE, "isolated": ISOLATED}
    for cell in payload["cells"]:
        flat = grid.index(cell["i"], cell["j"], cell["k"])
        if cell["state"] == "active":
            grid.cells[flat] = cell["doc_id"]
        else:
            grid.cells[flat] = codes[cell["state"]]
    return grid
