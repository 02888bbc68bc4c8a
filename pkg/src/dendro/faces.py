"""Faces of a tree and the graded poset they form.

A face of an ambient tree is canonically keyed by a pair ``(edges, caps)``:
the edge set of the subtree, and the subset of its maximal edges that carry
a (possibly composite) stump.  A maximal edge outside ``caps`` is a leaf of
the face.  Two faces are equal iff their keys coincide, regardless of which
ambient object produced them.

Elementary face maps come in three kinds:

* ``inner``  -- contract an inner edge (stump outputs count as inner);
* ``top``    -- chop a top vertex, or remove a cap;
* ``bottom`` -- chop the root vertex, keeping the subtree over one input.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .trees import Operation, Tree, TreeError, is_operation

FaceKey = tuple[tuple[str, ...], tuple[str, ...]]

INNER = "inner"
TOP = "top"
BOTTOM = "bottom"


class FaceError(ValueError):
    """Raised for invalid faces or inapplicable face maps."""


class MixedPairError(FaceError):
    """No commuting square exists for a mixed pair."""


def make_key(edges: Iterable[str], caps: Iterable[str]) -> FaceKey:
    return (tuple(sorted(edges)), tuple(sorted(caps)))


class Face:
    """A subtree of an ambient tree, identified by its ``(edges, caps)`` key.

    The ambient tree supplies the partial order; all derived structure
    (root, per-edge inputs, leaves, rank) is computed once at construction.
    """

    __slots__ = ("ambient", "edges", "caps", "key", "root", "parent", "children", "rank")

    def __init__(self, ambient: Tree, edges: Iterable[str], caps: Iterable[str] = ()):
        edges = frozenset(edges)
        caps = frozenset(caps)
        unknown = edges - ambient.edges
        if unknown:
            raise FaceError(f"edges not in ambient tree: {sorted(unknown)}")
        parent: dict[str, str] = {}
        children: dict[str, list[str]] = {e: [] for e in edges}
        roots = []
        for e in edges:
            p = e
            while p != ambient.root:
                p = ambient.parent[p]
                if p in edges:
                    parent[e] = p
                    children[p].append(e)
                    break
            else:
                roots.append(e)
        if len(roots) != 1:
            raise FaceError(f"face must have a unique minimal edge, found {sorted(roots)}")
        if not caps <= {e for e in edges if not children[e]}:
            raise FaceError("caps must be maximal edges of the face")
        self.ambient = ambient
        self.edges = edges
        self.caps = caps
        self.key = make_key(edges, caps)
        self.root = roots[0]
        self.parent = parent
        self.children = {e: tuple(sorted(cs)) for e, cs in children.items()}
        self.rank = sum(1 for e in edges if children[e]) + len(caps)

    # -- structure -------------------------------------------------------

    @property
    def maximal(self) -> frozenset[str]:
        return frozenset(e for e in self.edges if not self.children[e])

    @property
    def leaves(self) -> frozenset[str]:
        return self.maximal - self.caps

    @property
    def inner_edges(self) -> frozenset[str]:
        return self.edges - self.leaves - {self.root}

    def vertex_inputs(self, e: str) -> frozenset[str]:
        """Inputs of the face's vertex with output ``e`` (empty for a cap)."""
        if e in self.leaves:
            raise FaceError(f"{e!r} is a leaf of the face")
        return frozenset(self.children[e])

    def is_corolla(self) -> bool:
        return self.rank == 1 and bool(self.children[self.root])

    def as_tree(self) -> Tree:
        """The face as a standalone tree with the same edge names."""
        return Tree(self.edges, self.parent, self.leaves)

    def to_json(self) -> dict:
        return {"edges": list(self.key[0]), "caps": list(self.key[1])}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Face):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        caps = "; caps " + ",".join(self.key[1]) if self.caps else ""
        return f"Face({','.join(self.key[0])}{caps})"


def full_face(ambient: Tree) -> Face:
    return Face(ambient, ambient.edges, ambient.stump_outputs)


def face_from_key(ambient: Tree, key: FaceKey) -> Face:
    return Face(ambient, key[0], key[1])


@dataclass(frozen=True)
class ElementaryFace:
    """An elementary face map ``domain -> codomain``.

    ``at`` is the contracted edge (inner), the output of the chopped vertex
    or removed cap (top), or the kept input of the root vertex (bottom).
    """

    kind: str
    at: str
    domain: Face
    codomain: Face = field(compare=False)
    codomain_key: FaceKey = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "codomain_key", self.codomain.key)

    def assigned_operation(self) -> Operation:
        """The operation used to order face maps: ``(e;e)`` for inner,
        ``(w;out)`` for top, ``(v;root)`` for bottom."""
        if self.kind == INNER:
            return Operation(frozenset((self.at,)), self.at)
        if self.kind == TOP:
            return Operation(self.codomain.vertex_inputs(self.at), self.at)
        return Operation(
            self.codomain.vertex_inputs(self.codomain.root), self.codomain.root
        )

    def __repr__(self) -> str:
        return f"{self.kind}({self.at}): {self.domain!r} -> {self.codomain!r}"


def apply_elementary_face(p: Face, kind: str, at: str) -> Face:
    """The codimension-one face of ``p`` obtained by the given map."""
    if kind == INNER:
        if at not in p.inner_edges:
            raise FaceError(f"{at!r} is not an inner edge of the face")
        edges = p.edges - {at}
        caps = p.caps
        if at in caps:
            caps = caps - {at}
            par = p.parent[at]
            if p.children[par] == (at,):
                caps = caps | {par}
        return Face(p.ambient, edges, caps)
    if kind == TOP:
        if at in p.caps:
            return Face(p.ambient, p.edges, p.caps - {at})
        if at in p.leaves or at not in p.edges:
            raise FaceError(f"{at!r} carries no vertex in the face")
        inputs = set(p.children[at])
        if not inputs <= p.leaves:
            raise FaceError(f"vertex over {at!r} is not a top vertex")
        return Face(p.ambient, p.edges - inputs, p.caps)
    if kind == BOTTOM:
        if at not in p.children.get(p.root, ()):
            raise FaceError(f"{at!r} is not an input of the root vertex")
        if p.is_corolla():
            return Face(p.ambient, {at}, ())
        others = set(p.children[p.root]) - {at}
        if not others <= p.leaves:
            raise FaceError("all other inputs of the root vertex must be leaves")
        if at in p.leaves:
            raise FaceError("kept input must be the unique non-leaf input")
        kept = {e for e in p.edges if p.ambient.leq(at, e)}
        return Face(p.ambient, kept, p.caps & kept)
    raise FaceError(f"unknown face kind {kind!r}")


def all_elementary_faces(p: Face) -> list[ElementaryFace]:
    """All elementary face maps into ``p``, in a deterministic order.

    Every inner edge contributes a contraction, every top vertex and every
    cap a top face, and the root vertex one bottom face per admissible kept
    input (all inputs, for a corolla).
    """
    out: list[ElementaryFace] = []
    for e in sorted(p.inner_edges):
        out.append(ElementaryFace(INNER, e, apply_elementary_face(p, INNER, e), p))
    tops = set(p.caps)
    for e in p.edges:
        if p.children[e] and set(p.children[e]) <= p.leaves:
            tops.add(e)
    for e in sorted(tops):
        out.append(ElementaryFace(TOP, e, apply_elementary_face(p, TOP, e), p))
    root_inputs = p.children.get(p.root, ())
    if root_inputs:
        if p.is_corolla():
            kept = list(root_inputs)
        else:
            non_leaf = [e for e in root_inputs if e not in p.leaves]
            kept = non_leaf if len(non_leaf) == 1 else []
        for e in sorted(kept):
            out.append(ElementaryFace(BOTTOM, e, apply_elementary_face(p, BOTTOM, e), p))
    return out


def valid_face_key(ambient: Tree, edges: Iterable[str], caps: Iterable[str]) -> bool:
    """Fast membership predicate for ``Sub``: checks the face invariants
    directly against the ambient tree, without any closure computation."""
    edges = frozenset(edges)
    caps = frozenset(caps)
    if not edges or not edges <= ambient.edges:
        return False
    minimal = [e for e in edges if not any(x != e and ambient.leq(x, e) for x in edges)]
    if len(minimal) != 1:
        return False
    maximal = set()
    for e in edges:
        above = [x for x in edges if x != e and ambient.leq(e, x)]
        if not above:
            maximal.add(e)
            continue
        inputs = frozenset(
            x for x in above if not any(y != x and y in above and ambient.leq(y, x) for y in above)
        )
        if not is_operation(ambient, Operation(inputs, e)):
            return False
    if not caps <= maximal:
        return False
    for c in caps:
        if not is_operation(ambient, Operation(frozenset(), c)):
            return False
    return True


def all_valid_face_keys(ambient: Tree) -> set[FaceKey]:
    """Every key accepted by the face invariants, by brute enumeration.

    Checks the same conditions as :func:`valid_face_key` over all edge
    subsets and cap choices, using bitmask arithmetic.  This is the oracle
    side of the predicate-equals-closure equivalence; it never consults the
    elementary face maps.
    """
    edges = sorted(ambient.edges)
    bit = {e: 1 << i for i, e in enumerate(edges)}
    above = {}  # strictly above, as masks
    below = {}
    for e in edges:
        above[e] = 0
        below[e] = 0
        for x in edges:
            if x != e and ambient.leq(e, x):
                above[e] |= bit[x]
            if x != e and ambient.leq(x, e):
                below[e] |= bit[x]
    leaf_sites = [bit[l] | below[l] for l in sorted(ambient.leaves)]
    stump_sites = [bit[s] | below[s] for s in sorted(ambient.stump_outputs)]
    dead = [s for s in edges if not any(ambient.leq(s, l) for l in ambient.leaves)]

    def vertex_ok(e: str, members: int) -> bool:
        up = members & above[e]
        if not up:
            return True
        inputs = 0
        m = up
        while m:
            b = m & -m
            m ^= b
            x = edges[b.bit_length() - 1]
            if not up & below[x]:
                inputs |= b
        for beloweq in leaf_sites:
            if beloweq & bit[e]:
                if (inputs & beloweq).bit_count() != 1:
                    return False
        for beloweq in stump_sites:
            if beloweq & bit[e]:
                if (inputs & beloweq).bit_count() > 1:
                    return False
        return True

    result: set[FaceKey] = set()
    for r in edges:
        up_edges = [x for x in edges if above[r] & bit[x]]
        for n in range(1 << len(up_edges)):
            members = bit[r]
            for i, x in enumerate(up_edges):
                if n >> i & 1:
                    members |= bit[x]
            ok = True
            maximal = []
            m = members
            while m and ok:
                b = m & -m
                m ^= b
                e = edges[b.bit_length() - 1]
                if not members & above[e]:
                    maximal.append(e)
                elif not vertex_ok(e, members):
                    ok = False
            if not ok:
                continue
            cappable = [e for e in maximal if e in dead]
            edge_names = tuple(sorted(e for e in edges if members & bit[e]))
            for k in range(1 << len(cappable)):
                caps = tuple(sorted(c for i, c in enumerate(cappable) if k >> i & 1))
                result.add((edge_names, caps))
    return result


# ---------------------------------------------------------------------------
# The face poset
# ---------------------------------------------------------------------------


class SubPoset:
    """``Sub(T)``: all faces of a tree, graded by rank, with cover maps.

    Built as the closure of the full face under elementary face maps.
    Provides downset/upset bitmasks for fast order queries.
    """

    def __init__(self, ambient: Tree):
        self.ambient = ambient
        top = full_face(ambient)
        by_key: dict[FaceKey, Face] = {top.key: top}
        covers: list[ElementaryFace] = []
        queue = [top]
        while queue:
            p = queue.pop()
            for ef in all_elementary_faces(p):
                covers.append(ef)
                if ef.domain.key not in by_key:
                    by_key[ef.domain.key] = ef.domain
                    queue.append(ef.domain)
        self.faces: list[Face] = sorted(by_key.values(), key=lambda f: (f.rank, f.key))
        self.index: dict[FaceKey, int] = {f.key: i for i, f in enumerate(self.faces)}
        self.top = top
        covers.sort(key=lambda ef: (ef.codomain_key, ef.kind, ef.at))
        self.covers = covers
        self._faces_of: dict[FaceKey, list[ElementaryFace]] = {f.key: [] for f in self.faces}
        self._extensions_of: dict[FaceKey, list[ElementaryFace]] = {
            f.key: [] for f in self.faces
        }
        for ef in self.covers:
            self._faces_of[ef.codomain_key].append(ef)
            self._extensions_of[ef.domain.key].append(ef)
        # downsets as bitmasks, computed up the rank grading
        self._down: list[int] = [0] * len(self.faces)
        for i, f in enumerate(self.faces):
            mask = 1 << i
            for ef in self._faces_of[f.key]:
                mask |= self._down[self.index[ef.domain.key]]
            self._down[i] = mask

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self) -> Iterator[Face]:
        return iter(self.faces)

    def __contains__(self, face: Face | FaceKey) -> bool:
        key = face.key if isinstance(face, Face) else face
        return key in self.index

    def face(self, key: FaceKey) -> Face:
        return self.faces[self.index[key]]

    def faces_of(self, p: Face | FaceKey) -> list[ElementaryFace]:
        """Elementary face maps into ``p``."""
        return self._faces_of[p.key if isinstance(p, Face) else p]

    def extensions_of(self, p: Face | FaceKey) -> list[ElementaryFace]:
        """Elementary face maps out of ``p`` (codimension-one extensions)."""
        return self._extensions_of[p.key if isinstance(p, Face) else p]

    def leq(self, a: Face | FaceKey, b: Face | FaceKey) -> bool:
        ia = self.index[a.key if isinstance(a, Face) else a]
        ib = self.index[b.key if isinstance(b, Face) else b]
        return bool(self._down[ib] >> ia & 1)

    def downset_mask(self, p: Face | FaceKey) -> int:
        return self._down[self.index[p.key if isinstance(p, Face) else p]]

    def downset(self, p: Face | FaceKey) -> list[Face]:
        mask = self.downset_mask(p)
        return [f for i, f in enumerate(self.faces) if mask >> i & 1]

    def minimal_upper_bounds(self, a: Face, b: Face) -> list[Face]:
        ia, ib = self.index[a.key], self.index[b.key]
        ubs = [i for i in range(len(self.faces)) if self._down[i] >> ia & 1 and self._down[i] >> ib & 1]
        ub_mask = 0
        for i in ubs:
            ub_mask |= 1 << i
        return [self.faces[i] for i in ubs if self._down[i] & ub_mask == 1 << i]


_sub_cache: dict[Tree, SubPoset] = {}
_sub_lock = threading.Lock()


def enumerate_sub(ambient: Tree) -> SubPoset:
    """The poset of all faces of a tree (memoized per tree)."""
    with _sub_lock:
        poset = _sub_cache.get(ambient)
    if poset is None:
        poset = SubPoset(ambient)
        with _sub_lock:
            _sub_cache.setdefault(ambient, poset)
    return poset


# ---------------------------------------------------------------------------
# Pair classification
# ---------------------------------------------------------------------------

GOOD = "good"
MIXED = "mixed"
ADJACENT = "adjacent"
BAD_SIBLING_TOPS = "bad_sibling_tops"
BAD_SIBLING_BOTTOMS = "bad_sibling_bottoms"


def classify_pair(f: ElementaryFace, g: ElementaryFace, mode: str = "faces") -> str:
    """Classify a pair of elementary face maps.

    ``mode`` states the shared context: ``"faces"`` for two faces of the
    same codomain, ``"extensions"`` for two extensions of the same domain,
    ``"composable"`` for ``f`` followed by ``g`` (f.codomain == g.domain).
    """
    if f == g:
        raise FaceError("classify_pair requires two distinct maps")
    if mode == "faces":
        if f.codomain_key != g.codomain_key:
            raise FaceError("face-pair mode requires a common codomain")
        if _is_mixed(f, g) or _is_mixed(g, f):
            return MIXED
        return GOOD
    if mode == "extensions":
        if f.domain.key != g.domain.key:
            raise FaceError("extension-pair mode requires a common domain")
        if f.kind == TOP and g.kind == TOP and f.at == g.at:
            return BAD_SIBLING_TOPS
        if f.kind == BOTTOM and g.kind == BOTTOM:
            return BAD_SIBLING_BOTTOMS
        return GOOD
    if mode == "composable":
        if f.codomain_key != g.domain.key:
            raise FaceError("composable mode requires f.codomain == g.domain")
        return ADJACENT if _is_adjacent(f, g) else GOOD
    raise FaceError(f"unknown mode {mode!r}")


def _is_mixed(inner: ElementaryFace, outer: ElementaryFace) -> bool:
    """True for ``{inner(e), outer}`` with e the unique inner edge attached
    to the chopped outer vertex."""
    if inner.kind != INNER:
        return False
    if outer.kind == TOP:
        return outer.at == inner.at
    if outer.kind == BOTTOM:
        return outer.at == inner.at
    return False


def _is_adjacent(f: ElementaryFace, g: ElementaryFace) -> bool:
    """Adjacency for a composable pair ``f: Q -> P``, ``g: P -> P'``: the
    pair admits no commuting square, i.e. the map labelled like ``f`` cannot
    be transported to a face of ``g``'s codomain."""
    big = g.codomain
    for cand in all_elementary_faces(big):
        if cand.kind != f.kind or cand.at != f.at:
            continue
        for back in all_elementary_faces(cand.domain):
            if back.kind == g.kind and back.at == g.at and back.domain.key == f.domain.key:
                return False
    return True


def commute_square(
    p: Face, f: ElementaryFace, g: ElementaryFace
) -> tuple[Face, ElementaryFace, ElementaryFace, ElementaryFace, ElementaryFace]:
    """The commuting square of a non-mixed pair of faces of ``p``.

    Returns ``(corner, f_low, g_low, f_high, g_high)`` where the square is
    ``corner -> f.domain -> p`` (via g_low then f=f_high) and equally
    ``corner -> g.domain -> p``.  Raises :class:`MixedPairError` for a mixed
    pair (no square exists).
    """
    if f.codomain_key != p.key or g.codomain_key != p.key:
        raise FaceError("both maps must be faces of p")
    if p.rank < 2:
        raise FaceError("squares need a face with at least two vertices")
    if classify_pair(f, g, mode="faces") == MIXED:
        raise MixedPairError(f"{f.kind}({f.at}) and {g.kind}({g.at}) form a mixed pair")
    fg = apply_elementary_face(f.domain, g.kind, g.at)
    gf = apply_elementary_face(g.domain, f.kind, f.at)
    if fg.key != gf.key:
        raise FaceError("dendroidal relation failed; pair does not commute")
    g_low = ElementaryFace(g.kind, g.at, fg, f.domain)
    f_low = ElementaryFace(f.kind, f.at, fg, g.domain)
    return fg, f_low, g_low, f, g


def join_faces(
    p: Face, f: ElementaryFace, g: ElementaryFace
) -> tuple[Face, list[ElementaryFace], list[ElementaryFace]]:
    """The unique minimal common extension of a codimension-one cospan.

    ``f: p -> p1`` and ``g: p -> p2`` are extensions of ``p`` inside a common
    ambient tree.  Returns ``(join, seq1, seq2)`` with equal-length extension
    sequences from ``p1`` and ``p2`` up to the join, recovered greedily.
    """
    if f.domain.key != p.key or g.domain.key != p.key:
        raise FaceError("both maps must be extensions of p")
    poset = enumerate_sub(p.ambient)
    mins = poset.minimal_upper_bounds(f.codomain, g.codomain)
    if len(mins) != 1:
        raise FaceError(
            f"expected a unique minimal common extension, found {len(mins)}"
        )
    join = mins[0]
    return join, _chain_up(poset, f.codomain, join), _chain_up(poset, g.codomain, join)


def _chain_up(poset: SubPoset, start: Face, goal: Face) -> list[ElementaryFace]:
    seq: list[ElementaryFace] = []
    current = start
    while current.key != goal.key:
        step = min(
            (
                ef
                for ef in poset.extensions_of(current)
                if poset.leq(ef.codomain_key, goal.key)
            ),
            key=lambda ef: (ef.kind, ef.at, ef.codomain_key),
        )
        seq.append(step)
        current = step.codomain
    return seq


def join_bad_tops_explicit(p: Face, f: ElementaryFace, g: ElementaryFace) -> Face:
    """Direct construction of the join of two bad sibling-top extensions,
    used as a cross-check for the upper-bound search.

    The join grows both input sets over the shared edge; a new maximal
    edge gets capped exactly when one of the two sides has no input on its
    branch (that side's operation needs the branch to be dead).
    """
    if classify_pair(f, g, mode="extensions") != BAD_SIBLING_TOPS:
        raise FaceError("expected a bad pair of sibling top extensions")
    amb = p.ambient
    a = set(f.codomain.vertex_inputs(f.at))
    b = set(g.codomain.vertex_inputs(g.at))
    edges = p.edges | a | b
    new_max = {
        x for x in a | b if not any(y != x and amb.leq(x, y) for y in edges)
    }
    caps = set(p.caps)
    for x in new_max:
        if not any(amb.leq(y, x) for y in a) or not any(amb.leq(y, x) for y in b):
            caps.add(x)
    return Face(amb, edges, frozenset(caps))
