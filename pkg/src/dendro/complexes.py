"""Face-closed complexes inside a representable or a union of shuffles.

A complex is a set of face keys closed under elementary faces.  The
ambient universe is either ``Sub(T)`` for a single tree, or the union of
``Sub(R_i)`` over all shuffles of a tensor pair; in the tensor case a face
key is shared across the shuffles containing it, which is what makes the
union of representables a genuine union.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Union

from .faces import ElementaryFace, Face, FaceError, FaceKey, SubPoset, enumerate_sub, full_face
from .shuffles import PercolationPoset, Shuffle, enumerate_shuffles
from .trees import PlanarTree, Tree, render_tree


class TensorAmbient:
    """The tensor of two planar trees: shuffle poset plus a global face
    table shared by key across shuffles."""

    def __init__(self, s_tree: PlanarTree, t_tree: PlanarTree):
        self.s_tree = s_tree
        self.t_tree = t_tree
        self.poset: PercolationPoset = enumerate_shuffles(s_tree, t_tree)
        self._universe: dict[FaceKey, Face] | None = None
        self._lock = threading.Lock()

    @property
    def ident(self) -> tuple[str, str]:
        return (render_tree(self.s_tree), render_tree(self.t_tree))

    def sub(self, shuffle: Shuffle) -> SubPoset:
        return enumerate_sub(shuffle.tree.tree)

    @property
    def universe(self) -> dict[FaceKey, Face]:
        with self._lock:
            if self._universe is None:
                table: dict[FaceKey, Face] = {}
                for sh in self.poset:
                    for f in self.sub(sh):
                        table.setdefault(f.key, f)
                self._universe = table
        return self._universe

    def __repr__(self) -> str:
        return f"TensorAmbient({self.ident[0]!r}, {self.ident[1]!r})"


Ambient = Union[Tree, TensorAmbient]


def _universe_of(ambient: Ambient) -> dict[FaceKey, Face]:
    if isinstance(ambient, TensorAmbient):
        return ambient.universe
    return {f.key: f for f in enumerate_sub(ambient)}


def _same_ambient(a: Ambient, b: Ambient) -> bool:
    if isinstance(a, TensorAmbient) and isinstance(b, TensorAmbient):
        return a.ident == b.ident
    return a == b


@dataclass(frozen=True)
class FaceComplex:
    """An ambient together with a face-closed set of face keys."""

    ambient: Ambient
    members: frozenset[FaceKey]

    def contains(self, face: Face | FaceKey) -> bool:
        key = face.key if isinstance(face, Face) else face
        return key in self.members

    def __contains__(self, face) -> bool:
        return self.contains(face)

    def __len__(self) -> int:
        return len(self.members)

    def union(self, other: "FaceComplex") -> "FaceComplex":
        if not _same_ambient(self.ambient, other.ambient):
            raise FaceError("complexes live in different ambients")
        return FaceComplex(self.ambient, self.members | other.members)

    def intersection(self, other: "FaceComplex") -> "FaceComplex":
        if not _same_ambient(self.ambient, other.ambient):
            raise FaceError("complexes live in different ambients")
        return FaceComplex(self.ambient, self.members & other.members)

    def __or__(self, other):
        return self.union(other)

    def __and__(self, other):
        return self.intersection(other)

    def missing_faces(self) -> list[Face]:
        """Ambient faces not in the complex, by rank then key."""
        table = _universe_of(self.ambient)
        out = [f for k, f in table.items() if k not in self.members]
        out.sort(key=lambda f: (f.rank, f.key))
        return out

    def maximal_members(self) -> list[FaceKey]:
        """Members not properly contained in another member."""
        faces = [_universe_of(self.ambient)[k] for k in self.members]
        by_rank = sorted(faces, key=lambda f: (-f.rank, f.key))
        maximal: list[Face] = []
        out = []
        for f in by_rank:
            if any(_face_leq(f, m) for m in maximal):
                continue
            maximal.append(f)
            out.append(f.key)
        return sorted(out)

    def is_closed(self) -> bool:
        from .faces import all_elementary_faces

        table = _universe_of(self.ambient)
        for k in self.members:
            for ef in all_elementary_faces(table[k]):
                if ef.domain.key not in self.members:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "ambient": ambient_to_json(self.ambient),
            "maximal": [key_to_json(k) for k in self.maximal_members()],
        }


def _face_leq(a: Face, b: Face) -> bool:
    """a <= b in the face order; cheap test via closure membership."""
    if a.key == b.key:
        return True
    if not a.edges <= b.edges:
        return False
    sub = enumerate_sub(b.as_tree())
    return a.key in sub.index


def closure(ambient: Ambient, faces: Iterable[Face]) -> FaceComplex:
    """The smallest complex containing the given faces."""
    from .faces import all_elementary_faces

    members: set[FaceKey] = set()
    queue = list(faces)
    while queue:
        f = queue.pop()
        if f.key in members:
            continue
        members.add(f.key)
        for ef in all_elementary_faces(f):
            if ef.domain.key not in members:
                queue.append(ef.domain)
    return FaceComplex(ambient, frozenset(members))


def empty_complex(ambient: Ambient) -> FaceComplex:
    return FaceComplex(ambient, frozenset())


def full_complex(ambient: Ambient) -> FaceComplex:
    return FaceComplex(ambient, frozenset(_universe_of(ambient)))


def boundary_complex(t: Tree) -> FaceComplex:
    """Union of the closures of all codimension-one faces."""
    from .faces import all_elementary_faces

    top = full_face(t)
    if top.rank == 0:
        raise FaceError("the boundary needs a tree with at least one vertex")
    return closure(t, [ef.domain for ef in all_elementary_faces(top)])


def horn_complex(t: Tree, omit: ElementaryFace | tuple[str, str]) -> FaceComplex:
    """Union of the closures of all codimension-one faces except one."""
    from .faces import all_elementary_faces

    top = full_face(t)
    if isinstance(omit, ElementaryFace):
        site = (omit.kind, omit.at)
    else:
        site = omit
    efs = all_elementary_faces(top)
    if site not in {(ef.kind, ef.at) for ef in efs}:
        raise FaceError(f"{site} is not an elementary face of the tree")
    return closure(t, [ef.domain for ef in efs if (ef.kind, ef.at) != site])


def segal_core(t: Tree) -> FaceComplex:
    """Union of the corolla faces, one per vertex (with its incident edges);
    the corolla of a stump is the capped unit."""
    top = full_face(t)
    if top.rank == 0:
        raise FaceError("the Segal core needs a tree with at least one vertex")
    corollas = []
    for o in t.edges - t.leaves:
        inputs = t.vertex(o)
        if inputs:
            corollas.append(Face(t, {o} | set(inputs), ()))
        else:
            corollas.append(Face(t, {o}, {o}))
    return closure(t, corollas)


def ambient_to_json(ambient: Ambient) -> dict:
    if isinstance(ambient, TensorAmbient):
        return {"type": "tensor", "s": ambient.ident[0], "t": ambient.ident[1]}
    return {"type": "tree", "tree": render_tree(ambient)}


def ambient_from_json(data: dict) -> Ambient:
    from .trees import parse_tree

    if data["type"] == "tree":
        return parse_tree(data["tree"]).tree
    if data["type"] == "tensor":
        return TensorAmbient(parse_tree(data["s"]), parse_tree(data["t"]))
    raise FaceError(f"unknown ambient type {data['type']!r}")


def key_to_json(key: FaceKey) -> dict:
    return {"edges": list(key[0]), "caps": list(key[1])}


def key_from_json(item: dict) -> FaceKey:
    return (tuple(sorted(item["edges"])), tuple(sorted(item["caps"])))
