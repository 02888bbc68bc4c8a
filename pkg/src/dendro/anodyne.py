"""Extension sets, their axioms, and horn-filtration certificates.

An extension set for a base complex ``A`` inside ``Sub(R)`` is a set of
elementary face maps between faces missing with respect to ``A`` that
satisfies five axioms (no forbidden pairs, controlled bad pairs, closure
under squares and joins, and existence).  Whenever the axioms hold, the
missing region is swept out by *canonical extensions*: pairs ``(D, P)``
where the map ``D -> P`` is least both among the set's faces of ``P`` and
among its extensions of ``D``.  Emitting one horn step per canonical pair,
in order of (rank, extension count), yields a certificate that the
inclusion of the base is a composition of horn pushouts.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .complexes import (
    Ambient,
    FaceComplex,
    ambient_from_json,
    ambient_to_json,
    key_from_json,
    key_to_json,
)
from .faces import (
    ADJACENT,
    BOTTOM,
    INNER,
    MIXED,
    TOP,
    ElementaryFace,
    Face,
    FaceError,
    FaceKey,
    SubPoset,
    classify_pair,
    enumerate_sub,
)
from .order import EdgeOrder, compare_face_maps
from .trees import Tree

OPERADIC = "operadic"
COVARIANT = "covariant"
STABLE = "stable"

AXIOMS = ("F1", "F2", "F3", "F4", "F5")


class AxiomError(FaceError):
    """An extension-set axiom failed."""

    def __init__(self, report: "AxiomReport"):
        super().__init__("extension set fails axioms: " + report.summary())
        self.report = report


class ReplayGuardError(FaceError):
    """A freshly built certificate failed its own replay (internal bug)."""


def _sig(ef: ElementaryFace) -> tuple:
    return (ef.kind, ef.at, ef.domain.key, ef.codomain_key)


class ExtensionSet:
    """A base complex inside ``Sub(ambient)`` plus a set of elementary face
    maps whose endpoints are both missing."""

    def __init__(self, ambient: Tree, base: FaceComplex, members: Iterable[ElementaryFace]):
        self.ambient = ambient
        self.base = base
        self.poset: SubPoset = enumerate_sub(ambient)
        self.members = frozenset(members)
        self._member_sigs = frozenset(_sig(ef) for ef in self.members)
        for ef in self.members:
            if base.contains(ef.domain.key) or base.contains(ef.codomain_key):
                raise FaceError(f"member {ef!r} touches a non-missing face")
        self.missing: list[Face] = [
            f for f in self.poset if not base.contains(f.key)
        ]
        self._missing_keys = frozenset(f.key for f in self.missing)
        self._faces_in: dict[FaceKey, list[ElementaryFace]] = {}
        self._exts_in: dict[FaceKey, list[ElementaryFace]] = {}
        for ef in sorted(self.members, key=_sig):
            self._faces_in.setdefault(ef.codomain_key, []).append(ef)
            self._exts_in.setdefault(ef.domain.key, []).append(ef)

    def is_missing(self, key: FaceKey) -> bool:
        return key in self._missing_keys

    def contains_map(self, ef: ElementaryFace) -> bool:
        return _sig(ef) in self._member_sigs

    def faces_in_set(self, p: Face | FaceKey) -> list[ElementaryFace]:
        key = p.key if isinstance(p, Face) else p
        return self._faces_in.get(key, [])

    def extensions_in_set(self, p: Face | FaceKey) -> list[ElementaryFace]:
        key = p.key if isinstance(p, Face) else p
        return self._exts_in.get(key, [])


def inner_extension_set(ambient: Tree, base: FaceComplex) -> ExtensionSet:
    """All inner face maps between missing faces (the Segal-core set)."""
    poset = enumerate_sub(ambient)
    members = [
        ef
        for ef in poset.covers
        if ef.kind == INNER
        and not base.contains(ef.domain.key)
        and not base.contains(ef.codomain_key)
    ]
    return ExtensionSet(ambient, base, members)


@dataclass
class AxiomReport:
    failures: dict[str, list[str]]

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def passed(self, axiom: str) -> bool:
        return not self.failures.get(axiom)

    def summary(self) -> str:
        if self.ok:
            return "all axioms hold"
        parts = []
        for ax in AXIOMS:
            if self.failures.get(ax):
                parts.append(f"{ax}: {self.failures[ax][0]}")
        return "; ".join(parts)


def check_axioms(es: ExtensionSet) -> AxiomReport:
    """Evaluate the five extension-set axioms literally, with witnesses."""
    failures: dict[str, list[str]] = {ax: [] for ax in AXIOMS}
    poset = es.poset

    # F1: no mixed pair of faces, no bad pair of extensions, and no
    # adjacent composable pair inside the set.
    for p in es.missing:
        ff = es.faces_in_set(p.key)
        for i, f in enumerate(ff):
            for g in ff[i + 1 :]:
                if classify_pair(f, g, mode="faces") == MIXED:
                    failures["F1"].append(f"mixed pair {f!r} / {g!r}")
        ee = es.extensions_in_set(p.key)
        for i, f in enumerate(ee):
            for g in ee[i + 1 :]:
                if classify_pair(f, g, mode="extensions").startswith("bad"):
                    failures["F1"].append(f"bad pair {f!r} / {g!r}")
    for f in es.members:
        for g in es.extensions_in_set(f.codomain_key):
            if classify_pair(f, g, mode="composable") == ADJACENT:
                failures["F1"].append(f"adjacent pair {f!r} then {g!r}")

    # F2: an extension outside the set has at most one bad partner inside.
    for p in es.missing:
        inside = es.extensions_in_set(p.key)
        if not inside:
            continue
        for g in poset.extensions_of(p.key):
            if es.contains_map(g):
                continue
            bad = [
                f
                for f in inside
                if classify_pair(f, g, mode="extensions").startswith("bad")
            ]
            if len(bad) > 1:
                failures["F2"].append(f"{g!r} has bad partners {bad!r}")

    # F3: two-out-of-four closure on commuting squares.
    for p in poset:
        if p.rank < 2:
            continue
        ff = poset.faces_of(p.key)
        for i, f in enumerate(ff):
            for g in ff[i + 1 :]:
                if classify_pair(f, g, mode="faces") == MIXED:
                    continue
                corner = None
                for ef in poset.faces_of(f.domain.key):
                    if ef.kind == g.kind and ef.at == g.at:
                        corner = ef
                        break
                if corner is None:
                    continue
                g_low = corner
                f_low = next(
                    (
                        ef
                        for ef in poset.faces_of(g.domain.key)
                        if ef.domain.key == corner.domain.key
                        and ef.kind == f.kind
                        and ef.at == f.at
                    ),
                    None,
                )
                if f_low is None:
                    continue
                square = {"f": (f_low, f), "g": (g_low, g)}
                got_f = [m for m in square["f"] if es.contains_map(m)]
                got_g = [m for m in square["g"] if es.contains_map(m)]
                if got_f and got_g:
                    missing = [
                        m
                        for m in square["f"] + square["g"]
                        if not es.contains_map(m)
                    ]
                    if missing:
                        failures["F3"].append(
                            f"square at {p!r} not closed: missing {missing[0]!r}"
                        )

    # F4: extension sequences up to joins stay inside the set.
    join_cache: dict[tuple[FaceKey, FaceKey], Face] = {}
    for f in sorted(es.members, key=_sig):
        p = f.domain
        for g in poset.extensions_of(p.key):
            if _sig(g) == _sig(f):
                continue
            pair = tuple(sorted((f.codomain_key, g.codomain_key)))
            join = join_cache.get(pair)
            if join is None:
                mins = poset.minimal_upper_bounds(f.codomain, g.codomain)
                if len(mins) != 1:
                    failures["F4"].append(f"non-unique join over {p!r}")
                    continue
                join = join_cache.setdefault(pair, mins[0])
            low = g.codomain_key
            jmask = poset.downset_mask(join.key)
            for x in poset:
                if not (jmask >> poset.index[x.key]) & 1:
                    continue
                if not poset.leq(low, x.key):
                    continue
                for step in poset.faces_of(x.key):
                    if poset.leq(low, step.domain.key) and not es.contains_map(step):
                        failures["F4"].append(
                            f"interval map {step!r} outside the set (join of "
                            f"{f!r} and {g!r})"
                        )
                if failures["F4"]:
                    break
            if failures["F4"]:
                break
        if failures["F4"]:
            break

    # F5: every missing face has a face or an extension in the set.
    for p in es.missing:
        if not es.faces_in_set(p.key) and not es.extensions_in_set(p.key):
            failures["F5"].append(f"isolated missing face {p!r}")

    return AxiomReport(failures)


def canonical_extensions(
    es: ExtensionSet, ord: EdgeOrder
) -> list[ElementaryFace]:
    """All canonical extensions: maps least both in the faces of their
    codomain and in the extensions of their domain.

    Asserts the two structural guarantees (pairs are disjoint; every
    missing face occurs in some pair).
    """
    cmp = functools.cmp_to_key(lambda a, b: compare_face_maps(ord, a, b))
    pairs: list[ElementaryFace] = []
    for p in es.missing:
        ff = es.faces_in_set(p.key)
        if not ff:
            continue
        best = min(ff, key=cmp)
        ee = es.extensions_in_set(best.domain.key)
        least_ext = min(ee, key=cmp)
        if _sig(least_ext) == _sig(best):
            pairs.append(best)
    seen: set[FaceKey] = set()
    for ef in pairs:
        for key in (ef.domain.key, ef.codomain_key):
            if key in seen:
                raise FaceError(f"canonical extensions are not disjoint at {key}")
            seen.add(key)
    uncovered = [p for p in es.missing if p.key not in seen]
    if uncovered:
        raise FaceError(
            f"missing faces not covered by canonical extensions: {uncovered[:3]!r}"
        )
    return pairs


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One horn pushout.  ``batch`` is ``(phase, rank, extensions)``: steps
    sharing a batch label are mutually independent; the phase component
    separates the filtrations a composite certificate was assembled from,
    the other two are the rank of the omitted face and the number of its
    set-extensions."""

    face: FaceKey
    omit_kind: str
    omit_at: str
    batch: tuple[int, int, int]

    def to_json(self) -> dict:
        return {
            "face": key_to_json(self.face),
            "omit": {"kind": self.omit_kind, "at": self.omit_at},
            "batch": list(self.batch),
        }

    @staticmethod
    def from_json(data: dict) -> "Step":
        return Step(
            key_from_json(data["face"]),
            data["omit"]["kind"],
            data["omit"]["at"],
            tuple(data["batch"]),
        )


@dataclass(frozen=True)
class Certificate:
    """An ordered list of horn-pushout steps from a base complex to the
    full complex of the ambient, with an anodyne class tag."""

    ambient: Ambient
    base: FaceComplex
    class_tag: str
    steps: tuple[Step, ...]

    def to_json(self) -> dict:
        return {
            "ambient": ambient_to_json(self.ambient),
            "base": [key_to_json(k) for k in self.base.maximal_members()],
            "class": self.class_tag,
            "steps": [s.to_json() for s in self.steps],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(data: dict) -> "Certificate":
        from .complexes import closure, _universe_of

        ambient = ambient_from_json(data["ambient"])
        universe = _universe_of(ambient)
        faces = []
        for item in data["base"]:
            key = key_from_json(item)
            if key not in universe:
                raise FaceError(f"base face {key} is not a face of the ambient")
            faces.append(universe[key])
        base = closure(ambient, faces)
        steps = tuple(Step.from_json(s) for s in data["steps"])
        return Certificate(ambient, base, data["class"], steps)

    @staticmethod
    def loads(text: str) -> "Certificate":
        return Certificate.from_json(json.loads(text))


def class_of_steps(steps: Sequence[Step]) -> str:
    kinds = {s.omit_kind for s in steps}
    if kinds <= {INNER}:
        return OPERADIC
    if kinds <= {INNER, TOP}:
        return COVARIANT
    return STABLE


def filtration_steps(es: ExtensionSet, ord: EdgeOrder, phase: int = 0) -> list[Step]:
    """Canonical extensions as horn steps, batched by (rank of the omitted
    face, number of set-extensions of it), batches in ascending order."""
    report = check_axioms(es)
    if not report.ok:
        raise AxiomError(report)
    pairs = canonical_extensions(es, ord)
    canonical_keys = {(ef.domain.key, ef.codomain_key) for ef in pairs}

    def batch(ef: ElementaryFace) -> tuple[int, int, int]:
        return (phase, ef.domain.rank, len(es.extensions_in_set(ef.domain.key)))

    pairs.sort(key=lambda ef: (*batch(ef), ef.domain.key))
    _assert_descent(es, pairs, canonical_keys)
    return [Step(ef.codomain_key, ef.kind, ef.at, batch(ef)) for ef in pairs]


def _assert_descent(es, pairs, canonical_keys):
    """The trichotomy behind step soundness: any other face of a step's
    codomain is either present, part of an earlier canonical pair, or has
    strictly fewer set-extensions."""
    poset = es.poset
    for ef in pairs:
        p_key = ef.codomain_key
        c = len(es.extensions_in_set(ef.domain.key))
        for g in poset.faces_of(p_key):
            if _sig(g) == _sig(ef):
                continue
            dg = g.domain
            if not es.is_missing(dg.key):
                continue
            transported = next(
                (
                    x
                    for x in poset.faces_of(dg.key)
                    if x.kind == ef.kind and x.at == ef.at
                ),
                None,
            )
            if (
                transported is not None
                and es.contains_map(transported)
                and (transported.domain.key, dg.key) in canonical_keys
            ):
                continue
            if not len(es.extensions_in_set(dg.key)) < c:
                raise FaceError(
                    f"descent failed at step {ef!r} against face {g!r}"
                )


def build_filtration(es: ExtensionSet, ord: EdgeOrder) -> Certificate:
    """Certificate for ``base -> full`` over the extension set's ambient;
    replays itself as an internal guard before returning."""
    from .certify import replay_certificate

    steps = tuple(filtration_steps(es, ord))
    cert = Certificate(es.ambient, es.base, class_of_steps(steps), steps)
    verdict = replay_certificate(cert)
    if not verdict.accepted:
        raise ReplayGuardError(f"fresh certificate rejected: {verdict.reason}")
    return cert


def segal_certificate(pt) -> Certificate:
    """Certificate that the Segal core includes anodynely, via the inner
    extension set; the class is operadic for every tree with two or more
    vertices."""
    from .complexes import segal_core
    from .order import edge_order

    base = segal_core(pt.tree)
    es = inner_extension_set(pt.tree, base)
    return build_filtration(es, edge_order(pt))
