"""Lattices of normal subgroups: order structure, covers, Moebius function,
distributivity and the Birkhoff antichain machinery.

A NormalLattice owns a list of normal subgroups (bitmask Subgroups) of one
group, closed under join (subgroup product) and meet (intersection), always
containing the trivial subgroup and the whole group.  Nodes are referenced by
their index in ``nodes``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import (
    ArgumentError,
    CapacityError,
    ConstructionError,
    InternalConsistencyError,
    UnsupportedStructureError,
)
from .groups import (
    GroupTable,
    Subgroup,
    closure_mask,
    conjugacy_classes,
    is_normal,
    mask_of,
    subgroup_from_elements,
)

CLASS_SUBSET_CAP = 20
SUBGROUP_ENUM_CAP = 20000


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


class NormalLattice:
    """A sublattice of the normal subgroups of a finite group."""

    def __init__(self, group: GroupTable, nodes: Sequence[Subgroup], *, check_normal: bool = True):
        self.group = group
        by_mask: dict[int, Subgroup] = {}
        for sub in nodes:
            by_mask.setdefault(sub.mask, sub)
        self.nodes: list[Subgroup] = sorted(by_mask.values(), key=lambda s: (s.size, s.mask))
        self._index = {s.mask: i for i, s in enumerate(self.nodes)}
        self._validate(check_normal)
        self._build_order()
        self._moebius: dict[tuple[int, int], int] = {}
        self._distributive: Optional["DistributiveAnalysis"] = None
        self._partition = None
        self._theory = None

    # -- construction checks --------------------------------------------------

    def _validate(self, check_normal: bool) -> None:
        G = self.group
        full = (1 << G.order) - 1
        if 1 not in self._index:
            raise ConstructionError(
                "lattice must contain the trivial subgroup", check="lattice_bounds"
            )
        if full not in self._index:
            raise ConstructionError("lattice must contain the whole group", check="lattice_bounds")
        if check_normal:
            for sub in self.nodes:
                subgroup_from_elements(G, sub.elements())
                if not is_normal(G, sub):
                    raise ConstructionError(
                        f"node {sub.to_json()} is not normal", check="normality",
                        witness=sub.to_json(),
                    )
        # (L2): closure under meet and join.
        m = len(self.nodes)
        for i in range(m):
            for j in range(i + 1, m):
                meet = self.nodes[i].mask & self.nodes[j].mask
                if meet not in self._index:
                    raise ConstructionError(
                        "lattice not closed under intersection",
                        check="meet_closure",
                        witness=[self.nodes[i].to_json(), self.nodes[j].to_json()],
                    )
                join = closure_mask(G, self.nodes[i].mask | self.nodes[j].mask)
                if join not in self._index:
                    raise ConstructionError(
                        "lattice not closed under product",
                        check="join_closure",
                        witness=[self.nodes[i].to_json(), self.nodes[j].to_json()],
                    )

    def _build_order(self) -> None:
        m = len(self.nodes)
        masks = [s.mask for s in self.nodes]
        self.up_mask = [0] * m    # up_mask[i]: bitmask of j with nodes[i] <= nodes[j]
        self.down_mask = [0] * m
        for i in range(m):
            for j in range(m):
                if masks[i] & ~masks[j] == 0:
                    self.up_mask[i] |= 1 << j
                    self.down_mask[j] |= 1 << i
        self.bottom = self._index[1]
        self.top = self._index[(1 << self.group.order) - 1]
        self.meet_table = [[0] * m for _ in range(m)]
        self.join_table = [[0] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                self.meet_table[i][j] = self._index[masks[i] & masks[j]]
                self.join_table[i][j] = self._index[closure_mask(self.group, masks[i] | masks[j])]
        # covers via transitive reduction of the order matrix
        self.covers_up: list[list[int]] = [[] for _ in range(m)]
        self.covers_down: list[list[int]] = [[] for _ in range(m)]
        for i in range(m):
            for j in _bits(self.up_mask[i] & ~(1 << i)):
                between = self.up_mask[i] & self.down_mask[j] & ~(1 << i) & ~(1 << j)
                if between == 0:
                    self.covers_up[i].append(j)
                    self.covers_down[j].append(i)

    # -- basic queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    def index_of(self, sub: Subgroup | int) -> int:
        mask = sub.mask if isinstance(sub, Subgroup) else sub
        if mask not in self._index:
            raise ArgumentError("subgroup is not a lattice node")
        return self._index[mask]

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up_mask[i] >> j) & 1)

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def meet_all(self, idxs: Iterable[int]) -> int:
        """Meet of a node set; empty set gives the top."""
        out = self.top
        for i in idxs:
            out = self.meet_table[out][i]
        return out

    def join_all(self, idxs: Iterable[int]) -> int:
        """Join of a node set; empty set gives the bottom."""
        out = self.bottom
        for i in idxs:
            out = self.join_table[out][i]
        return out

    def covers(self, i: int) -> list[int]:
        """C(i): the minimal strict super-elements of node i."""
        return list(self.covers_up[i])

    def cover_join(self, i: int) -> int:
        """Join of node i with all of its covers (= i itself when i is the top)."""
        out = i
        for j in self.covers_up[i]:
            out = self.join_table[out][j]
        return out

    def interval(self, i: int, j: int) -> list[int]:
        """Nodes k with i <= k <= j."""
        return list(_bits(self.up_mask[i] & self.down_mask[j]))

    def size(self, i: int) -> int:
        return self.nodes[i].size

    def node_label(self, i: int) -> str:
        sub = self.nodes[i]
        if sub.label:
            return sub.label
        if self.group.spec.kind == "cyclic":
            return f"C{sub.size}"
        return f"N{i}"

    # -- Moebius function -------------------------------------------------------

    def moebius(self, n: int, o: int) -> int:
        """Moebius function of the lattice order: mu(n,n)=1, sums to 0 on intervals."""
        if not self.leq(n, o):
            raise ArgumentError("moebius requires N <= O")
        key = (n, o)
        cached = self._moebius.get(key)
        if cached is not None:
            return cached
        if n == o:
            value = 1
        else:
            value = -sum(
                self.moebius(n, p) for p in _bits(self.up_mask[n] & self.down_mask[o] & ~(1 << o))
            )
        self._moebius[key] = value
        return value

    def __repr__(self) -> str:
        return f"NormalLattice({self.group.name}, {len(self.nodes)} nodes)"


# ---------------------------------------------------------------------------
# Construction.


def _abelian_subgroups(G: GroupTable) -> list[int]:
    # every subgroup of an abelian group is normal; breadth-first closure over
    # one-generator extensions reaches all of them
    seen = {1}
    frontier = [1]
    while frontier:
        mask = frontier.pop()
        for g in range(1, G.order):
            if (mask >> g) & 1:
                continue
            bigger = closure_mask(G, mask | (1 << g))
            if bigger not in seen:
                seen.add(bigger)
                frontier.append(bigger)
                if len(seen) > SUBGROUP_ENUM_CAP:
                    raise CapacityError(
                        f"more than {SUBGROUP_ENUM_CAP} subgroups; pass an explicit sublattice",
                        check="subgroup_cap",
                    )
    return sorted(seen)


def _class_subset_normals(G: GroupTable) -> list[int]:
    classes = conjugacy_classes(G)
    k = len(classes)
    if k > CLASS_SUBSET_CAP:
        raise CapacityError(
            f"{k} conjugacy classes exceeds the cap of {CLASS_SUBSET_CAP}; "
            "pass an explicit sublattice",
            check="class_cap",
        )
    # class products: which classes appear in C_i * C_j
    prod = [[0] * k for _ in range(k)]
    class_of = [0] * G.order
    for ci, cmask in enumerate(classes):
        for g in _bits(cmask):
            class_of[g] = ci
    for i in range(k):
        for j in range(i, k):
            hit = 0
            for a in _bits(classes[i]):
                for b in _bits(classes[j]):
                    hit |= 1 << class_of[G.mul[a][b]]
            prod[i][j] = hit
            prod[j][i] = hit
    found = []
    for subset in range(0, 1 << (k - 1)):
        cmask = (subset << 1) | 1
        ok = True
        rest = cmask
        while rest and ok:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            m = cmask
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                if prod[i][j] & ~cmask:
                    ok = False
                    break
        if ok:
            emask = 0
            for ci in _bits(cmask):
                emask |= classes[ci]
            found.append(emask)
    return sorted(set(found))


def normal_lattice(G: GroupTable) -> NormalLattice:
    """The full lattice of normal subgroups of G.

    Nonabelian groups are enumerated by subsets of conjugacy classes (a union
    of classes containing the identity and closed under products is exactly a
    normal subgroup); the cap of 20 classes keeps that exhaustive scan honest.
    Abelian groups, where classes are singletons, use one-generator subgroup
    closure instead.
    """
    if G.is_abelian:
        masks = _abelian_subgroups(G)
    else:
        masks = _class_subset_normals(G)
    nodes = [Subgroup(m) for m in masks]
    if G.spec.kind == "cyclic":
        nodes = [s.relabel(f"C{s.size}") for s in nodes]
    return NormalLattice(G, nodes, check_normal=True)


def closed_sublattice(G: GroupTable, gens: Sequence[Subgroup]) -> NormalLattice:
    """Smallest lattice containing gens plus the trivial subgroup and G."""
    for sub in gens:
        subgroup_from_elements(G, sub.elements())
        if not is_normal(G, sub):
            raise ArgumentError(
                f"generator {sub.to_json()} is not a normal subgroup", witness=sub.to_json()
            )
    masks = {1, (1 << G.order) - 1}
    masks.update(s.mask for s in gens)
    labels = {s.mask: s.label for s in gens if s.label}
    changed = True
    while changed:
        changed = False
        current = sorted(masks)
        for a in current:
            for b in current:
                if a >= b:
                    continue
                for new in (a & b, closure_mask(G, a | b)):
                    if new not in masks:
                        masks.add(new)
                        changed = True
    nodes = [Subgroup(m, labels.get(m)) for m in sorted(masks)]
    if G.spec.kind == "cyclic":
        nodes = [s.relabel(s.label or f"C{s.size}") for s in nodes]
    return NormalLattice(G, nodes, check_normal=False)


def sublattice_closure(L: NormalLattice, gens: Iterable[int]) -> NormalLattice:
    """Close a set of node indices of L under meet/join; repackage as a lattice."""
    idxs = set(gens)
    for i in idxs:
        if not (0 <= i < len(L.nodes)):
            raise ArgumentError(f"node index {i} out of range")
    idxs.update((L.bottom, L.top))
    changed = True
    while changed:
        changed = False
        for a in list(idxs):
            for b in list(idxs):
                for c in (L.meet(a, b), L.join(a, b)):
                    if c not in idxs:
                        idxs.add(c)
                        changed = True
    return NormalLattice(L.group, [L.nodes[i] for i in sorted(idxs)], check_normal=False)


def bounds(L: NormalLattice, nodes: Sequence[int]) -> tuple[int, int]:
    """(overline, underline): join and meet of a nonempty node set."""
    if not nodes:
        raise ArgumentError("bounds of an empty node set")
    return L.join_all(nodes), L.meet_all(nodes)


def moebius(L: NormalLattice, n: int, o: int) -> int:
    return L.moebius(n, o)


# ---------------------------------------------------------------------------
# Vector-space sublattices.


def subspace_lattice(G: GroupTable) -> NormalLattice:
    """All F_q-submodules of a vector-space group."""
    vs = G.vs
    if vs is None:
        raise ArgumentError("subspace_lattice requires a vector_space group")
    zero = 1
    lines = {}
    for v in range(1, G.order):
        span = 0
        for c in vs.field.elements():
            span |= 1 << vs.scale(c, v)
        lines[span] = None
    spaces = {zero}
    frontier = list(lines)
    spaces.update(lines)
    while frontier:
        umask = frontier.pop()
        for line in lines:
            if line & ~umask == 0:
                continue
            bigger = 0
            for a in _bits(umask):
                for b in _bits(line):
                    bigger |= 1 << G.mul[a][b]
            if bigger not in spaces:
                spaces.add(bigger)
                frontier.append(bigger)
    q = vs.q
    nodes = []
    for m in sorted(spaces):
        dim = 0
        size = m.bit_count()
        while q**dim < size:
            dim += 1
        nodes.append(Subgroup(m, f"dim{dim}"))
    return NormalLattice(G, nodes, check_normal=False)


def basis_subspace_lattice(G: GroupTable) -> NormalLattice:
    """Spans of subsets of the standard basis; isomorphic to the subset lattice."""
    vs = G.vs
    if vs is None:
        raise ArgumentError("basis_subspace_lattice requires a vector_space group")
    nodes = []
    for subset in range(1 << vs.dim):
        mask = 0
        for v in range(G.order):
            coords = vs.decode(v)
            if all(c == 0 for i, c in enumerate(coords) if not (subset >> i) & 1):
                mask |= 1 << v
        label = "<" + ",".join(f"e{i}" for i in _bits(subset)) + ">"
        nodes.append(Subgroup(mask, label))
    return NormalLattice(G, nodes, check_normal=False)


def basis_node(L: NormalLattice, subset: Iterable[int]) -> int:
    """Node index of span{e_i : i in subset} in a basis lattice."""
    vs = L.group.vs
    assert vs is not None
    chosen = set(subset)
    mask = 0
    for v in range(L.group.order):
        coords = vs.decode(v)
        if all(c == 0 for i, c in enumerate(coords) if i not in chosen):
            mask |= 1 << v
    return L.index_of(mask)


# ---------------------------------------------------------------------------
# Distributivity and Birkhoff structure.


@dataclass
class DistributiveAnalysis:
    is_distributive: bool
    meet_irreducibles: tuple[int, ...] = ()
    product_irreducibles: tuple[int, ...] = ()
    antichain_of: dict[int, tuple[int, ...]] = field(default_factory=dict)
    join_antichain_of: dict[int, tuple[int, ...]] = field(default_factory=dict)
    violation: Optional[tuple[int, int, int]] = None


def distributive_analysis(L: NormalLattice) -> DistributiveAnalysis:
    """Check distributivity; on success compute the Birkhoff antichain maps."""
    if L._distributive is not None:
        return L._distributive
    m = len(L.nodes)
    violation = None
    for k in range(m):
        jk = L.join_table[k]
        for a in range(m):
            ja = jk[a]
            for b in range(a, m):
                if jk[L.meet_table[a][b]] != L.meet_table[ja][jk[b]]:
                    violation = (k, a, b)
                    break
            if violation:
                break
        if violation:
            break
    if violation is not None:
        result = DistributiveAnalysis(is_distributive=False, violation=violation)
        L._distributive = result
        return result
    meet_irr = tuple(i for i in range(m) if len(L.covers_up[i]) == 1)
    prod_irr = tuple(i for i in range(m) if len(L.covers_down[i]) == 1)
    antichain_of: dict[int, tuple[int, ...]] = {}
    for k in range(m):
        above = [p for p in meet_irr if L.leq(k, p)]
        minimal = tuple(
            p for p in above if not any(q != p and L.leq(q, p) for q in above)
        )
        if L.meet_all(minimal) != k:
            raise InternalConsistencyError(
                f"antichain meet mismatch at node {k}", check="birkhoff"
            )
        antichain_of[k] = minimal
    join_antichain_of: dict[int, tuple[int, ...]] = {}
    for k in range(m):
        below = [p for p in prod_irr if L.leq(p, k)]
        maximal = tuple(
            p for p in below if not any(q != p and L.leq(p, q) for q in below)
        )
        if L.join_all(maximal) != k:
            raise InternalConsistencyError(
                f"antichain join mismatch at node {k}", check="birkhoff"
            )
        join_antichain_of[k] = maximal
    result = DistributiveAnalysis(
        is_distributive=True,
        meet_irreducibles=meet_irr,
        product_irreducibles=prod_irr,
        antichain_of=antichain_of,
        join_antichain_of=join_antichain_of,
    )
    L._distributive = result
    return result


def _require_distributive(L: NormalLattice) -> DistributiveAnalysis:
    analysis = distributive_analysis(L)
    if not analysis.is_distributive:
        raise UnsupportedStructureError(
            "operation requires a distributive lattice",
            witness=list(analysis.violation or ()),
        )
    return analysis


def subset_join(L: NormalLattice, base: int, nodes: Iterable[int]) -> int:
    """Join of nodes over a base: base itself for the empty set."""
    out = base
    for i in nodes:
        out = L.join_table[out][i]
    return out


def is_general_position(L: NormalLattice, A: Sequence[int], M: int) -> bool:
    """A subset of C(M) is in general position over M when dropping any member
    strictly shrinks the join; equivalently (for cover sets) the join of the
    rest meets each member in M.  Both tests run and must agree.
    """
    cover_set = set(L.covers_up[M])
    aset = list(dict.fromkeys(A))
    if any(o not in cover_set for o in aset):
        raise ArgumentError("general position requires A to be a subset of C(M)")
    total = subset_join(L, M, aset)
    join_cond = True
    meet_cond = True
    for o in aset:
        rest = subset_join(L, M, [p for p in aset if p != o])
        if rest == total:
            join_cond = False
        if L.meet(rest, o) != M:
            meet_cond = False
    if join_cond != meet_cond:
        raise InternalConsistencyError(
            "general-position criteria disagree", check="general_position",
            witness={"M": M, "A": list(aset)},
        )
    return join_cond


def _check_antichain(L: NormalLattice, nodes: Sequence[int], pool: Iterable[int], what: str) -> list[int]:
    out = list(dict.fromkeys(nodes))
    pool = set(pool)
    for p in out:
        if p not in pool:
            raise ArgumentError(f"node {p} is not {what}")
    for a in out:
        for b in out:
            if a != b and L.leq(a, b):
                raise ArgumentError(f"nodes {a},{b} are comparable; not an antichain")
    return out


def product_to_cover_map(L: NormalLattice, B: Sequence[int]) -> dict[int, int]:
    """For an antichain B of product irreducibles, the bijection sending each
    lower cover L' of join(B) to the unique K in B with K meet L' != K."""
    analysis = _require_distributive(L)
    bset = _check_antichain(L, B, analysis.product_irreducibles, "product irreducible")
    top = L.join_all(bset)
    lower = [l for l in L.covers_down[top]]
    mapping: dict[int, int] = {}
    for lnode in lower:
        hits = [k for k in bset if L.meet(k, lnode) != k]
        if len(hits) != 1:
            raise InternalConsistencyError(
                f"no unique member avoiding lower cover {lnode}", check="product_to_cover",
                witness={"L": lnode, "hits": hits},
            )
        mapping[lnode] = hits[0]
    # verify the stated inverse: K -> M_K * join(B - K)
    inverse: dict[int, int] = {}
    for k in bset:
        m_k = L.covers_down[k][0]
        inverse[k] = subset_join(L, m_k, [b for b in bset if b != k])
    if sorted(mapping.values()) != sorted(bset) or any(
        mapping[inverse[k]] != k for k in bset
    ):
        raise InternalConsistencyError("product_to_cover map is not a bijection",
                                       check="product_to_cover")
    return mapping


def cover_to_irreducible_map(L: NormalLattice, A: Sequence[int]) -> dict[int, int]:
    """For an antichain A of meet irreducibles, the bijection sending each upper
    cover O of meet(A) to the unique P in A with P join O a cover of P."""
    analysis = _require_distributive(L)
    aset = _check_antichain(L, A, analysis.meet_irreducibles, "meet irreducible")
    bottom = L.meet_all(aset)
    mapping: dict[int, int] = {}
    for onode in L.covers_up[bottom]:
        hits = [p for p in aset if L.join(p, onode) in L.covers_up[p]]
        if len(hits) != 1:
            raise InternalConsistencyError(
                f"no unique irreducible for cover {onode}", check="cover_to_irreducible",
                witness={"O": onode, "hits": hits},
            )
        mapping[onode] = hits[0]
    for p in aset:
        upper = L.covers_up[p][0]
        rest = L.meet_all([a for a in aset if a != p])
        if mapping.get(L.meet(upper, rest)) != p:
            raise InternalConsistencyError(
                "cover_to_irreducible map is not a bijection", check="cover_to_irreducible"
            )
    return mapping


# ---------------------------------------------------------------------------
# Export.


def lattice_to_json(L: NormalLattice) -> dict:
    return {
        "group": L.group.spec.to_json(),
        "nodes": [s.to_json() for s in L.nodes],
        "labels": [L.node_label(i) for i in range(len(L.nodes))],
        "hasse": sorted([i, j] for i in range(len(L.nodes)) for j in L.covers_up[i]),
    }


def lattice_from_json(G: GroupTable, data: dict) -> NormalLattice:
    """Rebuild the lattice from its JSON node list (strict: must be closed)."""
    nodes = [Subgroup(mask_of(e)) for e in data["nodes"]]
    return NormalLattice(G, nodes, check_normal=True)


def lattice_to_dot(L: NormalLattice) -> str:
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i in range(len(L.nodes)):
        lines.append(f'  n{i} [label="{L.size(i)}:{L.node_label(i)}"];')
    for i in range(len(L.nodes)):
        for j in L.covers_up[i]:
            lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
