"""Point-wise products of supercharacters and their basis decompositions.

The supercharacter span is closed under point-wise products, so a basis
decomposition always exists (orthogonal projection).  When both cover sets are
in general position and every cover of the meet lies in one of the factors,
the product collapses to a single scaled supercharacter at the meet.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .errors import ArgumentError, InternalConsistencyError
from .lattice import NormalLattice, is_general_position
from .sct import SCTheory, Supercharacter, build_theory, inner_product


def _projection_cache(theory: SCTheory):
    # per-theory integer views: block sizes, char value vectors, norms |G|<chi,chi>
    cache = getattr(theory, "_projection_cache", None)
    if cache is None:
        part = theory.partition
        block_nodes = part.block_nodes()
        sizes = [part.block_size(b) for b in block_nodes]
        vectors = []
        norms = []
        for chi in theory.chars:
            vec = [int(chi.values[b]) for b in block_nodes]
            vectors.append(vec)
            norms.append(sum(s * v * v for s, v in zip(sizes, vec)))
        cache = (block_nodes, sizes, vectors, norms)
        theory._projection_cache = cache
    return cache


def decompose_class_function(
    theory: SCTheory, f: Union[Supercharacter, Mapping[int, Fraction]]
) -> dict[int, Fraction]:
    """Coefficients c_N with f = sum of c_N chi^{N.}, by orthogonal projection;
    the reconstruction is re-checked exactly."""
    part = theory.partition
    if isinstance(f, Supercharacter):
        values = f.values
    else:
        values = {b: Fraction(v) for b, v in f.items()}
    if set(values) != set(part.blocks):
        raise ArgumentError("class function must assign a value to every superclass")
    block_nodes, sizes, vectors, norms = _projection_cache(theory)
    # integer fast path: most class functions here are integer valued
    fvec = [int(v) if v.denominator == 1 else v for v in (values[b] for b in block_nodes)]
    coeffs: dict[int, Fraction] = {}
    for chi, vec, norm in zip(theory.chars, vectors, norms):
        dot = sum(s * fv * v for s, fv, v in zip(sizes, fvec, vec) if v)
        if dot:
            coeffs[chi.label] = Fraction(dot, norm) if isinstance(dot, int) else dot / norm
    recon = [Fraction(0)] * len(block_nodes)
    for chi, vec in zip(theory.chars, vectors):
        c = coeffs.get(chi.label)
        if c:
            for k, v in enumerate(vec):
                if v:
                    recon[k] += c * v
    if recon != fvec:
        raise InternalConsistencyError(
            "projection coefficients failed to reconstruct the function",
            check="decompose",
        )
    return coeffs


def pointwise_product(f: Supercharacter, h: Supercharacter) -> dict[int, Fraction]:
    return {b: f.values[b] * h.values[b] for b in f.values}


@dataclass
class ProductReport:
    M: int
    N: int
    meet: int
    hypothesis_general_position: tuple[bool, bool]
    hypothesis_cover_containment: bool
    identity_holds: bool
    coefficients: dict[int, Fraction]   # decomposition of chi^{M.} (.) chi^{N.}


def tensor_product(L: NormalLattice, m: int, n: int) -> ProductReport:
    """Decompose chi^{M.} (.) chi^{N.}; hypothesis failure is data, not an error."""
    theory = build_theory(L)
    meet = L.meet(m, n)
    gp = (
        is_general_position(L, L.covers(m), m),
        is_general_position(L, L.covers(n), n),
    )
    containment = all(
        L.leq(o, m) or L.leq(o, n) for o in L.covers(meet)
    )
    chi_m = theory.char_by_node[m]
    chi_n = theory.char_by_node[n]
    product = pointwise_product(chi_m, chi_n)
    if gp[0] and gp[1] and containment:
        chi_meet = theory.char_by_node[meet]
        if chi_m.degree <= 0 or chi_n.degree <= 0 or chi_meet.degree <= 0:
            raise InternalConsistencyError(
                "general position should force positive degrees", check="tensor_product"
            )
        scale = chi_m.degree * chi_n.degree / chi_meet.degree
        for b in product:
            if product[b] != scale * chi_meet.values[b]:
                raise InternalConsistencyError(
                    "tensor-product identity fails despite its hypotheses",
                    check="tensor_product",
                    witness={"M": m, "N": n, "block": b},
                )
        return ProductReport(m, n, meet, gp, containment, True, {meet: scale})
    coeffs = decompose_class_function(theory, product)
    return ProductReport(m, n, meet, gp, containment, False, coeffs)


def product_report_to_json(L: NormalLattice, report: ProductReport) -> dict:
    return {
        "M": {"node": report.M, "label": L.node_label(report.M)},
        "N": {"node": report.N, "label": L.node_label(report.N)},
        "meet": {"node": report.meet, "label": L.node_label(report.meet)},
        "hypothesis_general_position": list(report.hypothesis_general_position),
        "hypothesis_cover_containment": report.hypothesis_cover_containment,
        "identity_holds": report.identity_holds,
        "coefficients": [
            {"node": node, "label": L.node_label(node), "coefficient": str(c)}
            for node, c in sorted(report.coefficients.items())
        ],
    }
