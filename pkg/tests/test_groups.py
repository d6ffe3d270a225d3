import pytest

from latsuper import (
    CapacityError,
    ConstructionError,
    GroupSpec,
    conjugacy_classes,
    is_normal,
    make_group,
    subgroup_generated,
)
from latsuper.catalog import dihedral_group, quaternion_group, symmetric_group
from latsuper.groups import PrimePowerField, group_from_json, group_to_json

from corpus import cyclic_group, vector_space_group


def test_cyclic_trivial():
    G = make_group(GroupSpec.cyclic(1))
    assert G.order == 1
    assert G.mul == ((0,),)


def test_cyclic_six_modular_addition():
    G = cyclic_group(6)
    assert G.mul[2][5] == 1
    assert G.inv[2] == 4


def test_vector_space_f2_self_inverse():
    # brute force: g + g = 0 for every element of F_2^2
    G = vector_space_group(2, 2)
    assert G.order == 4
    for g in range(4):
        assert G.mul[g][g] == 0
        assert G.inv[g] == g


def test_vector_space_prime_power_field():
    f4 = PrimePowerField(4)
    assert f4.modulus == (1, 1, 1)  # x^2 + x + 1
    # multiplicative group of F_4 is cyclic of order 3
    x = 2
    assert f4.mul(x, x) == 3
    assert f4.mul(f4.mul(x, x), x) == 1
    f9 = PrimePowerField(9)
    nonzero = [a for a in f9.elements() if a != 0]
    for a in nonzero:
        assert sorted(f9.mul(a, b) for b in nonzero) == nonzero


def test_conjugacy_classes_abelian_singletons():
    G = cyclic_group(6)
    assert [m.bit_count() for m in conjugacy_classes(G)] == [1] * 6
    V = vector_space_group(3, 1)
    assert [m.bit_count() for m in conjugacy_classes(V)] == [1, 1, 1]


def test_conjugacy_classes_s3():
    sizes = sorted(m.bit_count() for m in conjugacy_classes(symmetric_group(3)))
    assert sizes == [1, 2, 3]


def test_conjugacy_classes_identity_first():
    for G in (symmetric_group(3), dihedral_group(4), quaternion_group()):
        assert conjugacy_classes(G)[0] == 1


def test_subgroup_generated_examples():
    G = cyclic_group(12)
    assert subgroup_generated(G, []).to_json() == [0]
    assert subgroup_generated(G, [4]).to_json() == [0, 4, 8]
    assert subgroup_generated(G, [2, 3]).size == 12


def test_subgroup_generated_idempotent():
    G = dihedral_group(4)
    for gens in ([1], [4], [1, 4], [2, 5]):
        H = subgroup_generated(G, gens)
        again = subgroup_generated(G, list(H.elements()))
        assert again.mask == H.mask


def test_is_normal():
    G = cyclic_group(12)
    assert is_normal(G, subgroup_generated(G, [3]))
    S3 = symmetric_group(3)
    transposition = subgroup_generated(S3, [1])
    assert transposition.size == 2
    assert not is_normal(S3, transposition)
    a3 = subgroup_generated(S3, [3])
    assert a3.size == 3
    assert is_normal(S3, a3)


def test_product_spec_orders_and_classes():
    spec = GroupSpec.product((GroupSpec.cyclic(2), GroupSpec.table(symmetric_group(3).mul)))
    G = make_group(spec)
    assert G.order == 12
    assert len(conjugacy_classes(G)) == 2 * 3


def test_element_order():
    G = cyclic_group(12)
    assert [G.element_order(g) for g in (0, 1, 2, 6)] == [1, 12, 6, 2]


def test_spec_json_roundtrip():
    specs = [
        GroupSpec.cyclic(12),
        GroupSpec.vector_space(3, 2),
        GroupSpec.table(symmetric_group(3).mul),
        GroupSpec.product((GroupSpec.cyclic(2), GroupSpec.cyclic(3))),
    ]
    for spec in specs:
        G = make_group(spec)
        again = group_from_json(group_to_json(G))
        assert again.mul == G.mul


def test_rejects_non_latin_table():
    with pytest.raises(ConstructionError) as info:
        make_group(GroupSpec.table([[0, 1], [1, 1]]))
    assert info.value.check == "latin_square"


def test_rejects_nonassociative_loop():
    # latin square with two-sided identity that is not a group
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 3, 4, 0, 1],
        [3, 4, 1, 2, 0],
        [4, 2, 0, 1, 3],
    ]
    with pytest.raises(ConstructionError) as info:
        make_group(GroupSpec.table(loop))
    assert info.value.check == "associativity"
    a, g, c = info.value.witness
    assert loop[loop[a][g]][c] != loop[a][loop[g][c]]


def test_rejects_bad_identity():
    bad = [[1, 0], [0, 1]]
    with pytest.raises(ConstructionError) as info:
        make_group(GroupSpec.table(bad))
    assert info.value.check == "identity"


def test_rejects_non_prime_power_q():
    with pytest.raises(ConstructionError):
        make_group(GroupSpec.vector_space(6, 1))


def test_order_cap_and_override(monkeypatch):
    with pytest.raises(CapacityError):
        make_group(GroupSpec.cyclic(5000))
    monkeypatch.setenv("LATSUPER_MAX_ORDER", "8")
    with pytest.raises(CapacityError):
        make_group(GroupSpec.cyclic(12))
    monkeypatch.setenv("LATSUPER_MAX_ORDER", "16")
    assert make_group(GroupSpec.cyclic(12)).order == 12


def test_spot_check_associativity_above_exhaustive_limit(monkeypatch):
    import latsuper.groups as groups_mod

    monkeypatch.setattr(groups_mod, "EXHAUSTIVE_ASSOC_LIMIT", 4)
    G = make_group(GroupSpec.cyclic(30))
    assert G.order == 30
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 3, 4, 0, 1],
        [3, 4, 1, 2, 0],
        [4, 2, 0, 1, 3],
    ]
    with pytest.raises(ConstructionError):
        make_group(GroupSpec.table(loop))
