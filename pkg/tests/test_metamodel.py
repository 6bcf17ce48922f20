import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from statemine.metamodel import (
    MetamodelError,
    augment_opposites,
    containment_contexts,
    kind_conforms,
    load_metamodel,
    metamodel_to_dict,
    save_metamodel,
    validate_metamodel,
)

from helpers.oracles import brute_contexts, brute_conforms, raw_supertypes as _raw_supertypes
from helpers.randgen import random_metamodel


def test_shipped_metamodel_loads(java_mm):
    for kind in ("Class", "ClassMethod", "Switch", "NormalSwitchCase", "CatchBlock", "Commentable"):
        assert kind in java_mm
    assert validate_metamodel(java_mm) == []


def test_shipped_metamodel_round_trips(java_mm):
    again = load_metamodel(save_metamodel(java_mm))
    assert again == java_mm
    assert save_metamodel(again) == save_metamodel(java_mm)


def test_every_kind_is_commentable(java_mm):
    for c in java_mm.classes():
        assert kind_conforms(java_mm, c.name, "Commentable")


def test_empty_metamodel():
    mm = load_metamodel('{"packages":[]}')
    assert len(mm) == 0


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"packages":[{"name":"p","classes":[{"name":"A","supertypes":["A"]}]}]}', "cycle"),
        ('{"packages":[{"name":"p","classes":[{"name":"A","supertypes":["B"]},'
         '{"name":"B","supertypes":["A"]}]}]}', "cycle"),
        ('{"packages":[{"name":"p","classes":[{"name":"A","supertypes":["Nope"]}]}]}', "unresolved supertype"),
        ('{"packages":[{"name":"p","classes":[{"name":"A","references":'
         '[{"name":"r","target":"Nope"}]}]}]}', "unresolved target"),
        ('{"packages": [', "line 1"),
        ('{"packages":[{"name":"p","classes":[{"name":"A","extra":1}]}]}', "$.packages[0].classes[0]"),
        ('{"packages":[{"name":"p","classes":[{"name":"A","attributes":'
         '[{"name":"x","type":"float"}]}]}]}', "unknown attribute type"),
    ],
)
def test_load_errors(text, fragment):
    with pytest.raises(MetamodelError, match=None) as exc:
        load_metamodel(text)
    assert fragment in str(exc.value)


def _mm(classes):
    return {"packages": [{"name": "p", "classes": classes}]}


def test_duplicate_reference_is_one_diagnostic():
    from statemine.metamodel import metamodel_from_dict

    mm = metamodel_from_dict(_mm([
        {"name": "A", "references": [{"name": "r", "target": "A"}, {"name": "r", "target": "A"}]},
        {"name": "B", "supertypes": ["A"]},
    ]))
    diags = validate_metamodel(mm)
    assert len(diags) == 1
    assert "duplicate reference 'r'" in diags[0]


def test_missing_opposite_is_one_diagnostic():
    from statemine.metamodel import metamodel_from_dict

    mm = metamodel_from_dict(_mm([
        {"name": "A", "references": [{"name": "r", "target": "B", "opposite": "back"}]},
        {"name": "B"},
    ]))
    diags = validate_metamodel(mm)
    assert len(diags) == 1
    assert "opposite 'back' not found" in diags[0]


def test_declared_opposite_pair_is_valid():
    mm = load_metamodel(json.dumps(_mm([
        {"name": "A", "references": [{"name": "items", "target": "B", "containment": True,
                                       "many": True, "opposite": "owner"}]},
        {"name": "B", "references": [{"name": "owner", "target": "A", "opposite": "items"}]},
    ])))
    assert augment_opposites(mm) == mm


def test_containment_opposite_must_be_single():
    from statemine.metamodel import metamodel_from_dict

    mm = metamodel_from_dict(_mm([
        {"name": "A", "references": [{"name": "items", "target": "B", "containment": True,
                                       "opposite": "owner"}]},
        {"name": "B", "references": [{"name": "owner", "target": "A", "many": True, "opposite": "items"}]},
    ]))
    assert any("single-valued" in d for d in validate_metamodel(mm))


def test_augment_adds_synthetic_opposite(java_mm):
    aug = augment_opposites(java_mm)
    syn = aug.reference("Member", "Class_members_opposite")
    assert syn is not None
    assert syn.synthetic and not syn.many and not syn.containment
    assert syn.target == "Class" and syn.opposite == "members"
    assert aug.reference("Class", "members").opposite == "Class_members_opposite"
    # cross references get many-valued opposites
    back = aug.reference("NamedElement", "ElementReference_target_opposite")
    assert back is not None and back.many


def test_augment_is_idempotent_on_shipped(java_mm):
    once = augment_opposites(java_mm)
    assert augment_opposites(once) == once
    assert validate_metamodel(once) == []


def test_augment_collision_names_both():
    mm = load_metamodel(json.dumps(_mm([
        {"name": "A", "references": [{"name": "r", "target": "B"}]},
        {"name": "B", "references": [{"name": "A_r_opposite", "target": "A"}]},
    ])))
    with pytest.raises(MetamodelError) as exc:
        augment_opposites(mm)
    assert "A.r" in str(exc.value) and "B.A_r_opposite" in str(exc.value)


def test_save_omits_synthetic(java_mm):
    aug = augment_opposites(java_mm)
    assert save_metamodel(aug) == save_metamodel(java_mm)
    assert "_opposite" not in save_metamodel(aug)


@pytest.mark.parametrize(
    "sub, sup, expected",
    [
        ("NormalSwitchCase", "SwitchCase", True),
        ("NormalSwitchCase", "StatementListContainer", True),
        ("Block", "Block", True),
        ("Statement", "Switch", False),
        ("ClassMethod", "TypedElement", True),
        ("CatchBlock", "Statement", False),
    ],
)
def test_kind_conforms(java_mm, sub, sup, expected):
    assert kind_conforms(java_mm, sub, sup) is expected


def test_kind_conforms_undeclared(java_mm):
    with pytest.raises(MetamodelError):
        kind_conforms(java_mm, "Nope", "Class")
    with pytest.raises(MetamodelError):
        kind_conforms(java_mm, "Class", "Nope")


def test_containment_contexts_statement(java_mm):
    ctx = containment_contexts(java_mm, "Statement")
    assert ("Block", "statements") in ctx
    assert ("NormalSwitchCase", "statements") in ctx
    assert ("DefaultSwitchCase", "statements") in ctx
    assert ("Condition", "statement") in ctx


def test_containment_contexts_root_is_empty(java_mm):
    assert containment_contexts(java_mm, "CompilationUnit") == []


def test_containment_contexts_deterministic_order(java_mm):
    ctx = containment_contexts(java_mm, "Block")
    assert ctx == [
        ("ClassMethod", "body"),
        ("Block", "statements"),
        ("Condition", "statement"),
        ("Condition", "elseStatement"),
        ("NormalSwitchCase", "statements"),
        ("DefaultSwitchCase", "statements"),
        ("TryBlock", "block"),
        ("CatchBlock", "block"),
    ]


def test_containment_contexts_match_brute_force_shipped(java_mm):
    data = metamodel_to_dict(java_mm)
    for c in java_mm.classes():
        assert set(containment_contexts(java_mm, c.name)) == brute_contexts(data, c.name), c.name


def test_abstract_kind_contexts_union(java_mm):
    # an abstract kind is accepted wherever it or one of its supertypes is
    ctx = set(containment_contexts(java_mm, "Expression"))
    assert ("ExpressionStatement", "expression") in ctx
    assert ("MethodCall", "arguments") in ctx
    assert all(kind_conforms(java_mm, "Expression", java_mm.reference(c, r).target) for c, r in ctx)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_contexts_match_brute_force(rng):
    mm = random_metamodel(rng)
    data = metamodel_to_dict(mm)
    for c in mm.classes():
        assert set(containment_contexts(mm, c.name)) == brute_contexts(data, c.name)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_conforms_is_partial_order(rng):
    mm = random_metamodel(rng)
    sups = _raw_supertypes(metamodel_to_dict(mm))
    kinds = [c.name for c in mm.classes()]
    for a in kinds:
        assert kind_conforms(mm, a, a)
        for b in kinds:
            assert kind_conforms(mm, a, b) == brute_conforms(sups, a, b)
            if a != b and kind_conforms(mm, a, b):
                assert not kind_conforms(mm, b, a)
            for c in kinds:
                if kind_conforms(mm, a, b) and kind_conforms(mm, b, c):
                    assert kind_conforms(mm, a, c)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_augment_involution_and_idempotence(rng):
    mm = random_metamodel(rng)
    assert validate_metamodel(mm) == []
    aug = augment_opposites(mm)
    assert augment_opposites(aug) == aug
    assert validate_metamodel(aug) == []
    for c in aug.classes():
        for r in aug.all_references(c.name):
            opp = aug.opposite_of(c.name, r)
            assert opp is not None
            assert aug.opposite_of(r.target, opp) is r


def test_fixed_point_when_all_opposites_declared():
    rng = random.Random(3)
    mm = augment_opposites(random_metamodel(rng))
    # re-declare the synthetic references as ordinary ones
    from statemine.metamodel import metamodel_to_dict as to_dict
    declared = load_metamodel(json.dumps(to_dict(mm, include_synthetic=True)))
    assert augment_opposites(declared) == declared
