import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from icleak.instance import (AdversarySplit, Instance, InstanceError, disjoint_union,
                             extend_with_adversary_receiver, induce_subproblem, instance_from_dict,
                             instance_to_dict, normalize_singleton_wants, parse_instance,
                             random_instance, random_split)

EX2_DOC = {"q": 2, "n": 4,
           "receivers": [{"wants": [1], "has": [2, 3]}, {"wants": [2], "has": [1, 4]}],
           "adversary": {"knows": [], "sensitive": [1, 2], "nonsensitive": [3, 4]}}


def test_parse_example_document():
    inst, split = parse_instance(json.dumps(EX2_DOC))
    assert inst.n == 4 and inst.m == 2 and inst.q == 2
    assert inst.wants == (frozenset({0}), frozenset({1}))
    assert inst.has == (frozenset({1, 2}), frozenset({0, 3}))
    assert split.sensitive == frozenset({0, 1}) and split.nonsensitive == frozenset({2, 3})


def test_document_round_trip():
    inst, split = parse_instance(json.dumps(EX2_DOC))
    assert instance_to_dict(inst, split) == EX2_DOC


def test_adversary_block_is_optional():
    doc = {k: v for k, v in EX2_DOC.items() if k != "adversary"}
    _, split = instance_from_dict(doc)
    assert split is None


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.update(q=4), "q"),
    (lambda d: d.update(n=-1), "n"),
    (lambda d: d.update(extra=1), "unknown keys"),
    (lambda d: d["receivers"][0].update(wants=[5]), "receivers[0]"),
    (lambda d: d["receivers"][1].update(has=[2, 2]), "receivers[1].has"),
    (lambda d: d["receivers"][0].update(has=[1, 2]), "overlap"),
    (lambda d: d["adversary"].update(sensitive=[]), "sensitive"),
    (lambda d: d["adversary"].update(knows=[1]), "disjoint"),
    (lambda d: d["adversary"].update(nonsensitive=[3]), "partition"),
    (lambda d: d["adversary"].update(knows=[9]), "adversary.knows"),
])
def test_invalid_documents_name_the_field(mutate, field):
    doc = json.loads(json.dumps(EX2_DOC))
    mutate(doc)
    with pytest.raises(InstanceError, match=field.replace("[", r"\[").replace("]", r"\]")):
        instance_from_dict(doc)


def test_invalid_json_text():
    with pytest.raises(InstanceError, match="invalid JSON"):
        parse_instance("{not json")


def test_split_requires_sensitive_messages():
    with pytest.raises(InstanceError):
        AdversarySplit.build([1], [], [2])


def test_normalize_splits_multi_wants():
    inst = Instance.build(3, [[1, 3], []], [[2], [1]])
    norm = normalize_singleton_wants(inst)
    assert norm.wants == (frozenset({0}), frozenset({2}), frozenset())
    assert norm.has == (frozenset({1}), frozenset({1}), frozenset({0}))


def test_induce_subproblem_relabels():
    inst = Instance.build(4, [[1], [4]], [[2, 3], [1]])
    sub, index_map = induce_subproblem(inst, [0, 2, 3])
    assert index_map == [0, 2, 3]
    assert sub.n == 3
    assert sub.wants == (frozenset({0}), frozenset({2}))
    assert sub.has == (frozenset({1}), frozenset({0}))


def test_extend_with_adversary_receiver():
    inst, split = parse_instance(json.dumps(EX2_DOC))
    ext = extend_with_adversary_receiver(inst, split)
    assert ext.m == 3
    assert ext.wants[-1] == split.nonsensitive
    assert ext.has[-1] == split.known | split.sensitive


def test_disjoint_union_shifts_labels():
    a = Instance.build(2, [[1]], [[2]])
    b = Instance.build(1, [[1]], [[]])
    u = disjoint_union(a, b)
    assert u.n == 3 and u.wants == (frozenset({0}), frozenset({2}))
    with pytest.raises(InstanceError):
        disjoint_union(a, b.with_q(3))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 6), st.integers(0, 6), st.sampled_from([2, 3, 5]))
def test_random_instances_round_trip(seed, n, m, q):
    rng = random.Random(seed)
    inst = random_instance(rng, n, m, q)
    split = random_split(rng, n)
    split.check_partition(n)
    again, split2 = parse_instance(json.dumps(instance_to_dict(inst, split)))
    assert again == inst and split2 == split
