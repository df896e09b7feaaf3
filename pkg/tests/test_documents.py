import json

import pytest
from hypothesis import given, strategies as st

from galoisext import corpus
from galoisext import varieties as V
from galoisext.documents import (
    DocumentError,
    algebra_document,
    canonicalize,
    emit_documents,
    parse_documents,
    parse_texts,
    workspace_documents,
)

SAMPLES = ["samples/basic.json", "samples/dihedral.json"]


def z4_doc(**over):
    doc = algebra_document(V.cyclic(4), "Z4")
    doc.update(over)
    return doc


def parse(*docs):
    return parse_texts([("mem.json", emit_documents(list(docs)))])


def test_one_group_document():
    ws = parse(z4_doc())
    assert list(ws.algebras) == ["Z4"] and ws.algebras["Z4"] == V.cyclic(4)


def test_out_of_range_entry_is_a_validation_error():
    doc = z4_doc()
    doc["tables"][0][1][2] = 9
    with pytest.raises(DocumentError, match="out of range"):
        parse(doc)


def test_group_kind_is_axiom_checked():
    doc = algebra_document(V.cyclic(2), "bad")
    doc["tables"][1] = [0, 0]
    with pytest.raises(DocumentError):
        parse(doc)


def test_dangling_reference():
    m = {"type": "morphism", "name": "f", "source": "Z4", "target": "nowhere", "map": [0, 0, 0, 0]}
    with pytest.raises(DocumentError, match="nowhere"):
        parse(z4_doc(), m)


def test_duplicate_names_rejected():
    with pytest.raises(DocumentError, match="duplicate"):
        parse(z4_doc(), z4_doc())


def test_non_homomorphism_rejected():
    z2 = algebra_document(V.cyclic(2), "Z2")
    m = {"type": "morphism", "name": "f", "source": "Z4", "target": "Z2", "map": [0, 1, 1, 0]}
    with pytest.raises(DocumentError):
        parse(z4_doc(), z2, m)


def test_circular_squares_rejected():
    a = {"type": "square", "name": "a", "f_prime": "b", "a": "b", "b": "b", "f": "b"}
    b = {"type": "square", "name": "b", "f_prime": "a", "a": "a", "b": "a", "f": "a"}
    with pytest.raises(DocumentError):
        parse(a, b)


def test_parse_error_has_line_and_column():
    with pytest.raises(DocumentError, match=r"bad\.json:2:\d+"):
        parse_texts([("bad.json", '[\n{"type": }\n]')])


def test_incompatible_congruence_rejected():
    c = {"type": "congruence", "name": "c", "algebra": "Z4", "blocks": [0, 0, 1, 2]}
    with pytest.raises(DocumentError, match="not compatible"):
        parse(z4_doc(), c)


def test_sample_workspace_round_trip():
    ws = parse_documents(SAMPLES[:1])
    text = emit_documents(workspace_documents(ws))
    again = parse_texts([("again", text)])
    assert emit_documents(workspace_documents(again)) == text
    assert set(ws.names()) == set(again.names())


def test_canonical_text_is_stable():
    text = emit_documents([z4_doc()])
    assert canonicalize(text) == text
    shuffled = json.dumps(json.loads(text), indent=4, sort_keys=False)
    assert canonicalize(shuffled) == text


@given(st.sampled_from(corpus.groups("small") + corpus.rings("small")))
def test_parse_emit_round_trip(A):
    text = emit_documents([algebra_document(A, "X")])
    ws = parse_texts([("x", text)])
    assert ws.algebras["X"] == A
    assert emit_documents([algebra_document(ws.algebras["X"], "X")]) == text


def test_squares_and_towers_load():
    ws = parse_documents(SAMPLES)
    assert set(ws.squares) >= {"klein", "diagonal", "dihedral"}
    assert "dihedral_tower" in ws.towers
