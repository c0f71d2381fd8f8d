import pytest
from hypothesis import given, strategies as st

from pnu.presentations import (
    CatalogError,
    PresentationSyntaxError,
    Word,
    catalog_group,
    free_reduce,
    parse_group_spec,
    parse_presentation,
)

a, b, c = Word.gen(0), Word.gen(1), Word.gen(2)

letters = st.lists(st.tuples(st.integers(0, 3), st.integers(-3, 3)), max_size=20)


def test_parse_single_relator():
    P = parse_presentation("gens a; rel a^2")
    assert P.names == ("a",)
    assert P.relators == (a ** 2,)


def test_parse_commutator_expands():
    P = parse_presentation("gens a b; rel [a,b]")
    assert P.relators[0].letters == ((0, -1), (1, -1), (0, 1), (1, 1))


def test_parse_zero_exponent_rejected():
    with pytest.raises(PresentationSyntaxError, match="zero exponent"):
        parse_presentation("gens a; rel a^0")


def test_parse_errors_carry_position():
    with pytest.raises(PresentationSyntaxError) as exc:
        parse_presentation("gens a b\nrel a c")
    assert exc.value.line == 2
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("rel a")


def test_parse_comments_and_nested_commutators():
    P = parse_presentation("# header\ngens x y z  # three\nrel [[x,y],z] ; rel (x y)^-2")
    assert len(P.relators) == 2
    assert P.relators[1] == (Word.gen(0) * Word.gen(1)) ** -2


def test_free_reduce_examples():
    assert free_reduce([(0, 1), (0, -1)]) == ()
    assert free_reduce([(0, 2), (0, 3)]) == ((0, 5),)
    assert free_reduce([(0, 1), (1, 1), (1, -1), (0, 1)]) == ((0, 2),)


@given(letters)
def test_free_reduce_idempotent_and_shorter(ls):
    once = free_reduce(ls)
    assert free_reduce(once) == once
    assert sum(abs(e) for _, e in once) <= sum(abs(e) for _, e in ls)
    assert all(e != 0 for _, e in once)
    assert all(x[0] != y[0] for x, y in zip(once, once[1:]))


@given(letters)
def test_word_inverse(ls):
    w = Word(tuple(ls))
    assert not (w * w.inverse())


@given(st.lists(letters, max_size=5))
def test_parse_format_round_trip(rels):
    names = ("a", "b", "c", "d")
    text = "gens a b c d\n" + "".join(f"rel {Word(tuple(r)).format(names)}\n" for r in rels if free_reduce(r))
    P = parse_presentation(text)
    Q = parse_presentation(P.format())
    assert P == Q
    assert parse_presentation(Q.format()) == Q


def test_catalog_cyclic():
    assert catalog_group("cyclic:2").relators == (a ** 2,)


def test_catalog_dihedral():
    P = catalog_group("dihedral:16")
    assert P.relators == (a ** 8, b ** 2, (a * b) ** 2)


def test_catalog_extraspecial():
    P = catalog_group("extraspecial:3,p")
    assert P.relators == (a ** 3, b ** 3, c ** 3, a.comm(b) * c ** -1, a.comm(c), b.comm(c))


def test_catalog_is_deterministic():
    for spec in ("semidihedral:32", "product:dihedral:8,cyclic:2", "elemab:3,3"):
        assert catalog_group(spec).format() == catalog_group(spec).format()


@pytest.mark.parametrize("spec", ["dihedral:12", "semidihedral:8", "cyclic:6", "extraspecial:2,p",
                                  "product:cyclic:2,cyclic:3", "nosuch:3", "cyclic"])
def test_catalog_rejects(spec):
    with pytest.raises(CatalogError):
        catalog_group(spec)


def test_group_spec_grammar():
    s = parse_group_spec("product:dihedral:8,cyclic:2")
    assert s.family == "product" and s.order == 16 and s.prime == 2
    assert str(s) == "product:dihedral:8,cyclic:2"
    assert parse_group_spec("elemab:2,3").order == 8
    assert parse_group_spec("extraspecial:3,p2").order == 27


def test_file_family(tmp_path):
    f = tmp_path / "q.txt"
    f.write_text("gens x\nrel x^4\n")
    assert catalog_group(f"file:{f}").relators == (a ** 4,)
