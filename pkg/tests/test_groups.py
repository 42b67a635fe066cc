"""Group presentations: multiplication tables, BFS words, free-group words."""

import pytest

from loccon.groups import (
    GroupPresentation,
    cyclic_group,
    dihedral_group,
    free_group,
    symmetric_group,
)
from loccon.padic import DomainError


def test_orders():
    assert cyclic_group(6).order == 6
    assert symmetric_group(3).order == 6
    assert symmetric_group(4).order == 24
    assert dihedral_group(4).order == 8


def test_identity_and_inverses():
    g = dihedral_group(5)
    e = g.identity
    for x in g.elements():
        assert g.multiply(x, g.inverse_element(x)) == e


def test_element_words_reproduce_elements():
    for g in (cyclic_group(4), symmetric_group(3), dihedral_group(4)):
        words = g.element_words()
        assert len(words) == g.order
        for el, w in words.items():
            acc = g.identity
            for gi, sign in w:
                factor = g.gen_elements[gi]
                if sign < 0:
                    factor = g.inverse_element(factor)
                acc = g.multiply(acc, factor)
            assert acc == el


def test_bad_table_rejected():
    with pytest.raises(DomainError):
        GroupPresentation(kind="finite", generators=("g",),
                          table=((0, 1), (1, 1)), identity=0,
                          gen_elements=(1,))


def test_nongenerating_set_rejected():
    # the transposition alone does not generate S_3
    s3 = symmetric_group(3)
    with pytest.raises(DomainError):
        GroupPresentation(kind="finite", generators=("s",), table=s3.table,
                          identity=s3.identity, gen_elements=(s3.gen_elements[0],))


def test_free_word_reduction():
    f = free_group(2)
    w = ((0, 1), (1, 1), (1, -1), (0, -1), (0, 1))
    assert f.reduce_word(w) == ((0, 1),)
    assert f.reduce_word(()) == ()


def test_free_invert_word():
    f = free_group(2)
    w = ((0, 1), (1, -1))
    assert f.reduce_word(tuple(w) + f.invert_word(w)) == ()


def test_words_up_to_counts():
    f = free_group(1)
    # reduced words of length <= 2 in one generator: e, g, g^-1, g^2, g^-2
    assert len(f.words_up_to(2)) == 5
    f2 = free_group(2)
    # 1 + 4 + 4*3
    assert len(f2.words_up_to(2)) == 17


def test_symmetric_group_3_is_nonabelian():
    s3 = symmetric_group(3)
    s, c = s3.gen_elements
    assert s3.multiply(s, c) != s3.multiply(c, s)
