import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from amou_k0 import amou, morphisms
from amou_k0.amou import Algebra
from amou_k0.errors import ParseError, UnknownName
from amou_k0.workspace import Workspace, format_complex, parse_complex, parse_matrix

TEXT = """\
# two algebras and a map
algebra A blocks = [1, 2]
algebra B blocks = [3]
element p in A level (1,1) block 2 = [[1+0i, 0],
                                      [0, 0]]   # a rank-one corner
element v in A level (1,2) block 1 = [[1.5-2i, 3e-2i]]
morphism phi : A -> B mult = [[1, 1]]
"""


def test_parse_records():
    ws = Workspace.parse(TEXT)
    assert ws.algebra("A") == Algebra((1, 2))
    p = ws.element("p")
    assert p.level == (1, 1)
    assert not p.blocks[0].any()
    assert np.array_equal(p.blocks[1], np.diag([1, 0]))
    assert ws.element("v").blocks[0].tolist() == [[1.5 - 2j, 0.03j]]
    phi = ws.morphism("phi")
    assert phi.unital and np.array_equal(phi.conjugators[0], np.eye(3))


@pytest.mark.parametrize(
    "text, value",
    [("1+2i", 1 + 2j), ("1 - 2.5e-3 i", 1 - 0.0025j), ("-3", -3), ("2i", 2j), ("0.5+0i", 0.5)],
)
def test_complex_literals(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["1+2j", "abc", "1i2", ""])
def test_bad_complex_literals(text):
    with pytest.raises(ParseError):
        parse_complex(text)


def test_matrix_whitespace_insensitive():
    a = parse_matrix("[ [ 1 + 1i ,2 ] ,[3,  4 - 0.5 i ] ]")
    assert a.tolist() == [[1 + 1j, 2], [3, 4 - 0.5j]]


@pytest.mark.parametrize("text", ["[[1, 2], [3]]", "[1, 2]", "[[1, 2]", "[[1]] x", "[]"])
def test_bad_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


@pytest.mark.parametrize(
    "text",
    [
        "algebra A blocks = [0]",
        "algebra A blocks = [1]\nelement p in A level (1,1) block 2 = [[1]]",
        "algebra A blocks = [2]\nelement p in A level (1,1) block 1 = [[1]]",
        "algebra A blocks = [1]\nalgebra B blocks = [2]\nmorphism f : A -> B mult = [[3]]",
        "widget A",
        "  indented first line",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        Workspace.parse(text)


def test_unknown_references():
    with pytest.raises(UnknownName):
        Workspace.parse("element p in X level (1,1) block 1 = [[1]]")
    ws = Workspace.parse(TEXT)
    with pytest.raises(UnknownName):
        ws.element("nope")
    with pytest.raises(UnknownName):
        ws.morphism("nope")


def test_error_mentions_line():
    with pytest.raises(ParseError, match="line 3"):
        Workspace.parse("algebra A blocks = [1]\n\nelement p in A level (1,1) block 1 = [[1, ]]")


floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(floats, floats)
def test_complex_round_trip_is_bit_exact(re, im):
    z = complex(re, im)
    back = parse_complex(format_complex(z))
    assert np.float64(back.real).tobytes() == np.float64(z.real).tobytes()
    assert np.float64(back.imag).tobytes() == np.float64(z.imag).tobytes()


@given(st.integers(0, 2**32 - 1))
def test_workspace_round_trip(seed):
    rng = np.random.default_rng(seed)
    ws = Workspace()
    a, b = Algebra((1, 2)), Algebra((2, 3))
    ws.add_algebra("A", a)
    ws.add_algebra("B", b)
    ws.add_element("x", "A", a.random(rng, 2, 3))
    ws.add_element("y", "B", b.random(rng, 1))
    phi = morphisms.random_unital_spec(rng, a)
    ws.add_algebra("T", phi.target)
    ws.add_morphism("phi", "A", "T", phi)
    text = ws.dumps()
    back = Workspace.parse(text)
    assert back.dumps() == text
    for name in ("x", "y"):
        for u, v in zip(ws.element(name).blocks, back.element(name).blocks):
            assert u.tobytes() == v.tobytes()
    for u, v in zip(phi.conjugators, back.morphism("phi").conjugators):
        assert u.tobytes() == v.tobytes()
    assert np.array_equal(back.morphism("phi").multiplicity, phi.multiplicity)


def test_save_and_load(tmp_path):
    ws = Workspace.parse(TEXT)
    path = tmp_path / "ws.amk"
    ws.save(path)
    assert Workspace.load(path).dumps() == ws.dumps()
    with pytest.raises(ParseError):
        Workspace.load(tmp_path / "missing.amk")


def test_element_algebra_must_match():
    ws = Workspace.parse(TEXT)
    with pytest.raises(ParseError):
        ws.add_element("z", "B", amou.Algebra((1, 2)).unit(1))
