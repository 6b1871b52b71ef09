import warnings

import pytest

from mvbetti import load_example
from mvbetti.exceptions import ParseError
from mvbetti.spacefile import ClosureWarning, bundled_examples, parse_space, read_space

from oracles import betti_numbers


def _counts(sub):
    out = {}
    for s in sub.simplices():
        out[len(s) - 1] = out.get(len(s) - 1, 0) + 1
    return [out[k] for k in sorted(out)]


def test_octahedron_counts(octahedron):
    assert _counts(octahedron.space) == [6, 12, 8]


def test_octahedron_named_sets(octahedron):
    h1, h2 = octahedron.lookup("H1"), octahedron.lookup("H2")
    assert (h1 & h2) == octahedron.lookup("H12")
    assert (octahedron.lookup("C1") & octahedron.lookup("C2")) == octahedron.lookup("C12")
    assert _counts(octahedron.lookup("C12")) == [2]
    assert [n for n, _ in octahedron.root_cover()] == ["H1", "H2"]


def test_bundled_examples_listed():
    names = bundled_examples()
    for want in ("octahedron", "circle", "torus", "projective-plane", "two-triangles", "two-points"):
        assert want in names


@pytest.mark.parametrize("name", ["octahedron", "circle", "torus", "projective-plane", "two-triangles", "two-points"])
def test_bundled_examples_have_expected_cohomology(name):
    expected = {
        "octahedron": [1, 0, 1], "circle": [1, 1], "torus": [1, 2, 1],
        "projective-plane": [1, 0, 0], "two-triangles": [2], "two-points": [2],
    }[name]
    f = load_example(name)
    facets = [tuple(f.complex.simplices[s]) for s in f.space.facets()]
    got = betti_numbers(facets)
    assert (got + [0] * 3)[: len(expected)] == expected


def test_unknown_bundled_name():
    with pytest.raises(KeyError):
        load_example("klein-bottle-of-doom")


def test_single_and_multi_line_blocks():
    f = parse_space(
        "vertex a\nvertex b\nvertex c\nsimplex a b\nsimplex b c\n"
        "subcomplex L { simplex a b }\n"
        "subcomplex R {\n  simplex b c\n}\n"
        "subcomplex S { all-containing b }\n"
        "cover space = L, R  # two arcs\n"
    )
    assert f.lookup("L") | f.lookup("R") == f.space
    assert f.lookup("S") == f.space
    assert f.covers == {"space": ["L", "R"]}


def test_closure_warning():
    with pytest.warns(ClosureWarning):
        f = parse_space("vertex a\nvertex b\nvertex c\nsimplex a b c\n")
    assert _counts(f.space) == [3, 3, 1]


def test_closed_input_is_silent():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_space("vertex a\nvertex b\nsimplex a b\n")


@pytest.mark.parametrize("text,line,fragment", [
    ("vertex a\nsimplex a b\n", 2, "unknown vertex"),
    ("vertex a\nvertex a\n", 2, "duplicate vertex"),
    ("vertex a\nsimplex a a\n", 2, "repeated vertex"),
    ("vertex a\nfoo a\n", 2, "unknown directive"),
    ("vertex a\nvertex b\nsimplex a b\nsubcomplex X {\n simplex a\n", 4, "never closed"),
    ("vertex a\ncover space = Y\n", 2, "unknown subcomplex"),
    ("vertex a\nsubcomplex X { simplex a }\ncover space = X\ncover space = X\n", 4, "duplicate cover"),
])
def test_parse_errors_report_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_space(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert f"line {line}" in str(info.value)


def test_read_space_from_path(tmp_path):
    p = tmp_path / "seg.sc"
    p.write_text("vertex a\nvertex b\nsimplex a b\n")
    f = read_space(p)
    assert _counts(f.space) == [2, 1]


def test_missing_root_cover():
    f = parse_space("vertex a\n")
    with pytest.raises(KeyError):
        f.root_cover()
