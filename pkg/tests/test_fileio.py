import pytest
from hypothesis import given

from closurelab.errors import FileSyntaxError, MissingHeader, UnknownAttribute
from closurelab.fileio import (
    format_facets_file,
    format_fd_file,
    format_set,
    parse_facets_file,
    parse_fd_file,
    parse_set,
)
from closurelab.fixtures import e1, e4

from conftest import fd_functions, hereditary


def test_parse_fd_file_examples():
    u, f = parse_fd_file("attrs: a b c d\na -> b\nb -> a\na c -> d")
    assert f == e1() and u == f.universe
    u, f = parse_fd_file("attrs: City Year RainfallTotal\nCity Year -> RainfallTotal")
    assert len(f) == 1 and f.fmt_lines() == ["City Year -> City Year RainfallTotal"]
    with pytest.raises(UnknownAttribute) as err:
        parse_fd_file("attrs: a\nb -> a")
    assert err.value.line == 2 and "line 2" in str(err.value)


def test_fd_grammar_details():
    _, f = parse_fd_file("# comment\nattrs:  a   b\r\n\n-> a   # empty left side\n")
    assert f.as_map() == {0: 1}
    _, raw = parse_fd_file("attrs: a b c\na -> b\na -> c\n", canonical=False)
    assert raw.as_map() == {1: 6}
    with pytest.raises(MissingHeader):
        parse_fd_file("a -> b\n")
    with pytest.raises(MissingHeader):
        parse_fd_file("")
    with pytest.raises(FileSyntaxError):
        parse_fd_file("attrs: a b\na b\n")
    with pytest.raises(FileSyntaxError):
        parse_fd_file("attrs: a b\na -> b -> a\n")
    with pytest.raises(FileSyntaxError):
        parse_fd_file("attrs: a a\n")


def test_parse_facets_file_examples():
    assert parse_facets_file("attrs: a b c\na b\nc") == e4()
    assert parse_facets_file("attrs: a b").members == {0}
    assert len(parse_facets_file("attrs: a b\na b")) == 4
    with pytest.raises(FileSyntaxError):
        parse_facets_file("attrs: a b\na b\na\n")
    with pytest.raises(UnknownAttribute):
        parse_facets_file("attrs: a b\nc\n")


def test_format_round_trips_fixtures():
    assert format_fd_file(e1()) == "attrs: a b c d\na -> a b\nb -> a b\na c -> a b c d\n"
    assert parse_facets_file(format_facets_file(e4())) == e4()
    u = e1().universe
    assert format_set(u, 0) == "{}"
    assert parse_set(u, "{}") == 0 and parse_set(u, "a, c") == 5


@given(fd_functions(max_n=6, max_pairs=8))
def test_fd_round_trip(f):
    text = format_fd_file(f)
    u, g = parse_fd_file(text)
    assert g == f and format_fd_file(g) == text


@given(hereditary(max_n=5))
def test_facets_round_trip(h):
    assert parse_facets_file(format_facets_file(h)) == h
