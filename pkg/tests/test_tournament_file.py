import io

import pytest

from components.family_generator import cyclic_triangle, family
from components.isomorphism import enumerate_tournaments
from components.tournament import Ordering
from components.tournament_file import parse, read_tournament, serialize, write_tournament
from main import EXIT_USAGE, run
from utils.errors import TournamentFileError


def test_parse_the_triangle():
    T, ordering = parse("3\n010\n001\n100\n")
    assert T == cyclic_triangle()
    assert ordering == Ordering.identity(3)


def test_parse_skips_leading_comments():
    T, _ = parse("# cyclic\n# triangle\n3\n010\n001\n100")
    assert T == cyclic_triangle()


def test_parse_empty_tournament():
    T, ordering = parse("0\n")
    assert T.n == 0
    assert len(ordering) == 0


@pytest.mark.parametrize(
    "text, message, line, column",
    [
        ("2\n01\n01\n", "diagonal entry for vertex 1", 3, 2),
        ("2\n00\n00\n", "unassigned", 3, 1),
        ("3\n010\n001\n101\n", "diagonal entry for vertex 2", 4, 3),
        ("3\n010\n0x1\n100\n", "unexpected character", 3, 2),
        ("3\n010\n00\n100\n", "row has 2 characters", 3, 3),
        ("three\n", "header", 1, 1),
        ("³\n", "header", 1, 1),
        ("# c\n-1\n", "header", 2, 1),
        ("3\n010\n001\n", "expected 3 rows", 4, None),
        ("1\n0\n1\n", "after the last row", 3, 1),
    ],
)
def test_parse_reports_the_first_problem(text, message, line, column):
    with pytest.raises(TournamentFileError, match=message) as raised:
        parse(text)
    assert raised.value.line == line
    assert raised.value.column == column


def test_pair_assigned_twice():
    with pytest.raises(TournamentFileError, match="assigned twice"):
        parse("3\n011\n101\n100\n")


def test_missing_header():
    with pytest.raises(TournamentFileError, match="missing header"):
        parse("# only a comment\n")


@pytest.mark.parametrize(
    "name, T",
    [("d3.txt", family("D", 3)), ("u3.txt", family("U", 3)), ("n.txt", family("N")), ("s3.txt", family("S", 3)), ("delta2.txt", family("Delta2"))],
)
def test_fixtures_match_the_families(fixtures_dir, name, T):
    loaded, _ = read_tournament(fixtures_dir / name)
    assert loaded == T


def test_serialize_with_comments_and_ordering():
    text = serialize(cyclic_triangle(), Ordering(seq=(2, 1, 0)), comments=["reversed"])
    assert text == "# reversed\n3\n001\n100\n010\n"
    T, _ = parse(text)
    assert T == cyclic_triangle().induced([2, 1, 0])


def test_serialize_then_parse_keeps_text():
    for n in range(1, 7):
        for T in enumerate_tournaments(n):
            text = serialize(T)
            parsed, ordering = parse(text)
            assert parsed == T
            assert ordering == Ordering.identity(n)
            assert serialize(parsed) == text


def test_write_then_read(tmp_path):
    path = tmp_path / "nested" / "d3.txt"
    write_tournament(path, family("D", 3), comments=["D_3"])
    assert path.read_text().startswith("# D_3\n7\n")
    T, _ = read_tournament(path)
    assert T == family("D", 3)


def test_read_from_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("3\n010\n001\n100\n"))
    T, _ = read_tournament("-")
    assert T == cyclic_triangle()


def test_unreadable_file(tmp_path):
    with pytest.raises(TournamentFileError, match="cannot read"):
        read_tournament(tmp_path / "missing.txt")


def test_file_that_is_not_utf8(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"3\n01\xff\n001\n100\n")
    with pytest.raises(TournamentFileError, match="not UTF-8"):
        read_tournament(path)
    assert run(["chi", str(path)], stream=io.StringIO()) == EXIT_USAGE
