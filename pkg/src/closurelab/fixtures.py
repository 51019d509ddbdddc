"""Small hand-checkable instances used by the tests, the docs and the audit."""
from .fileio import parse_facets_file, parse_fd_file

E1 = """\
attrs: a b c d
a -> b
b -> a
a c -> d
"""

# empty left side: the closure of the empty set is {a}
E2 = """\
attrs: a b
-> a
"""

E3 = """\
attrs: a b
a
b
"""

# not a matroid: {c} cannot be extended by a or b
E4 = """\
attrs: a b c
a b
c
"""

FD_FIXTURES = {"E1": E1, "E2": E2}
FACET_FIXTURES = {"E3": E3, "E4": E4}


def e1():
    return parse_fd_file(E1)[1]


def e2():
    return parse_fd_file(E2)[1]


def e3():
    return parse_facets_file(E3)


def e4():
    return parse_facets_file(E4)
