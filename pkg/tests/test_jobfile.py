import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import cases
from gentle_ext.jobfile import CODES, JobFile, ParseError, apply_override, format_job, parse_job

A3REL = """\
# three vertices, one color
vertex 1
vertex 2
vertex 3
arrow a 1 2 s
arrow b 2 3 s
beta 1=2 2=2 3=2
"""

KRON = """\
vertex 1
vertex 2
arrow a 1 2 s
arrow b 1 2 t
beta 1=1 2=1
rank a=1 b=1
lambda 0=2
mu 0=3/2
theta 0=1:1
option field=fp:101 depth=5
"""


def error_code(text):
    with pytest.raises(ParseError) as err:
        parse_job(text)
    return err.value


def test_relation_inferred_from_shared_color():
    job = parse_job(A3REL)
    assert job.quiver().relations() == (("a", "b"),)
    assert job.rank is None and job.beta == {"1": 2, "2": 2, "3": 2}


def test_full_job():
    job = parse_job(KRON)
    assert job.lam == {0: 2} and job.mu == {0: Fraction(3, 2)}
    assert job.theta == {0: ("1", 1)}
    assert job.coefficient_field().p == 101 and job.depth == 5


def test_uncolored_arrows_with_relations():
    job = parse_job("vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation a b\n")
    q = job.quiver()
    assert q.color("a") == q.color("b") and q.relations() == (("a", "b"),)
    job = parse_job("vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\n")
    assert job.quiver().relations() == ()


def test_sign_completion():
    job = parse_job("vertex 1\nvertex 2\narrow a 1 2 s\narrow b 1 2 t\nsign 1:t=+\n")
    eps = job.sign_function(job.quiver())
    assert eps("1", "t") == 1 and eps("1", "s") == -1
    assert eps("2", "s") == 1 and eps("2", "t") == -1


@pytest.mark.parametrize("text,code,line", [
    ("vertex 1\nvertex 2\narrow a 1 2 s\narrow b 1 2 t\nsign 1:s=+ 1:t=+\n", "E005", 5),
    ("vertex 1\nlambda 0=0\n", "E006", 2),
    ("vertex 1\narrow a 1 9 s\n", "E002", 2),
    ("vertex 1\nrank z=1\n", "E003", 2),
    ("vertex 1\nvertex 1\n", "E004", 2),
    ("vertex 1\nbeta 1=2 1=3\n", "E004", 2),
    ("vertex 1\nbeta 1=x\n", "E007", 2),
    ("vertex 1\noption depth=1\n", "E007", 2),
    ("vertex 1\noption colour=red\n", "E008", 2),
    ("vertex 1\nvertex 2\narrow a 1 2 s\nsign 1:t=+\n", "E008", 4),
    ("vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation b a\n", "E009", 6),
    ("vertex 1\nfrobnicate\n", "E001", 2),
    ("", "E001", 1),
])
def test_error_codes(text, code, line):
    err = error_code(text)
    assert err.code == code and err.line == line
    assert code in CODES


def test_error_column():
    err = error_code("vertex 1\nbeta 1=1 7=2\n")
    assert (err.line, err.col) == (2, 10)


def test_override_replaces_section():
    job = parse_job(KRON)
    job2 = apply_override(job, "lambda", "0=5")
    assert job2.lam == {0: 5} and job.lam == {0: 2}
    job3 = apply_override(job, "option", "field=rational")
    assert job3.field_name == "rational"
    with pytest.raises(ParseError):
        apply_override(job, "beta", "9=1")


def test_round_trip_examples():
    for text in (A3REL, KRON):
        job = parse_job(text)
        assert parse_job(format_job(job)) == job


@given(cases(max_beta=4), st.integers(0, 10 ** 6))
def test_round_trip_random(case, seed):
    rng = random.Random(seed)
    q = case.q
    job = JobFile(
        vertices=list(q.vertices),
        arrows=[(a.id, a.tail, a.head, a.color) for a in q.arrows],
        beta=dict(case.beta),
        rank=dict(case.r) if rng.random() < 0.7 else None,
        sign={k: v for k, v in case.eps.as_dict().items() if rng.random() < 0.5},
        lam={b: Fraction(rng.randint(1, 9), rng.randint(1, 4)) for b in range(rng.randint(0, 2))},
        mu={b: Fraction(-rng.randint(1, 9)) for b in range(rng.randint(0, 2))},
        field_name=rng.choice(["rational", "fp:101"]),
        depth=rng.choice([None, 3, 10]),
    )
    # keep only sign entries consistent with a single sign function
    text = format_job(job)
    parsed = parse_job(text)
    assert parsed == job
    assert format_job(parsed) == text
