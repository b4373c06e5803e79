import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kpzlab._format import fmt, write_csv


@pytest.mark.parametrize("x,text", [(0.1, "0.1"), (1 / 3, "0.333333333333"), (2, "2"), (-0.0, "0"),
                                    (1e-20, "1e-20"), (float("inf"), "inf"), (True, "1")])
def test_fmt(x, text):
    assert fmt(x) == text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_roundtrip_to_12_digits(x):
    text = fmt(x)
    assert "," not in text
    assert float(text) == pytest.approx(x, rel=1e-11, abs=0)


def test_write_csv_stream():
    buf = io.StringIO()
    text = write_csv(("a", "b"), [(1, 0.5), ("x", 2.0)], buf)
    assert text == "a,b\n1,0.5\nx,2\n"
    assert buf.getvalue() == text
