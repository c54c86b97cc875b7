from __future__ import annotations

import json
import math
import random

import pytest

from jacobispec import (
    JacobiCoefficients,
    delta_sequence,
    from_json_dict,
    gauge_transform,
    load_operator,
    save_operator,
    step_operator,
    stripped,
    summarize,
    to_json_dict,
)
from jacobispec.operator import OperatorFormatError

from conftest import rand_gauge, rand_jacobi


def test_free_operator_has_zero_deltas():
    assert delta_sequence(JacobiCoefficients({})) == [0.0]


def test_single_diagonal_entry_delta():
    J = JacobiCoefficients({1: (1, 2j, 1)})
    assert delta_sequence(J) == [2.0, 0.0]


def test_index_shift_in_offdiagonal_delta():
    # a_1 = 2, c_1 = 1: the product deviation shows at position 2
    J = JacobiCoefficients({1: (2, 0, 1)})
    d = delta_sequence(J)
    assert d[0] == 0.0
    assert d[1] == pytest.approx(1.0, abs=1e-15)


def test_default_entries_are_normalized_away():
    J = JacobiCoefficients({1: (1, 0, 1), 3: (1, 1j, 1)})
    assert 1 not in J.entries
    assert J.support_bound == 3


def test_zero_offdiagonal_rejected():
    with pytest.raises(ValueError):
        JacobiCoefficients({1: (0, 1, 1)})


def test_summary_of_step_operator():
    s = summarize(step_operator(3, 0.5))
    assert s.Delta == pytest.approx(1.5)
    assert s.trace_norm == pytest.approx(1.5)
    assert s.Delta1 == pytest.approx(0.5 + 1.0 + 1.5)


def test_summary_free():
    s = summarize(JacobiCoefficients({}))
    assert s.Delta == s.Delta1 == s.trace_norm == 0.0


def test_summary_single_entry_tails():
    s = summarize(JacobiCoefficients({1: (1, 2j, 1)}))
    assert s.Delta == 2.0 and s.Delta1 == 2.0
    assert s.s0(0) == 2.0 and s.s0(1) == 0.0


def test_delta_sum_equals_Delta():
    rng = random.Random(55)
    for _ in range(50):
        J = rand_jacobi(rng, 10)
        s = summarize(J)
        assert sum(s.delta) == pytest.approx(s.Delta, rel=1e-13, abs=1e-13)


def test_tail_telescoping():
    rng = random.Random(17)
    for _ in range(30):
        J = rand_jacobi(rng, 9)
        s = summarize(J)
        for k in range(J.support_bound + 1):
            assert s.s0(k) - s.s0(k + 1) == pytest.approx(s.delta[k], abs=1e-14)


def test_delta_dominated_by_trace_norm():
    rng = random.Random(23)
    for _ in range(100):
        J = rand_jacobi(rng, 12, b_scale=2.0, offdiag_scale=0.8)
        s = summarize(J)
        t = s.trace_norm
        assert s.Delta <= 3.0 * t + t * t + 1e-12


def test_gauge_identity():
    J = JacobiCoefficients({1: (1, 1j, 1), 2: (1.2, 0, 0.8)})
    assert gauge_transform(J, [1, 1, 1]).entries == J.entries


def test_gauge_preserves_products():
    J = JacobiCoefficients({1: (1, 0.5, 1)})
    Jg = gauge_transform(J, [2.0])
    a, _, c = Jg.entries[1]
    assert a == 2.0 and c == 0.5
    assert summarize(Jg).Delta == pytest.approx(summarize(J).Delta)


def test_gauge_preserves_delta_sequence():
    rng = random.Random(31)
    for _ in range(60):
        J = rand_jacobi(rng, 8)
        r = rand_gauge(rng, J.support_bound)
        d0 = delta_sequence(J)
        d1 = delta_sequence(gauge_transform(J, r))
        assert len(d0) == len(d1)
        for x, y in zip(d0, d1):
            assert abs(x - y) <= 1e-14 * max(1.0, abs(x))


def test_gauge_rejects_zero_factor():
    with pytest.raises(ValueError):
        gauge_transform(JacobiCoefficients({}), [0.0])


def test_stripped_identity_and_shift():
    J = step_operator(3, 0.5)
    assert stripped(J, 0) is J
    J2 = stripped(J, 2)
    assert set(J2.entries) == {1}
    assert J2.b(1) == 0.5j
    assert stripped(J, 5).is_free()


def test_json_roundtrip(tmp_path):
    J = JacobiCoefficients({2: (1.5, 1 - 1j, 0.5), 4: (1, 2j, 1)})
    path = tmp_path / "op.json"
    save_operator(J, path)
    assert load_operator(path).entries == J.entries


def test_json_defaults_and_step_shorthand():
    J = from_json_dict({"entries": [{"j": 1, "b_im": 2.0}]})
    assert J.entries[1] == (1.0, 2.0j, 1.0)
    Js = from_json_dict({"step": {"n": 2, "h_re": 0.5}})
    assert Js.b(1) == Js.b(2) == 0.5j
    # complex heights rotate the potential
    Jc = from_json_dict({"step": {"n": 1, "h_re": 0.0, "h_im": 1.0}})
    assert Jc.b(1) == pytest.approx(-1.0 + 0.0j)


@pytest.mark.parametrize(
    "data",
    [
        "[]",
        '{"entries": [{"b_re": 1.0}]}',
        '{"entries": [{"j": 0}]}',
        '{"entries": [{"j": 1}, {"j": 1}]}',
        '{"entries": [{"j": 1, "a_re": 0.0, "a_im": 0.0}]}',
        '{"step": {"h_re": 1.0}}',
        '{"entries": [{"j": 1, "b_re": "x"}]}',
    ],
)
def test_malformed_descriptions_rejected(data):
    with pytest.raises(OperatorFormatError):
        from_json_dict(json.loads(data))


def test_truncated_file_diagnostic(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"entries": [')
    with pytest.raises(OperatorFormatError) as err:
        load_operator(path)
    assert "bad.json:1" in str(err.value)
