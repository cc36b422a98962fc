import json
import math

import pytest

from gibbslab import models
from gibbslab.errors import ValidationError
from gibbslab.jsonio import dump_json


def test_builtin_registry():
    assert set(models.BUILTINS) == {"bernoulli", "ising", "golden-mean"}
    with pytest.raises(ValidationError):
        models.builtin("sofic")


def test_bernoulli_parameter_validation():
    with pytest.raises(ValidationError):
        models.bernoulli(1.0)
    with pytest.raises(ValidationError):
        models.bernoulli(0.0)


def test_ising_field_enters_table():
    m = models.ising(0.5, 0.2)
    assert m.potential.values[(1, 1)] == pytest.approx(0.5 + 0.2, abs=1e-15)
    assert m.potential.values[(1, -1)] == pytest.approx(-0.5, abs=1e-15)
    assert m.potential.values[(-1, -1)] == pytest.approx(0.5 - 0.2, abs=1e-15)


def test_from_json_minimal():
    doc = {
        "alphabet": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"memory": 1, "values": {"1": math.log(0.6), "2": math.log(0.4)}},
    }
    m = models.from_json(json.dumps(doc))
    assert m.space.symbols == (1, 2)
    assert m.alpha == 0.5
    assert m.observable is None


def test_from_json_errors():
    with pytest.raises(ValidationError):
        models.from_json("not json")
    with pytest.raises(ValidationError):
        models.from_json(json.dumps({"alphabet": 2, "transitions": [[1, 1], [1, 1]]}))
    base = {
        "alphabet": 2,
        "transitions": [[1, 1], [1, 1]],
        "potential": {"memory": 1, "values": {"1": 0.0, "2": 0.0}},
    }
    bad_alpha = dict(base, alpha=1.5)
    with pytest.raises(ValidationError):
        models.from_json(json.dumps(bad_alpha))
    missing_word = dict(base, potential={"memory": 1, "values": {"1": 0.0}})
    with pytest.raises(ValidationError):
        models.from_json(json.dumps(missing_word))
    extra_word = dict(
        base,
        transitions=[[1, 1], [1, 0]],
        symbols=[0, 1],
        potential={"memory": 2, "values": {"0,0": 0.0, "0,1": 0.0, "1,0": 0.0, "1,1": 0.0}},
    )
    with pytest.raises(ValidationError):
        models.from_json(json.dumps(extra_word))
    bad_key = dict(base, potential={"memory": 1, "values": {"x": 0.0, "2": 0.0}})
    with pytest.raises(ValidationError):
        models.from_json(json.dumps(bad_key))


def test_document_round_trip_all_builtins():
    for name in models.BUILTINS:
        m = models.builtin(name)
        text = dump_json(models.to_document(m))
        again = models.from_json(text, name=m.name)
        assert dump_json(models.to_document(again)) == text
        assert again.space.symbols == m.space.symbols
        assert again.potential.values == m.potential.values
        assert again.observable.values == m.observable.values
