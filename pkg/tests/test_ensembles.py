import pytest

from biharp.core.atomic import classify
from biharp.core.errors import ConfigError
from biharp.harness.ensembles import generate, generate_one, load_spec
from biharp.schemas.ensemble import EnsembleKind, EnsembleSpec


@pytest.mark.parametrize("kind", list(EnsembleKind))
def test_every_kind_generates_nonzero_fixtures(kind):
    fixtures = generate({"kind": kind.value, "maxLevel": 3, "count": 5, "seed": 9})
    assert len(fixtures) == 5
    assert all(not f.is_zero and f.max_level == 3 for f in fixtures)


def test_generation_is_deterministic():
    spec = {"kind": "denseGaussian", "maxLevel": 2, "count": 4, "seed": 123}
    assert generate(spec) == generate(spec)


def test_fixture_does_not_depend_on_count():
    few = generate({"kind": "sparseRandom", "maxLevel": 3, "count": 2, "seed": 5})
    many = generate({"kind": "sparseRandom", "maxLevel": 3, "count": 6, "seed": 5})
    assert many[:2] == few


def test_seeds_differ():
    a = generate_one(EnsembleSpec(kind=EnsembleKind.DENSE_GAUSSIAN, max_level=2, seed=1), 0)
    b = generate_one(EnsembleSpec(kind=EnsembleKind.DENSE_GAUSSIAN, max_level=2, seed=2), 0)
    assert a != b


def test_full_density_fills_every_rectangle():
    f = generate({"kind": "sparseRandom", "maxLevel": 1, "density": 1.0, "seed": 3})[0]
    assert len(f) == 9


def test_single_atom_has_one_coefficient():
    f = generate({"kind": "singleAtom", "maxLevel": 4, "coefficientScale": 2.5, "seed": 8})[0]
    assert len(f) == 1
    assert list(f.values) == [2.5]


def test_lacunary_diagonal_spans_many_levels():
    f = generate({"kind": "lacunaryDiagonal", "maxLevel": 4, "ratio": 4.0, "seed": 17})[0]
    assert sorted(f.values) == [1.0, 4.0, 16.0, 64.0, 256.0]
    dec = classify(f, 1.0)
    assert len(dec.levels) >= 4


def test_lacunary_diagonal_is_anchored_at_the_origin():
    fixtures = generate({"kind": "lacunaryDiagonal", "maxLevel": 4, "ratio": 4.0, "count": 3, "seed": 17})
    f = fixtures[0]
    assert all(rect.iside.index == 0 and rect.jside.index == 0 for rect in f.support)
    assert sorted(rect.iside.level for rect in f.support) == [0, 1, 2, 3, 4]
    assert fixtures[1] == f == fixtures[2]
    assert [level.n for level in classify(f, 1.0).levels] == [-1, 2, 4, 6, 8]


def test_rectangle_comb_is_disjoint():
    f = generate({"kind": "rectangleComb", "maxLevel": 3, "seed": 4})[0]
    assert len(f) == 8
    assert len({rect.jside for rect in f.support}) == 1
    assert f.areas.sum() == pytest.approx(float(f.support[0].jside.measure))


@pytest.mark.parametrize(
    "data",
    [
        {"density": 0.0},
        {"density": 1.5},
        {"maxLevel": 9},
        {"count": 0},
        {"kind": "spiral"},
        {"coefficientScale": -1.0},
    ],
)
def test_invalid_specs(data):
    with pytest.raises(ConfigError):
        load_spec(data)
