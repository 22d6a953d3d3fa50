import numpy as np
import pytest

from puedetect import bpnn as nn
from puedetect.errors import ConfigError, ValidityError


def numeric_gradient(model, x, y, kind, h=1e-4):
    """Fourth-order central differences."""
    flat = model.flat()
    grad = np.empty_like(flat)

    def at(k, step):
        w = flat.copy()
        w[k] += step
        return nn.loss(nn.BpnnModel.from_flat(w), x, y, kind)

    for k in range(flat.size):
        grad[k] = (-at(k, 2 * h) + 8 * at(k, h) - 8 * at(k, -h) + at(k, -2 * h)) / (12 * h)
    return grad


def relative_error(a, b):
    scale = np.maximum(np.abs(a), np.abs(b))
    return np.where(scale > 1e-8, np.abs(a - b) / np.where(scale > 0, scale, 1.0), np.abs(a - b))


def separable_set(rng, n=400):
    # PU reports: strong RSS; attacker reports: weak RSS
    is_att = rng.random(n) < 0.5
    xy = rng.uniform(-1, 1, (n, 2))
    rss = np.where(is_att, rng.uniform(-1.0, -0.2, n), rng.uniform(0.2, 1.0, n))
    return np.column_stack([xy, rss]), nn.one_hot(is_att)


def test_zero_model_outputs_half():
    np.testing.assert_array_equal(nn.forward(nn.BpnnModel.zeros(), [0.3, -0.1, 0.9]), [0.5, 0.5])


def test_scaling_output_weights_raises_score(rng):
    model = nn.BpnnModel.random(rng)
    model.w2[1] = np.abs(model.w2[1]) + 0.1
    x = rng.uniform(-1, 1, 3)
    before = nn.forward(model, x)[1]
    bigger = model.copy()
    bigger.w2[1] *= 3.0
    assert nn.forward(bigger, x)[1] > before


@pytest.mark.parametrize("kind", nn.LOSSES)
def test_gradient_matches_finite_differences(kind):
    gen = np.random.default_rng(2024)
    for _ in range(20):
        model = nn.BpnnModel.random(gen, scale=1.5)
        x = gen.uniform(-1, 1, (1, 3))
        y = nn.one_hot(gen.random(1) < 0.5)
        analytic = nn.gradients(model, x, y, kind).flat()
        numeric = numeric_gradient(model, x, y, kind)
        assert np.max(relative_error(analytic, numeric)) < 1e-5


def test_score_is_output_difference():
    model = nn.BpnnModel.zeros()
    assert nn.score(model, [0.1, 0.2, 0.3]) == 0.0
    # logits chosen so outputs are exactly 0.1 and 0.9
    model.b2[:] = [np.log(0.1 / 0.9), np.log(0.9 / 0.1)]
    assert nn.score(model, [0.0, 0.0, 0.0]) == pytest.approx(0.8)


def test_common_logit_shift_keeps_decisions(rng):
    model = nn.BpnnModel.random(rng, scale=2.0)
    x = rng.uniform(-1, 1, (200, 3))
    shifted = model.copy()
    shifted.b2 += 0.7
    np.testing.assert_array_equal(nn.forward(model, x).argmax(1), nn.forward(shifted, x).argmax(1))


def test_train_separable_set(rng):
    x, y = separable_set(rng)
    model = nn.train((x, y), 500, 0.5, np.random.default_rng(1))
    assert nn.accuracy(model, x, y) >= 0.95


def test_zero_epochs_returns_initial_model(rng):
    x, y = separable_set(rng, 50)
    init = nn.BpnnModel.random(np.random.default_rng(3))
    out = nn.train((x, y), 0, 0.5, np.random.default_rng(1), init=init)
    np.testing.assert_array_equal(out.flat(), init.flat())
    drawn = nn.train((x, y), 0, 0.5, np.random.default_rng(1))
    np.testing.assert_array_equal(drawn.flat(), nn.BpnnModel.random(np.random.default_rng(1)).flat())


def test_training_is_deterministic(rng):
    x, y = separable_set(rng, 100)
    a = nn.train((x, y), 20, 0.3, np.random.default_rng(6))
    b = nn.train((x, y), 20, 0.3, np.random.default_rng(6))
    np.testing.assert_array_equal(a.flat(), b.flat())


@pytest.mark.parametrize("kind", nn.LOSSES)
def test_training_loss_decreases(rng, kind):
    x, y = separable_set(rng, 60)
    hist = []
    model = nn.train((x, y), 50, 0.05, np.random.default_rng(2), loss_kind=kind, history=hist)
    init = nn.BpnnModel.random(np.random.default_rng(2))
    assert nn.loss(model, x, y, kind) <= nn.loss(init, x, y, kind)
    assert hist[-1] <= hist[0]


def test_sample_objects_accepted(rng):
    x, y = separable_set(rng, 40)
    samples = [nn.BpnnSample(f, l) for f, l in zip(x, y)]
    a = nn.train(samples, 3, 0.3, np.random.default_rng(0))
    b = nn.train((x, y), 3, 0.3, np.random.default_rng(0))
    np.testing.assert_array_equal(a.flat(), b.flat())


def test_single_class_rejected(rng):
    x = rng.uniform(-1, 1, (10, 3))
    with pytest.raises(ValidityError):
        nn.train((x, nn.one_hot(np.zeros(10, bool))), 5, 0.1, rng)
    with pytest.raises(ValidityError):
        nn.train([], 5, 0.1, rng)
    with pytest.raises(ConfigError):
        nn.train((x, nn.one_hot(np.arange(10) % 2 == 0)), 5, 0.1, rng, loss_kind="hinge")


def test_weight_file_round_trip(tmp_path, rng):
    model = nn.BpnnModel.random(rng)
    path = tmp_path / "w.txt"
    model.save(path)
    tokens = path.read_text().split()
    assert len(tokens) == 4 * 3 + 4 + 2 * 4 + 2
    assert float(tokens[0]) == model.w1[0, 0] and float(tokens[3]) == model.w1[1, 0]
    assert float(tokens[12]) == model.b1[0] and float(tokens[16]) == model.w2[0, 0]
    np.testing.assert_array_equal(nn.BpnnModel.load(path).flat(), model.flat())


def test_bad_weight_file(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("1 2 3")
    with pytest.raises(ConfigError):
        nn.BpnnModel.load(path)


def test_scaler_range(rng):
    raw = rng.normal(size=(100, 3)) * [500, 500, 20] + [0, 0, -120]
    scaler = nn.FeatureScaler.fit(raw)
    z = scaler.transform(raw)
    assert z.min() == pytest.approx(-1.0) and z.max() == pytest.approx(1.0)
    assert np.all(np.abs(scaler.transform(raw * 10)) <= 1.0)


def test_aggregate_vote_and_mean():
    model = nn.BpnnModel.zeros()
    model.b2[:] = [0.0, 1.0]
    dec = nn.aggregate(model, np.zeros((5, 3)))
    assert dec.majority_attacker and dec.vote_fraction == 1.0
    assert dec.mean_score > 0
