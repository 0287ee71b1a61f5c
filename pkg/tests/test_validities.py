import random

import pytest

from mlsr.checker import check, find_countermodel
from mlsr.formula import nominals, props
from mlsr.hilbert import SCHEMAS, is_tautology
from mlsr.kripke import generate_random
from mlsr.validities import AXIOM_INSTANCES, update_order_nonequivalence, valid_corpus
import oracle

CORPUS = valid_corpus()


def test_every_schema_has_an_instance():
    assert set(AXIOM_INSTANCES) == set(SCHEMAS)
    assert len(CORPUS) >= 30


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_no_small_countermodel(name):
    assert find_countermodel(CORPUS[name], 3) is None


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_holds_on_random_models_per_oracle(name):
    f = CORPUS[name]
    rng = random.Random(name)
    for i in range(30):
        m = generate_random(rng.randint(1, 5), sorted(props(f)), rng.random(), rng.randrange(10**6),
                            nominals=sorted(nominals(f)))
        assert all(oracle.holds(m, s, f) for s in m.worlds)


def test_update_order_has_countermodel():
    f = update_order_nonequivalence()
    cm = find_countermodel(f, 4)
    assert cm is not None
    assert not check(cm.model, cm.point, f)
    assert not oracle.holds(cm.model, cm.point, f)


def test_corpus_not_just_tautologies():
    assert sum(not is_tautology(f) for f in CORPUS.values()) >= len(CORPUS) - 1
