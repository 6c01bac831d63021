import random

import pytest

from microbot import isa
from microbot.station.scenario import parse_scenario


def random_instruction(rng: random.Random) -> isa.Instruction:
    mnemonic = rng.choice(isa.MNEMONICS)
    _, fields = isa.FORMATS[mnemonic]
    operands = []
    for kind, width in fields:
        lo, hi = isa._field_range(mnemonic, kind, width)
        operands.append(rng.randint(lo, hi))
    return isa.Instruction(mnemonic, tuple(operands))


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def scenario_from(obj: dict):
    return parse_scenario(obj)


def uniform_scenario(
    t0_c=25.0,
    robots=None,
    schedule=None,
    tick_s=0.25,
    duration_s=30.0,
    light=None,
    **extra,
):
    obj = {
        "arena": {"width_um": 20000, "height_um": 20000},
        "field": {"kind": "uniform", "t0_c": t0_c},
        "robots": robots or [{"id": 1, "seed": 1}],
        "schedule": schedule or [],
        "tick_s": tick_s,
        "duration_s": duration_s,
    }
    if light:
        obj["light"] = light
    obj.update(extra)
    return parse_scenario(obj)
