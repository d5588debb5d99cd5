import logging
from typing import List, Literal, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from latticedex.constants import DEFAULTS, Channel, FieldFamily
from latticedex.errors import InfeasibleDesignError, InvalidArgumentError
from latticedex.numberfield import (classify_prime, make_field, prime_ideal_from_principal, prime_ideals_above,
                                    split_completely_primes)
from latticedex.util import canonical_json


class FieldSpec(BaseModel):
    family: FieldFamily
    parameter: int

    def build(self):
        return make_field(self.family, self.parameter)


class IdealChoice(BaseModel):
    p: int
    index: int = Field(0, ge=0)


class PrimeSelection(BaseModel):
    """
    How the prime ideals of the code are picked.

    split: the first `count` primes above `p` (smallest completely split p when omitted)
    explicit: the `index`-th prime above each listed `p`
    generators: principal prime ideals g*O_K from coordinate vectors
    """
    mode: Literal["split", "explicit", "generators"]
    p: Optional[int] = None
    count: Optional[int] = Field(None, ge=1)
    ideals: List[IdealChoice] = []
    generators: List[List[int]] = []

    @model_validator(mode="after")
    def check_mode_fields(self):
        if self.mode == "explicit" and not self.ideals:
            raise ValueError("explicit prime selection needs a nonempty 'ideals' list")
        if self.mode == "generators" and not self.generators:
            raise ValueError("generator prime selection needs a nonempty 'generators' list")
        return self


class ChannelSweep(BaseModel):
    channel: Channel = Channel.AWGN
    snr_db: List[float]
    side_info_sets: List[List[int]] = [[]]
    trials: int = Field(10 ** 6, ge=1)
    min_errors: Optional[int] = Field(DEFAULTS["MIN_ERRORS"], ge=1)
    seed: int = 0
    workers: Optional[int] = Field(None, ge=1)
    fade_per_complex: bool = False
    gap_at: Optional[float] = Field(None, gt=0, lt=1)

    @field_validator("snr_db")
    @classmethod
    def snr_grid_increasing(cls, value):
        if not value:
            raise ValueError("SNR grid must not be empty")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("SNR grid must be strictly increasing")
        return value


class OutputSpec(BaseModel):
    directory: Optional[str] = None


class ExperimentSpec(BaseModel):
    name: str
    field: FieldSpec
    primes: PrimeSelection
    energy_radius_factor: float = Field(DEFAULTS["ENERGY_RADIUS_FACTOR"], gt=0)
    # empty means every nonempty subset of 1..K
    analyze_sets: List[List[int]] = []
    sweep: Optional[ChannelSweep] = None
    output: OutputSpec = OutputSpec()

    def to_json(self):
        return canonical_json(self.model_dump(mode="json"))


def parse_experiment(payload) -> ExperimentSpec:
    try:
        return ExperimentSpec.model_validate(payload)
    except ValidationError as e:
        raise InvalidArgumentError(f"Invalid experiment document: {e}") from e


def load_experiment(path) -> ExperimentSpec:
    """Load a JSON (or YAML) experiment document."""
    with open(path, "r", encoding="utf-8") as file:
        payload = yaml.safe_load(file)
    if not isinstance(payload, dict):
        raise InvalidArgumentError(f"{path} does not hold an experiment object")
    return parse_experiment(payload)


def load_config(path="config.yaml"):
    """Load the tool configuration YAML."""
    with open(path, "r") as file:
        return yaml.safe_load(file) or {}


def resolve_primes(field, selection: PrimeSelection) -> list:
    """Prime ideals for the code, in message order."""
    if selection.mode == "generators":
        return [prime_ideal_from_principal(field, field.element(g)) for g in selection.generators]

    if selection.mode == "explicit":
        ideals = []
        for choice in selection.ideals:
            above = prime_ideals_above(field, choice.p)
            if choice.index >= len(above):
                splitting = classify_prime(field, choice.p)
                raise InfeasibleDesignError(f"Ideal index {choice.index} requested above {choice.p}, but in {field} "
                                            f"{splitting.describe()}")
            ideals.append(above[choice.index])
        return ideals

    p = selection.p if selection.p is not None else split_completely_primes(field, 1)[0]
    above = prime_ideals_above(field, p)
    count = selection.count if selection.count is not None else len(above)
    if count > len(above):
        splitting = classify_prime(field, p)
        raise InfeasibleDesignError(f"{count} prime ideals requested above {p}, but in {field} "
                                    f"{splitting.describe()}")
    logging.info(f"Using {count} of the primes above {p} in {field}")
    return above[:count]
