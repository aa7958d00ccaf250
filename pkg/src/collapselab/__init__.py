"""collapselab: exact and Monte Carlo simulations of quantum and classical collapse.

Modules by topic:

* :mod:`collapselab.qlin` -- dense complex linear algebra on small tensor spaces
* :mod:`collapselab.measurement` -- projectors, Born rule, dephasing, pointer coupling
* :mod:`collapselab.lhv` -- local-hidden-variable models and the classical bound
* :mod:`collapselab.bell` -- singlet correlations and their bound violation
* :mod:`collapselab.monty` -- Monty Hall posteriors and win rates
* :mod:`collapselab.cat` -- the nucleus/cat/observer unitary story
* :mod:`collapselab.mc` -- reproducible counter-based Monte Carlo
* :mod:`collapselab.cli` -- the ``collapselab`` command
"""

from . import bell, cat, cli, lhv, mc, measurement, monty, qlin
from .bell import CorrelationReport, chsh_quantum, correlation, singlet
from .lhv import ChshSettings, LhvModel, chsh_exact, correlation_exact, random_model
from .mc import StreamSpec, TrialStream, TrialSummary, run_batches, run_trials
from .measurement import (
    MeasurementOutcome,
    ProjectorSet,
    born_distribution,
    dephasing_channel,
    ideal_measurement_unitary,
    ring_momentum_projectors,
    spin_projectors,
)
from .monty import MontyInstance, posterior, simulate_game, win_probability
from .qlin import (
    DensityMatrix,
    PureState,
    TensorSpace,
    UnitaryOperator,
    evolve,
    expectation,
    partial_trace,
    purity,
    tensor_product,
)

__version__ = "0.1.0"

__all__ = [
    "ChshSettings",
    "CorrelationReport",
    "DensityMatrix",
    "LhvModel",
    "MeasurementOutcome",
    "MontyInstance",
    "ProjectorSet",
    "PureState",
    "StreamSpec",
    "TensorSpace",
    "TrialStream",
    "TrialSummary",
    "UnitaryOperator",
    "bell",
    "born_distribution",
    "cat",
    "chsh_exact",
    "chsh_quantum",
    "cli",
    "correlation",
    "correlation_exact",
    "dephasing_channel",
    "evolve",
    "expectation",
    "ideal_measurement_unitary",
    "lhv",
    "mc",
    "measurement",
    "monty",
    "partial_trace",
    "posterior",
    "purity",
    "qlin",
    "random_model",
    "ring_momentum_projectors",
    "run_batches",
    "run_trials",
    "simulate_game",
    "singlet",
    "spin_projectors",
    "tensor_product",
    "win_probability",
]
