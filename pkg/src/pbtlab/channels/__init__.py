"""Channel representations, named families, Clebsch-Gordan channels and covariance checks."""

from .clebsch import CGCoefficientQuery, cg, clebsch_gordan, make_cg_channel, spin_operators
from .core import (
    ChannelLabel,
    ChoiMatrix,
    KrausChannel,
    apply,
    apply_local,
    apply_local_array,
    check_cptp,
    choi,
    compose_unitaries,
    identity_channel,
    is_unital,
    kraus_from_choi,
    mixture,
    unitary_channel,
)
from .covariance import (
    check_covariance,
    conjugate_generators,
    gell_mann,
    is_irreducible,
    spin_generators,
)
from .families import (
    PAULIS,
    make_amplitude_damping,
    make_depolarizing,
    make_extreme_cq,
    make_gc33,
    make_pauli,
    make_unital_canonical,
    make_werner_holevo,
    random_channel,
    unital_canonical_pauli_weights,
    weyl_operators,
)
from .io import ChannelFileError, channel_from_dict, channel_to_dict, load_channel

__all__ = [name for name in dir() if not name.startswith("_")]
