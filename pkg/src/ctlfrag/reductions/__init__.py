"""Hardness-instance generators built from games, circuits and 3CNF formulas."""

from .circuits import (
    CircuitError,
    MonotoneCircuit,
    gen_circuit_ax,
    gen_circuit_ef,
    gen_circuit_ex,
    load_netlist,
    parse_bits,
    parse_netlist,
)
from .cnf import (
    Cnf3,
    CnfError,
    diamond_chain,
    gen_3cnf_ctlplus_ef,
    gen_3cnf_ctlplus_eg,
    load_dimacs,
    parse_dimacs,
)
from .games import (
    AlternatingGame,
    GameError,
    game_value,
    game_values,
    gen_game_af_eg,
    gen_game_ax_ex,
    gen_game_eg_only,
    load_game,
    random_game,
)
from .instance import (
    BundleError,
    HardnessInstance,
    Provenance,
    digest,
    is_bundle,
    read_bundle,
    write_bundle,
)
from .lift import LiftWarning, to_ectl_instance
from .snsat import SnsatError, SnsatFormulas, build_snsat_psi

GAME_GENERATORS = {
    "game-ax-ex": gen_game_ax_ex,
    "game-af-eg": gen_game_af_eg,
    "game-eg": gen_game_eg_only,
}
CIRCUIT_GENERATORS = {
    "circuit-ex": gen_circuit_ex,
    "circuit-ef": gen_circuit_ef,
    "circuit-ax": gen_circuit_ax,
}
CNF_GENERATORS = {
    "3cnf-eg": gen_3cnf_ctlplus_eg,
    "3cnf-ef": gen_3cnf_ctlplus_ef,
}
GENERATOR_NAMES = (*GAME_GENERATORS, *CIRCUIT_GENERATORS, *CNF_GENERATORS,
                   "ectl-lift", "snsat-psi")

__all__ = [
    "AlternatingGame", "BundleError", "CIRCUIT_GENERATORS", "CNF_GENERATORS",
    "CircuitError", "Cnf3", "CnfError", "GAME_GENERATORS", "GENERATOR_NAMES",
    "GameError", "HardnessInstance", "LiftWarning", "MonotoneCircuit",
    "Provenance", "SnsatError", "SnsatFormulas", "build_snsat_psi", "diamond_chain",
    "digest", "game_value", "game_values", "gen_3cnf_ctlplus_ef", "gen_3cnf_ctlplus_eg",
    "gen_circuit_ax", "gen_circuit_ef", "gen_circuit_ex", "gen_game_af_eg",
    "gen_game_ax_ex", "gen_game_eg_only", "is_bundle", "load_dimacs", "load_game",
    "load_netlist", "parse_bits", "parse_dimacs", "parse_netlist", "random_game",
    "read_bundle", "to_ectl_instance", "write_bundle",
]
