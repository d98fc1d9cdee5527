"""Scattering theory for discrete-time quantum walks on Eulerian digraphs with tails."""

from .config import DEFAULT, Tolerances
from .graph import (
    Edge, EulerianGraphWithTails, MorphismKind, MorphismWitness, Tail,
    build_graph, check_morphism, find_pairing, reverse_graph, tail_permutations,
)
from .io import dump_walk, load_walk, walk_from_dict, walk_to_dict
from .oracle import arrival_amplitudes, arrival_table, simulate
from .scattering import (
    BoundStateBasis, Engine, ExitProbability, ScatterSample, TransmissionSeries,
    bound_states, eigenstate_component, exit_probability, first_arrival,
    scattering_matrix, transmission_series, unitarity_defect,
)
from .structure import (
    BoundaryBlock, LocalUnitary, QuantumWalk, assemble_boundary_block,
    attach_structure, check_quantum_automorphism, reverse_structure,
)
from .surgery import (
    AmplitudeFunction, HandleSpec, Verdict, add_handle_amplitudes, add_handle_graph,
    add_handles_multi, build_interferometer, compare_graphs, cut_edge_amplitudes,
    cut_edge_graph, interferometer_amplitudes, splice, splice_amplitudes,
)

from .walks import hadamard_vertex, line, pass_through, trapped_cycle

__version__ = "0.1.0"
