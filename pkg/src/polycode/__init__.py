"""Polytope codes over adversarial channels: exact-integer codecs with
Gram-table consistency checks, syndrome-graph decoding, layered packet codes,
undecodability witnesses, and a Byzantine distributed-storage simulator.
"""

from .errors import (AdversaryBudgetError, ConstructionError, DecodeError,
                     ParameterError, PolycodeError, ProtocolViolationError,
                     SerializationError)
from .genmatrix import (GeneratorMatrix, build_v_matrix, rotate_generator,
                        systematic_source_row)
from .linalg import (all_submatrices_nonsingular, integer_null_vector,
                     solve_exact)
from .source_packets import (PacketBudget, SourceBlock, pack_group,
                             pack_source, serialize_packet, symbol_budget,
                             unpack_block, unpack_rows)
from .polytope_codec import (ReceivedBundle, SyndromeGraph, TransmittedBundle,
                             build_syndrome_graph, decode_report, encode,
                             honest_channel, recover_gram, source_gram,
                             trusted_set)
from .vpec import (ERASURE, LayeredBundle, LayeredReceived, VpecCodeParams,
                   erasure_distortion, honest_layered, make_params,
                   max_uncertified, rd_tables, three_packet_decode,
                   three_packet_encode, vpec_decode, vpec_encode)
from .adversary import (AttackPlan, UndecodableWitness, apply_attack,
                        apply_layered_attack, scale_witness,
                        search_worst_attack, undecodable_witness,
                        verify_witness)
from .dss_sim import (DssParams, DssSystemState, dc_decode,
                      dss_capacity_bounds, init_dss, repair_node,
                      run_scenario, verify_flow_conditions)

__version__ = "0.1.0"
