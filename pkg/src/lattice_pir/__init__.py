"""Lattice-coded private information retrieval over a Gaussian MAC."""

from .channel import (ChannelRealization, SubsetPartition, default_partition,
                      effective_gains, mac_output)
from .codebook import (Codebook, Packet, PhiRangeError, build_codebook,
                       exact_codebook, max_packet_bits, phi, phi_inv)
from .experiments import (ConfigError, ExperimentConfig, ExperimentResult, gap_scan,
                          load_config, load_result, rates_table, run_experiment,
                          write_rate_table_csv)
from .lattices import (IdentityCheck, NestedLatticePair, ScaledIntegerLattice,
                       coset_gap, counterexample_eval, in_fundamental_cell,
                       mod_lattice, quantize, sample_dither, second_moment,
                       verify_identity)
from .privacy import (QueryDistribution, empirical_tv_distance,
                      exact_query_distribution, leaky_second_query_vector,
                      verify_privacy_exact)
from .protocol import (FadingRoundConfig, QueryPair, RoundConfig, RoundTrace,
                       ServerState, decode_fading, decode_nonfading,
                       encode_transmit, first_query_vector, form_answer,
                       gen_queries, gen_queries_fading, mlan_intermediate_fading,
                       mlan_intermediate_nonfading, run_round, run_round_fading,
                       second_query_vector)
from .rates import (alpha_opt_fading, alpha_opt_nonfading, capacity_gap, gap_bound,
                    gap_bound_ratio, log2_pos, miso_capacity, rate_fading,
                    rate_fading_forms, rate_nonfading, sigma_eq_fading,
                    sigma_eq_nonfading, sigma_eq_opt_nonfading)

__version__ = "0.1.0"
