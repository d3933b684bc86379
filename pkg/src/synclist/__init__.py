"""List-decodable insertion/deletion codes built from synchronization strings."""
from .bounds import (
    DomainError,
    alphabet_lower_bound,
    appendix_b_functions,
    deletion_rate_upper,
    insertion_rate_upper,
    random_deletion_rate,
    random_insertion_rate,
    rate_report,
)
from .channel import (
    ChannelBudget,
    CorruptionPattern,
    adversary_delete_least_frequent,
    adversary_insert_erasure,
    apply_pattern,
    find_confusable_pair,
    random_pattern,
)
from .codes import CodecConfig, InsdelCodec, RSCode, build_codec, insdel_encode, insdel_list_decode
from .decoder import CandidateLists, choose_params, global_list_decode, hit_statistics
from .kernels import Alphabet, AlphabetMismatchError, Matching, SymbolString, edit_distance, lcs, max_self_matching
from .random_codes import ProbabilityEstimate, mc_random_code_list_profile, subsequence_prob_exact
from .sync import ConstructionError, SyncConstructionConfig, SyncString, construct_sync, verify_sync

__version__ = "0.1.0"
