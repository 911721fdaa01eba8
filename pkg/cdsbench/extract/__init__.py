from .extraction import CertificateEntry, ExtractionResult, Extractor, extract, simplify
from .prove import CorecProver, prove_corec
from .realize import FAILS, HOLDS, RealizabilityJudgment, RealizeResult, check_realizer, infer_sorts, realizes
from .roundtrip import STAGES, RoundtripReport, RoundtripRow, StageOutcome, roundtrip_report
from .streams import (
    SPLIT_FUNCTIONS,
    StreamSignature,
    even_term,
    merge_term,
    odd_term,
    pair_term,
    random_regular_stream,
    split_equations,
    split_position,
    split_term,
    stream_signature,
    with_split_library,
    zeros_term,
)

__all__ = [
    'CertificateEntry', 'CorecProver', 'ExtractionResult', 'Extractor', 'FAILS', 'HOLDS', 'RealizabilityJudgment',
    'RealizeResult', 'RoundtripReport', 'RoundtripRow', 'SPLIT_FUNCTIONS', 'STAGES', 'StageOutcome',
    'StreamSignature', 'check_realizer', 'even_term', 'extract', 'infer_sorts', 'merge_term',
    'odd_term', 'pair_term', 'prove_corec', 'random_regular_stream', 'realizes', 'roundtrip_report',
    'simplify', 'split_equations', 'split_position', 'split_term', 'stream_signature', 'with_split_library',
    'zeros_term',
]
